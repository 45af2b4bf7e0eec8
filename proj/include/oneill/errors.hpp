#pragma once

#include <stdexcept>
#include <string>

namespace oneill {

struct SourcePos {
    int line = 0;  // 1-based; 0 means "no position"
    int col = 0;
    bool valid() const { return line > 0; }
};

// Single exception type for the whole library. The code determines how the
// CLI maps a failure to an exit status: bad input text exits 2, numerical
// degeneracy exits 3. Conditions that the analysis drivers handle internally
// (NotSpaceForm, MixedEigenvalue, Disagreement) still use this type so that
// an escaped one is loud instead of silent.
class Error : public std::runtime_error {
  public:
    enum class Code {
        Lex,
        Parse,
        Validation,
        UnknownScenario,
        MissingJ,
        Domain,
        DegenerateMetric,
        RankDeficient,
        RankInstability,
        SingularMatrix,
        MixedEigenvalue,
        NotSpaceForm,
        Disagreement,
        Internal,
    };

    Error(Code c, const std::string& msg, SourcePos p = {})
        : std::runtime_error(p.valid() ? "line " + std::to_string(p.line) + ":" +
                                             std::to_string(p.col) + ": " + msg
                                       : msg),
          code(c),
          pos(p) {}

    Code code;
    SourcePos pos;
};

inline int exit_code_for(Error::Code c) {
    switch (c) {
        case Error::Code::Lex:
        case Error::Code::Parse:
        case Error::Code::Validation:
        case Error::Code::UnknownScenario:
        case Error::Code::MissingJ:
            return 2;
        case Error::Code::Domain:
        case Error::Code::DegenerateMetric:
        case Error::Code::RankDeficient:
        case Error::Code::RankInstability:
        case Error::Code::SingularMatrix:
        case Error::Code::MixedEigenvalue:
        case Error::Code::Internal:
            return 3;
        default:
            return 1;
    }
}

[[noreturn]] inline void fail(Error::Code c, const std::string& msg, SourcePos p = {}) {
    throw Error(c, msg, p);
}

}  // namespace oneill
