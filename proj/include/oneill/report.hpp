#pragma once

// Check reporting. Residuals in a CheckReport are normalized: every
// sub-residual is divided by its own base tolerance (scaled by the user's
// --tol-scale), and max_residual is the max of those ratios. A check passes
// iff max_residual < tolerance, and tolerance is always 1.0 after
// normalization. The details lines carry the raw, unnormalized numbers.

#include <cstdio>
#include <string>
#include <vector>

namespace oneill {

enum class Status { Pass, Fail, NotApplicable, TheoremViolation };

inline const char* to_string(Status s) {
    switch (s) {
        case Status::Pass: return "PASS";
        case Status::Fail: return "FAIL";
        case Status::NotApplicable: return "NOT-APPLICABLE";
        case Status::TheoremViolation: return "THEOREM-VIOLATION";
    }
    return "?";
}

struct CheckReport {
    std::string check;
    Status status = Status::Pass;
    double max_residual = 0.0;
    double tolerance = 1.0;
    std::vector<std::string> details;
};

inline std::string fmt_g(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// Folds one raw sub-residual into a normalized report residual.
struct ResidualFold {
    double tol_scale = 1.0;
    double normalized = 0.0;

    void add(double raw, double base_tol) {
        double r = raw / (base_tol * tol_scale);
        if (r > normalized) normalized = r;
    }
};

inline CheckReport finish_report(std::string name, const ResidualFold& fold,
                                 std::vector<std::string> details) {
    CheckReport r;
    r.check = std::move(name);
    r.max_residual = fold.normalized;
    r.status = fold.normalized < 1.0 ? Status::Pass : Status::Fail;
    r.details = std::move(details);
    return r;
}

}  // namespace oneill
