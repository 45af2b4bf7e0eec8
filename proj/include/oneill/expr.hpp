#pragma once

// The scalar expression language in which metric entries, complex-structure
// entries, and map components are written. One lexer and one token-cursor
// parser serve both this grammar and the enclosing scenario grammar.
//
//   expr   = term {("+"|"-") term} ;
//   term   = factor {("*"|"/") factor} ;
//   factor = ["-"] power ;
//   power  = atom ["^" ["-"] integer] ;
//   atom   = number | ident | ident "(" expr ")" | "(" expr ")" ;
//
// Functions: sin, cos, exp, log, sqrt. Pow exponents are integers only.

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "oneill/errors.hpp"
#include "oneill/jet.hpp"

namespace oneill {

enum class Tok {
    Number,
    Ident,
    String,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Comma,
    Equals,
    End,
};

struct Token {
    Tok kind = Tok::End;
    std::string text;  // identifier spelling or string contents
    double num = 0.0;  // Number payload
    SourcePos pos;
};

// '#' starts a comment running to end of line. Unknown characters are a lex
// error carrying their position.
std::vector<Token> tokenize(const std::string& src);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Kind { Constant, Var, Neg, Add, Sub, Mul, Div, Pow, Call };
    Kind kind = Kind::Constant;
    double value = 0.0;  // Constant
    std::string name;    // Var: coordinate name; Call: function name
    int exponent = 0;    // Pow
    ExprPtr a, b;        // operands; unary/pow/call use only a
    SourcePos pos;
};

ExprPtr make_constant(double v, SourcePos p = {});
ExprPtr make_var(std::string name, SourcePos p = {});
ExprPtr make_neg(ExprPtr a, SourcePos p = {});
ExprPtr make_add(ExprPtr a, ExprPtr b, SourcePos p = {});
ExprPtr make_sub(ExprPtr a, ExprPtr b, SourcePos p = {});
ExprPtr make_mul(ExprPtr a, ExprPtr b, SourcePos p = {});
ExprPtr make_div(ExprPtr a, ExprPtr b, SourcePos p = {});
ExprPtr make_pow(ExprPtr a, int exponent, SourcePos p = {});
ExprPtr make_call(std::string fn, ExprPtr a, SourcePos p = {});

// Token cursor + recursive-descent expression parser. The scenario parser
// drives the same cursor through its own grammar and calls parse_expr() for
// embedded expressions.
class Parser {
  public:
    explicit Parser(std::vector<Token> toks);

    const Token& peek() const { return toks_[i_]; }
    Token next();
    bool at(Tok k) const { return toks_[i_].kind == k; }
    bool accept(Tok k);
    Token expect(Tok k, const std::string& what);
    bool at_end() const { return toks_[i_].kind == Tok::End; }

    ExprPtr parse_expr();

  private:
    ExprPtr parse_term();
    ExprPtr parse_factor();
    ExprPtr parse_power();
    ExprPtr parse_atom();

    std::vector<Token> toks_;
    size_t i_ = 0;
};

// Parses src as one complete expression; trailing input is a parse error.
ExprPtr parse_expression(const std::string& src);

// Reparseable canonical form: parse(to_string(e)) is structurally equal to e.
// Constants print as bare literals, so the printer assumes the nonnegative
// constants the parser produces (a leading minus parses as neg(constant)).
std::string to_string(const Expr& e);

// Shortest decimal spelling that reparses to exactly the same double.
std::string repr_double(double v);

bool structurally_equal(const Expr& x, const Expr& y);

void collect_vars(const Expr& e, std::set<std::string>& out);

namespace detail {
// Attach a source position to errors raised below this node.
template <class F>
auto at_pos(SourcePos p, F&& f) {
    try {
        return f();
    } catch (const Error& e) {
        if (e.pos.valid()) throw;
        throw Error(e.code, e.what(), p);
    }
}
}  // namespace detail

// Variables resolve by position in `names`. Generic over the scalar algebra:
// the same AST evaluates on double, Jet2<double>, and Jet2<Jet2<double>>.
// Domain violations are errors, never NaN, on every path.
template <class S>
S eval_expr(const Expr& e, const std::vector<std::string>& names, const std::vector<S>& vals) {
    switch (e.kind) {
        case Expr::Kind::Constant:
            return S(e.value);
        case Expr::Kind::Var: {
            for (size_t i = 0; i < names.size(); ++i)
                if (names[i] == e.name) return vals[i];
            fail(Error::Code::Validation, "unbound variable '" + e.name + "'", e.pos);
        }
        case Expr::Kind::Neg:
            return -eval_expr(*e.a, names, vals);
        case Expr::Kind::Add:
            return eval_expr(*e.a, names, vals) + eval_expr(*e.b, names, vals);
        case Expr::Kind::Sub:
            return eval_expr(*e.a, names, vals) - eval_expr(*e.b, names, vals);
        case Expr::Kind::Mul:
            return eval_expr(*e.a, names, vals) * eval_expr(*e.b, names, vals);
        case Expr::Kind::Div: {
            S num = eval_expr(*e.a, names, vals);
            S den = eval_expr(*e.b, names, vals);
            if (primal(den) == 0.0) fail(Error::Code::Domain, "division by zero", e.pos);
            return num / den;
        }
        case Expr::Kind::Pow: {
            S base = eval_expr(*e.a, names, vals);
            return detail::at_pos(e.pos, [&] { return powi(base, e.exponent); });
        }
        case Expr::Kind::Call: {
            S u = eval_expr(*e.a, names, vals);
            return detail::at_pos(e.pos, [&]() -> S {
                if (e.name == "sin") return sin(u);
                if (e.name == "cos") return cos(u);
                if (e.name == "exp") return exp(u);
                if (e.name == "log") return log(u);
                if (e.name == "sqrt") return sqrt(u);
                fail(Error::Code::Internal, "unknown function '" + e.name + "'");
            });
        }
    }
    fail(Error::Code::Internal, "corrupt expression node");
}

}  // namespace oneill
