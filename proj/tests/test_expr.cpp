#include <doctest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "oneill/expr.hpp"

using namespace oneill;
using J1 = Jet2<double>;
using Code = Error::Code;

namespace {

std::vector<Tok> kinds(const std::string& src) {
    std::vector<Tok> out;
    for (const Token& t : tokenize(src))
        if (t.kind != Tok::End) out.push_back(t.kind);
    return out;
}

const std::vector<std::string> kNames = {"x1", "x2"};

double eval_d(const Expr& e, double x1, double x2) {
    return eval_expr<double>(e, kNames, {x1, x2});
}

ExprPtr random_ast(std::mt19937_64& rng, int depth) {
    auto u = [&] { return (rng() >> 11) * 0x1.0p-53; };
    int pick = depth == 0 ? static_cast<int>(u() * 2) : static_cast<int>(u() * 9);
    switch (pick) {
        case 0: return make_constant(std::floor(u() * 4096.0) / 1024.0);
        case 1: return make_var(u() < 0.5 ? "x1" : "x2");
        case 2: return make_neg(random_ast(rng, depth - 1));
        case 3: return make_add(random_ast(rng, depth - 1), random_ast(rng, depth - 1));
        case 4: return make_sub(random_ast(rng, depth - 1), random_ast(rng, depth - 1));
        case 5: return make_mul(random_ast(rng, depth - 1), random_ast(rng, depth - 1));
        case 6: return make_div(random_ast(rng, depth - 1), random_ast(rng, depth - 1));
        case 7: return make_pow(random_ast(rng, depth - 1), static_cast<int>(u() * 7) - 3);
        default: {
            static const char* fns[] = {"sin", "cos", "exp", "log", "sqrt"};
            return make_call(fns[static_cast<int>(u() * 5)], random_ast(rng, depth - 1));
        }
    }
}

}  // namespace

TEST_SUITE("expr") {

    TEST_CASE("tokenize produces the expected token stream") {
        CHECK(kinds("(x1+x2)/sqrt(2)") ==
              std::vector<Tok>{Tok::LParen, Tok::Ident, Tok::Plus, Tok::Ident, Tok::RParen,
                               Tok::Slash, Tok::Ident, Tok::LParen, Tok::Number, Tok::RParen});
        auto toks = tokenize("(x1+x2)/sqrt(2)");
        CHECK(toks[1].text == "x1");
        CHECK(toks[3].text == "x2");
        CHECK(toks[6].text == "sqrt");
        CHECK(toks[8].num == 2.0);

        CHECK(kinds("x1^2") == std::vector<Tok>{Tok::Ident, Tok::Caret, Tok::Number});
        CHECK(kinds("1.5e-3 \"hi\" [a,b] {c=d}") ==
              std::vector<Tok>{Tok::Number, Tok::String, Tok::LBracket, Tok::Ident, Tok::Comma,
                               Tok::Ident, Tok::RBracket, Tok::LBrace, Tok::Ident, Tok::Equals,
                               Tok::Ident, Tok::RBrace});
        CHECK(tokenize("1.5e-3")[0].num == 1.5e-3);
        CHECK(tokenize("\"a label\"")[0].text == "a label");
    }

    TEST_CASE("lexing rejects unknown characters with a position") {
        CHECK(throws_code(Code::Lex, [] { tokenize("x1 @ x2"); }));
        try {
            tokenize("x1 +\n  @");
        } catch (const Error& e) {
            CHECK(e.pos.line == 2);
            CHECK(e.pos.col == 3);
            CHECK(std::string(e.what()).find("'@'") != std::string::npos);
        }
        CHECK(throws_code(Code::Lex, [] { tokenize("\"unterminated"); }));
    }

    TEST_CASE("comments run to end of line") {
        CHECK(kinds("x1 # trailing words (x2)\n+ 3") ==
              std::vector<Tok>{Tok::Ident, Tok::Plus, Tok::Number});
    }

    TEST_CASE("parsing honors precedence and associativity") {
        ExprPtr e = parse_expression("x1 + x2 * x1");
        REQUIRE(e->kind == Expr::Kind::Add);
        CHECK(e->a->kind == Expr::Kind::Var);
        CHECK(e->b->kind == Expr::Kind::Mul);

        ExprPtr n = parse_expression("-x1^2");
        REQUIRE(n->kind == Expr::Kind::Neg);
        REQUIRE(n->a->kind == Expr::Kind::Pow);
        CHECK(n->a->exponent == 2);
        CHECK(eval_d(*n, 3, 0) == -9.0);

        // left associativity: a - b - c = (a - b) - c
        ExprPtr s = parse_expression("8 - 3 - 2");
        CHECK(eval_d(*s, 0, 0) == 3.0);
        ExprPtr d = parse_expression("8/4/2");
        CHECK(eval_d(*d, 0, 0) == 1.0);

        ExprPtr p = parse_expression("x1^-2");
        CHECK(p->exponent == -2);
    }

    TEST_CASE("parse errors carry a position and an expectation") {
        CHECK(throws_code(Code::Parse, [] { parse_expression("sin("); }));
        CHECK(throws_code(Code::Parse, [] { parse_expression("x1 +"); }));
        CHECK(throws_code(Code::Parse, [] { parse_expression("x1 x2"); }));
        CHECK(throws_code(Code::Parse, [] { parse_expression("(x1"); }));
        CHECK(throws_code(Code::Parse, [] { parse_expression("x1^2.5"); }));
        CHECK(throws_code(Code::Parse, [] { parse_expression("tan(x1)"); }));
        CHECK(throws_code(Code::Parse, [] { parse_expression(""); }));
        try {
            parse_expression("sin(");
        } catch (const Error& e) {
            CHECK(e.pos.line == 1);
            CHECK(e.pos.col == 5);
        }
    }

    TEST_CASE("evaluation over doubles") {
        ExprPtr e = parse_expression("(x1+x2)/sqrt(2)");
        CHECK(eval_d(*e, 1, 1) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
        CHECK(eval_d(*parse_expression("sin(x1)^2 + cos(x1)^2"), 0.7, 0) ==
              doctest::Approx(1.0).epsilon(1e-15));
        CHECK(eval_d(*parse_expression("log(exp(x1))"), 1.3, 0) ==
              doctest::Approx(1.3).epsilon(1e-15));
    }

    TEST_CASE("evaluation rejects domain violations instead of producing NaN") {
        CHECK(throws_code(Code::Domain, [] { eval_d(*parse_expression("1/x1"), 0, 0); }));
        CHECK(throws_code(Code::Domain, [] { eval_d(*parse_expression("log(x1)"), -1, 0); }));
        CHECK(throws_code(Code::Domain, [] { eval_d(*parse_expression("sqrt(x1)"), -4, 0); }));
        CHECK(throws_code(Code::Domain, [] { eval_d(*parse_expression("x1^-1"), 0, 0); }));
        CHECK(throws_code(Code::Validation, [] { eval_d(*parse_expression("x9"), 0, 0); }));
        // the division error carries the position of the '/'
        try {
            eval_d(*parse_expression("x2 + 1/x1"), 0, 0);
        } catch (const Error& e) {
            CHECK(e.pos.col == 7);
        }
    }

    TEST_CASE("evaluation over jets differentiates the AST") {
        ExprPtr e = parse_expression("x1^2");
        J1 x = J1::variable(3.0, 0, 1);
        J1 r = eval_expr<J1>(*e, {"x1"}, {x});
        CHECK(r.val == 9.0);
        CHECK(r.grad[0] == 6.0);
        CHECK(r.h(0, 0) == 2.0);
    }

    TEST_CASE("nested jet evaluation recovers third order information") {
        using J2 = Jet2<J1>;
        auto third = [](const std::string& src, double at) {
            ExprPtr e = parse_expression(src);
            J2 x = J2::variable(J1::variable(at, 0, 1), 0, 1);
            return eval_expr<J2>(*e, {"x1"}, {x});
        };
        CHECK(third("x1^3", 2.0).grad[0].grad[0] == 12.0);
        CHECK(third("sin(x1)", 0.0).grad[0].grad[0] == 0.0);
        J2 q = third("x1^4", 1.0);
        CHECK(q.grad[0].h(0, 0) == 24.0);
        fd::Fn inner_hess = [](const std::vector<double>& p) {
            ExprPtr e = parse_expression("x1^4");
            J1 x = J1::variable(p[0], 0, 1);
            return eval_expr<J1>(*e, {"x1"}, {x}).h(0, 0);
        };
        double want = fd::partial(inner_hess, {1.0}, 0, 1e-4);
        CHECK(q.grad[0].h(0, 0) == doctest::Approx(want).epsilon(1e-6));
    }

    TEST_CASE("print parses back to an identical AST") {
        std::mt19937_64 rng(21);
        for (int rep = 0; rep < 300; ++rep) {
            ExprPtr e = random_ast(rng, 6);
            std::string s = to_string(*e);
            ExprPtr back = parse_expression(s);
            CHECK(structurally_equal(*e, *back));
        }
        CHECK(to_string(*parse_expression("-x1^2")) == "-x1^2");
        CHECK(to_string(*parse_expression("(x1+x2)/sqrt(2)")) == "(x1 + x2)/sqrt(2)");
    }

    TEST_CASE("repr_double survives the round trip") {
        for (double v : {0.1, 1.0 / 3.0, 2.0, 1e-17, 123456.789, 0.94280904158206336}) {
            CHECK(std::strtod(repr_double(v).c_str(), nullptr) == v);
        }
    }

    TEST_CASE("random ASTs: jets agree with finite differences") {
        std::mt19937_64 rng(31);
        auto u = [&] { return (rng() >> 11) * 0x1.0p-53; };
        int usable = 0;
        for (int rep = 0; rep < 200; ++rep) {
            ExprPtr e = random_ast(rng, 4);
            std::vector<double> x = {0.2 + 1.6 * u(), 0.2 + 1.6 * u()};
            double v;
            J1 j;
            std::vector<double> g;
            try {
                v = eval_d(*e, x[0], x[1]);
                std::vector<J1> jx = {J1::variable(x[0], 0, 2), J1::variable(x[1], 1, 2)};
                j = eval_expr<J1>(*e, kNames, jx);
                fd::Fn f = [&](const std::vector<double>& p) {
                    return eval_d(*e, p[0], p[1]);
                };
                g = fd::grad(f, x);
                bool finite = std::isfinite(v);
                for (int i = 0; i < 2 && finite; ++i) {
                    finite = std::isfinite(g[i]) && std::isfinite(j.g_or0(i));
                    for (int k = 0; k < 2 && finite; ++k) finite = std::isfinite(j.h_or0(i, k));
                }
                if (!finite) continue;
                ++usable;
                CHECK(j.val == v);  // value channel is exact
                for (int i = 0; i < 2; ++i) {
                    CHECK(std::abs(j.g_or0(i) - g[i]) <=
                          1e-6 * (1.0 + std::abs(j.g_or0(i)) + std::abs(g[i])));
                    for (int k = 0; k < 2; ++k) {
                        double w = fd::second(f, x, i, k);
                        if (!std::isfinite(w)) continue;
                        CHECK(std::abs(j.h_or0(i, k) - w) <=
                              1e-4 * (1.0 + std::abs(j.h_or0(i, k)) + std::abs(w)));
                    }
                }
            } catch (const Error& err) {
                CHECK(err.code == Code::Domain);  // the only acceptable escape
                continue;
            }
        }
        CHECK(usable > 60);
    }
}
