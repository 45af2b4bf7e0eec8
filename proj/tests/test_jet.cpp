#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "helpers.hpp"
#include "oneill/jet.hpp"

using oneill::Jet2;
using J1 = Jet2<double>;
using J2 = Jet2<J1>;
using Code = oneill::Error::Code;

namespace {

// Composite test functions, generic over the scalar so the same source text
// is evaluated with doubles (the oracle path) and with jets.
template <class S>
S comp1(const std::vector<S>& v) {
    using std::exp;
    using std::sin;
    return sin(v[0]) * exp(v[1] * 0.5) + v[0] * v[1];
}

template <class S>
S comp2(const std::vector<S>& v) {
    using std::log;
    using std::sqrt;
    return log(v[0] + 3.0) * sqrt(v[1] + 2.0) - oneill::powi(v[0], 3) / (v[1] + 4.0);
}

template <class S>
S comp3(const std::vector<S>& v) {
    using std::cos;
    S d = v[0] - v[1];
    return d * d / (v[0] * v[0] + v[1] * v[1] + 1.0) + cos(v[0] * v[1]);
}

template <class S>
using CompFn = S (*)(const std::vector<S>&);

struct CompPair {
    CompFn<double> dbl;
    CompFn<J1> jet;
};

const CompPair kComps[] = {
    {comp1<double>, comp1<J1>},
    {comp2<double>, comp2<J1>},
    {comp3<double>, comp3<J1>},
};

std::vector<double> sample_point(std::mt19937_64& rng) {
    auto u = [&] { return -1.5 + 3.0 * ((rng() >> 11) * 0x1.0p-53); };
    return {u(), u()};
}

J1 eval_jet(CompFn<J1> f, const std::vector<double>& x) {
    std::vector<J1> v;
    for (size_t i = 0; i < x.size(); ++i)
        v.push_back(J1::variable(x[i], static_cast<int>(i), static_cast<int>(x.size())));
    return f(v);
}

}  // namespace

TEST_SUITE("jet") {

    TEST_CASE("squaring a single seeded variable") {
        J1 x = J1::variable(3.0, 0, 1);
        J1 f = x * x;
        CHECK(f.val == 9.0);
        CHECK(f.grad[0] == 6.0);
        CHECK(f.h(0, 0) == 2.0);
    }

    TEST_CASE("value channel equals the plain double evaluation exactly") {
        std::mt19937_64 rng(7);
        for (const auto& c : kComps)
            for (int rep = 0; rep < 25; ++rep) {
                auto x = sample_point(rng);
                CHECK(eval_jet(c.jet, x).val == c.dbl(x));
            }
    }

    TEST_CASE("gradient and Hessian agree with central finite differences") {
        std::mt19937_64 rng(11);
        for (const auto& c : kComps)
            for (int rep = 0; rep < 25; ++rep) {
                auto x = sample_point(rng);
                J1 j = eval_jet(c.jet, x);
                fd::Fn f = [&](const std::vector<double>& p) { return c.dbl(p); };
                for (int i = 0; i < 2; ++i) {
                    double want = fd::partial(f, x, i);
                    CHECK(std::abs(j.grad[i] - want) <= 1e-6 * (1.0 + std::abs(want)));
                    for (int k = 0; k < 2; ++k) {
                        double w2 = fd::second(f, x, i, k);
                        CHECK(std::abs(j.h(i, k) - w2) <= 1e-4 * (1.0 + std::abs(w2)));
                    }
                }
            }
    }

    TEST_CASE("Hessian is exactly symmetric") {
        std::mt19937_64 rng(13);
        for (const auto& c : kComps)
            for (int rep = 0; rep < 10; ++rep) {
                J1 j = eval_jet(c.jet, sample_point(rng));
                CHECK(j.h(0, 1) == j.h(1, 0));
            }
    }

    TEST_CASE("constants broadcast against any seeded width") {
        J1 c(2.5);
        CHECK(c.n == 0);
        J1 x = J1::variable(1.5, 0, 3);
        J1 y = c * x + 1.0;
        CHECK(y.n == 3);
        CHECK(y.val == 2.5 * 1.5 + 1.0);
        CHECK(y.grad[0] == 2.5);
        CHECK(y.grad[1] == 0.0);
        J1 s = oneill::sqrt(J1(2.0));
        CHECK(s.n == 0);
        CHECK(s.val == std::sqrt(2.0));
    }

    TEST_CASE("mismatched seeded widths are an internal error") {
        J1 a = J1::variable(1.0, 0, 3);
        J1 b = J1::variable(1.0, 0, 2);
        CHECK(throws_code(Code::Internal, [&] { return a + b; }));
    }

    TEST_CASE("nested jets expose third derivatives") {
        auto nested = [](double t) { return J2::variable(J1::variable(t, 0, 1), 0, 1); };

        J2 f = oneill::powi(nested(1.0), 4);  // x^4: derivatives 4, 12, 24 at x=1
        CHECK(f.val.val == 1.0);
        CHECK(f.val.grad[0] == 4.0);
        CHECK(f.val.h(0, 0) == 12.0);
        CHECK(f.grad[0].val == 4.0);
        CHECK(f.grad[0].grad[0] == 12.0);
        CHECK(f.grad[0].h(0, 0) == 24.0);
        CHECK(f.hess[0].grad[0] == 24.0);
        CHECK(f.hess[0].h(0, 0) == 24.0);  // fourth derivative of x^4

        J2 s = sin(nested(0.0));
        CHECK(s.grad[0].grad[0] == 0.0);   // -sin 0
        CHECK(s.grad[0].h(0, 0) == -1.0);  // -cos 0
    }

    TEST_CASE("nested third derivative matches finite differences of the inner Hessian") {
        auto inner_hess = [](double t) {
            J1 x = J1::variable(t, 0, 1);
            J1 r = x * x * sin(x);
            return r.h(0, 0);
        };
        double h = 1e-5;
        double want = (inner_hess(0.7 + h) - inner_hess(0.7 - h)) / (2 * h);

        J2 x = J2::variable(J1::variable(0.7, 0, 1), 0, 1);
        J2 r = x * x * sin(x);
        CHECK(r.hess[0].grad[0] == doctest::Approx(want).epsilon(1e-6));
        CHECK(r.grad[0].h(0, 0) == doctest::Approx(want).epsilon(1e-6));
    }

    TEST_CASE("domain violations are rejected") {
        J1 zero_var = J1::variable(0.0, 0, 1);
        CHECK(throws_code(Code::Domain, [&] { return 1.0 / zero_var; }));
        CHECK(throws_code(Code::Domain, [&] { return log(zero_var); }));
        CHECK(throws_code(Code::Domain, [] { return oneill::log(J1(-2.0)); }));
        CHECK(throws_code(Code::Domain, [] { return oneill::sqrt(J1(-1.0)); }));
        // sqrt has no derivative at zero, so a seeded zero must fail loudly
        // even though the value would be fine.
        CHECK(throws_code(Code::Domain, [&] { return sqrt(zero_var); }));
        CHECK(oneill::sqrt(J1(0.0)).val == 0.0);
        CHECK(throws_code(Code::Domain, [&] { return oneill::powi(zero_var, -1); }));
        CHECK(oneill::powi(J1(0.0), 0).val == 1.0);
    }

    TEST_CASE("integer powers multiply out exactly like the double path") {
        double b = 1.7;
        J1 xb = J1::variable(b, 0, 1);
        CHECK(oneill::powi(xb, 5).val == oneill::powi(b, 5));
        CHECK(oneill::powi(xb, -3).val == oneill::powi(b, -3));
        CHECK(oneill::powi(xb, 5).grad[0] ==
              doctest::Approx(5 * std::pow(b, 4)).epsilon(1e-12));
        CHECK(oneill::powi(xb, -3).h(0, 0) ==
              doctest::Approx(12 * std::pow(b, -5)).epsilon(1e-12));
        CHECK(oneill::powi(xb, 1).grad[0] == 1.0);
        CHECK(oneill::powi(xb, 0).n == 0);
    }
}
