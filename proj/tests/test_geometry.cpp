#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "helpers.hpp"
#include "oneill/geometry.hpp"

using namespace oneill;
using J1 = Jet2<double>;
using Code = Error::Code;

namespace {

ManifoldSpec make_m(std::vector<std::string> coords, const std::vector<std::string>& upper,
                    std::vector<Interval> dom = {}) {
    ManifoldSpec m;
    m.dim = static_cast<int>(coords.size());
    m.coords = std::move(coords);
    for (const auto& s : upper) m.metric_upper.push_back(parse_expression(s));
    m.domain = std::move(dom);
    return m;
}

ManifoldSpec flat(int n) {
    std::vector<std::string> coords, upper;
    for (int i = 1; i <= n; ++i) coords.push_back("x" + std::to_string(i));
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) upper.push_back(i == j ? "1" : "0");
    return make_m(coords, upper);
}

// Unit round sphere chart: g = diag(1, sin(x1)^2), sectional curvature 1.
ManifoldSpec sphere() {
    return make_m({"x1", "x2"}, {"1", "0", "sin(x1)^2"}, {{0.3, 2.8}, {-3.0, 3.0}});
}

// Complex projective line in an affine chart, conformal factor (1+|x|^2)^-2:
// sectional curvature 4.
ManifoldSpec fubini_study() {
    std::string s = "1/(1 + x1^2 + x2^2)^2";
    return make_m({"x1", "x2"}, {s, "0", s}, {{-0.9, 0.9}, {-0.9, 0.9}});
}

ExprField field(const ManifoldSpec& m, const std::vector<std::string>& comps) {
    ExprField f;
    f.names = m.coords;
    for (const auto& c : comps) f.comps.push_back(parse_expression(c));
    return f;
}

double max_abs(const Vec<double>& v) {
    double w = 0;
    for (double x : v) w = std::max(w, std::abs(x));
    return w;
}

// Curvature from central differences of the Christoffel symbols; the
// independent oracle for riemann_tensor_at.
Riemann fd_riemann(const ManifoldSpec& m, const std::vector<double>& p, double h = 1e-4) {
    int n = m.dim;
    Christoffel<double> c0 = christoffel_at<double>(m, p);
    std::vector<Christoffel<double>> dc;
    for (int i = 0; i < n; ++i) {
        std::vector<double> pp = p, pm = p;
        pp[i] += h;
        pm[i] -= h;
        Christoffel<double> cp = christoffel_at<double>(m, pp);
        Christoffel<double> cm = christoffel_at<double>(m, pm);
        Christoffel<double> d(n);
        for (size_t k = 0; k < d.v.size(); ++k) d.v[k] = (cp.v[k] - cm.v[k]) / (2 * h);
        dc.push_back(std::move(d));
    }
    Riemann r(n);
    for (int l = 0; l < n; ++l)
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    double s = dc[i].at(l, j, k) - dc[j].at(l, i, k);
                    for (int mm = 0; mm < n; ++mm)
                        s += c0.at(l, i, mm) * c0.at(mm, j, k) -
                             c0.at(l, j, mm) * c0.at(mm, i, k);
                    r.at(l, k, i, j) = s;
                }
    return r;
}

}  // namespace

TEST_SUITE("geometry") {

    TEST_CASE("metric evaluation") {
        ManifoldSpec r6 = flat(6);
        Mat<double> g = metric_at_p<double>(r6, {0.3, -1, 2, 0.5, 0, 1});
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j) CHECK(g(i, j) == (i == j ? 1.0 : 0.0));

        Mat<double> gs = metric_at_p<double>(sphere(), {std::acos(-1.0) / 2, 0.7});
        CHECK(gs(0, 0) == 1.0);
        CHECK(gs(1, 1) == doctest::Approx(1.0).epsilon(1e-15));

        Mat<double> gf = metric_at_p<double>(fubini_study(), {0.0, 0.0});
        CHECK(gf(0, 0) == 1.0);
        CHECK(gf(1, 1) == 1.0);
        CHECK(gf(0, 1) == 0.0);
    }

    TEST_CASE("degenerate metrics are rejected at evaluation") {
        ManifoldSpec bad = make_m({"x1", "x2"}, {"x1", "0", "1"});
        CHECK(throws_code(Code::DegenerateMetric, [&] { metric_at_checked(bad, {0.0, 1.0}); }));
        CHECK(throws_code(Code::DegenerateMetric, [&] { metric_at_checked(bad, {-1.0, 1.0}); }));
        Mat<double> ok = metric_at_checked(bad, {2.0, 1.0});
        CHECK(ok(0, 0) == 2.0);
    }

    TEST_CASE("christoffel symbols: flat, sphere, conformal critical point") {
        Christoffel<double> cf = christoffel_at<double>(flat(3), {0.2, -0.4, 1.0});
        for (double v : cf.v) CHECK(v == 0.0);

        std::mt19937_64 rng(5);
        for (int rep = 0; rep < 8; ++rep) {
            double t = 0.3 + 2.5 * ((rng() >> 11) * 0x1.0p-53);
            Christoffel<double> c = christoffel_at<double>(sphere(), {t, 0.4});
            CHECK(c.at(0, 1, 1) == doctest::Approx(-std::sin(t) * std::cos(t)).epsilon(1e-12));
            CHECK(c.at(1, 0, 1) == doctest::Approx(std::cos(t) / std::sin(t)).epsilon(1e-12));
            CHECK(c.at(1, 1, 0) == c.at(1, 0, 1));
            CHECK(std::abs(c.at(0, 0, 0)) < 1e-12);
            CHECK(std::abs(c.at(0, 0, 1)) < 1e-12);
            CHECK(std::abs(c.at(1, 0, 0)) < 1e-12);
            CHECK(std::abs(c.at(1, 1, 1)) < 1e-12);
        }

        Christoffel<double> c0 = christoffel_at<double>(fubini_study(), {0.0, 0.0});
        for (double v : c0.v) CHECK(std::abs(v) < 1e-15);
    }

    TEST_CASE("lie brackets") {
        ManifoldSpec r2 = flat(2);
        ConstField e1{{1, 0}}, e2{{0, 1}};
        CHECK(max_abs(lie_bracket_at<double>(e1, e2, {0.3, 0.4})) == 0.0);

        ExprField X = field(r2, {"x2", "0"});
        Vec<double> br = lie_bracket_at<double>(X, e2, {0.7, -0.2});
        CHECK(br[0] == -1.0);
        CHECK(br[1] == 0.0);

        ExprField Y = field(r2, {"sin(x1*x2)", "x1 + x2^2"});
        Vec<double> xy = lie_bracket_at<double>(X, Y, {0.7, -0.2});
        Vec<double> yx = lie_bracket_at<double>(Y, X, {0.7, -0.2});
        for (int k = 0; k < 2; ++k) CHECK(xy[k] == doctest::Approx(-yx[k]).epsilon(1e-14));
    }

    TEST_CASE("covariant derivative: flat constants, torsion, metric compatibility") {
        ConstField e1{{1, 0, 0}}, e2{{0, 1, 0}};
        CHECK(max_abs(covariant_derivative_at<double>(flat(3), e1, e2, {0.1, 0.2, 0.3})) == 0.0);

        ManifoldSpec sp = sphere();
        ExprField X = field(sp, {"sin(x2)", "x1"});
        ExprField Y = field(sp, {"x1*x2", "cos(x1)"});
        ExprField Z = field(sp, {"x2", "exp(x1/3)"});
        for (const auto& p : sample_points(sp, 6, 42)) {
            Vec<double> t = vec_sub(covariant_derivative_at<double>(sp, X, Y, p),
                                    covariant_derivative_at<double>(sp, Y, X, p));
            t = vec_sub(t, lie_bracket_at<double>(X, Y, p));
            CHECK(max_abs(t) < 1e-9);

            // d_X g(Y,Z) = g(nabla_X Y, Z) + g(Y, nabla_X Z)
            auto xj = seed_coords<J1>(p);
            Mat<J1> gj = metric_at(sp, xj);
            Vec<J1> yj = Y(xj), zj = Z(xj);
            J1 s = dot(gj, yj, zj);
            Vec<double> xv = X(p);
            double lhs = 0;
            for (int i = 0; i < 2; ++i) lhs += xv[i] * s.grad[i];
            Mat<double> g = metric_at_p<double>(sp, p);
            double rhs = dot(g, covariant_derivative_at<double>(sp, X, Y, p), Z(p)) +
                         dot(g, Y(p), covariant_derivative_at<double>(sp, X, Z, p));
            CHECK(std::abs(lhs - rhs) < 1e-9);
        }
    }

    TEST_CASE("covariant derivative is tensorial in X and Leibniz in Y") {
        ManifoldSpec sp = sphere();
        ExprField X = field(sp, {"sin(x2)", "x1"});
        ExprField Y = field(sp, {"x1*x2", "cos(x1)"});
        ExprField fX = field(sp, {"sin(x1)*sin(x2)", "sin(x1)*x1"});
        ExprField fY = field(sp, {"sin(x1)*x1*x2", "sin(x1)*cos(x1)"});
        ExprPtr f = parse_expression("sin(x1)");
        for (const auto& p : sample_points(sp, 4, 7)) {
            double fv = eval_expr<double>(*f, sp.coords, p);

            Vec<double> a = covariant_derivative_at<double>(sp, fX, Y, p);
            Vec<double> b = vec_scale(fv, covariant_derivative_at<double>(sp, X, Y, p));
            CHECK(max_abs(vec_sub(a, b)) < 1e-12);

            auto xj = seed_coords<J1>(p);
            J1 fj = eval_expr<J1>(*f, sp.coords, xj);
            Vec<double> xv = X(p);
            double xf = 0;
            for (int i = 0; i < 2; ++i) xf += xv[i] * fj.grad[i];
            Vec<double> c = covariant_derivative_at<double>(sp, X, fY, p);
            Vec<double> d = vec_add(vec_scale(xf, Y(p)),
                                    vec_scale(fv, covariant_derivative_at<double>(sp, X, Y, p)));
            CHECK(max_abs(vec_sub(c, d)) < 1e-12);
        }
    }

    TEST_CASE("curvature: flat space vanishes, sphere and projective line match") {
        Riemann rf = riemann_tensor_at(flat(4), {0.1, 0.2, 0.3, 0.4});
        for (double v : rf.v) CHECK(v == 0.0);

        for (const auto& p : sample_points(sphere(), 6, 42)) {
            Mat<double> g = metric_at_p<double>(sphere(), p);
            Vec<double> e1 = {1, 0}, e2 = {0, 1};
            Vec<double> r = riemann_at(sphere(), p, e1, e2, e2);
            double sec = dot(g, r, e1) / (g(0, 0) * g(1, 1) - g(0, 1) * g(0, 1));
            CHECK(sec == doctest::Approx(1.0).epsilon(1e-10));
        }

        for (const auto& p : sample_points(fubini_study(), 6, 42)) {
            Mat<double> g = metric_at_p<double>(fubini_study(), p);
            Vec<double> e1 = {1, 0}, e2 = {0, 1};
            Vec<double> r = riemann_at(fubini_study(), p, e1, e2, e2);
            double sec = dot(g, r, e1) / (g(0, 0) * g(1, 1) - g(0, 1) * g(0, 1));
            CHECK(sec == doctest::Approx(4.0).epsilon(1e-10));
        }
    }

    TEST_CASE("curvature symmetries and first Bianchi identity") {
        for (const ManifoldSpec& m : {sphere(), fubini_study()}) {
            for (const auto& p : sample_points(m, 4, 11)) {
                Riemann r = riemann_tensor_at(m, p);
                Mat<double> g = metric_at_p<double>(m, p);
                int n = m.dim;
                auto lower = [&](int l, int k, int i, int j) {
                    double s = 0;
                    for (int a = 0; a < n; ++a) s += g(l, a) * r.at(a, k, i, j);
                    return s;
                };
                for (int l = 0; l < n; ++l)
                    for (int k = 0; k < n; ++k)
                        for (int i = 0; i < n; ++i)
                            for (int j = 0; j < n; ++j) {
                                CHECK(r.at(l, k, i, j) == -r.at(l, k, j, i));
                                CHECK(std::abs(lower(l, k, i, j) + lower(k, l, i, j)) < 1e-8);
                            }
                std::mt19937_64 rng(3);
                auto u = [&] { return -1.0 + 2.0 * ((rng() >> 11) * 0x1.0p-53); };
                Vec<double> x = {u(), u()}, y = {u(), u()}, z = {u(), u()};
                Vec<double> b = vec_add(vec_add(riemann_apply(r, x, y, z), riemann_apply(r, y, z, x)),
                                        riemann_apply(r, z, x, y));
                CHECK(max_abs(b) < 1e-8);
            }
        }
    }

    TEST_CASE("curvature agrees with the finite-difference oracle") {
        for (const ManifoldSpec& m : {sphere(), fubini_study()}) {
            for (const auto& p : sample_points(m, 4, 42)) {
                Riemann ad = riemann_tensor_at(m, p);
                Riemann fd = fd_riemann(m, p);
                double worst = 0;
                for (size_t k = 0; k < ad.v.size(); ++k)
                    worst = std::max(worst, std::abs(ad.v[k] - fd.v[k]));
                CHECK(worst < 1e-5);
            }
        }
    }

    TEST_CASE("sampling is deterministic, inside the shrunk domain") {
        ManifoldSpec m = make_m({"x1", "x2"}, {"1", "0", "1"}, {{0.0, 1.0}, {-2.0, 2.0}});
        auto a = sample_points(m, 16, 42);
        auto b = sample_points(m, 16, 42);
        CHECK(a.size() == 16);
        CHECK(a == b);
        auto c = sample_points(m, 16, 43);
        CHECK(a != c);
        for (const auto& p : a) {
            CHECK(p[0] >= 0.05);
            CHECK(p[0] <= 0.95);
            CHECK(p[1] >= -1.8);
            CHECK(p[1] <= 1.8);
        }
        // missing domain block defaults to (-2,2) per coordinate
        ManifoldSpec d = flat(2);
        for (const auto& p : sample_points(d, 16, 42))
            for (double x : p) {
                CHECK(x >= -1.8);
                CHECK(x <= 1.8);
            }
    }
}
