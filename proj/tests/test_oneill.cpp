#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "oneill/complexstruct.hpp"
#include "oneill/oneill.hpp"
#include "oneill/scenario.hpp"

#include "helpers.hpp"

using namespace oneill;

namespace {

double max_abs(const Vec<double>& v) {
    double m = 0.0;
    for (double c : v) m = std::max(m, std::abs(c));
    return m;
}

double max_diff(const Vec<double>& a, const Vec<double>& b) {
    double m = 0.0;
    for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

bool has_detail(const CheckReport& r, const std::string& needle) {
    for (const auto& d : r.details)
        if (d.find(needle) != std::string::npos) return true;
    return false;
}

// Finite-difference oracle for the first term of nabla_T: differentiate the
// T field along x by central differences, add the connection correction, and
// subtract the same slot-derivative terms the implementation uses. Any
// disagreement with nabla_T_at is then localized in the nested-jet sweep.
Vec<double> nabla_T_fd(const ScenarioSpec& s, const std::vector<double>& p, const Vec<double>& x,
                       const Vec<double>& y, const Vec<double>& z) {
    int n = s.total.dim;
    SplitExtension ye = split_extension(s, p, y);
    SplitExtension ze = split_extension(s, p, z);
    TTensorField<SplitExtension, SplitExtension> tf{&s, ye, ze};
    const double h = 1e-5;
    std::vector<double> pp = p, pm = p;
    for (int i = 0; i < n; ++i) {
        pp[i] += h * x[i];
        pm[i] -= h * x[i];
    }
    Vec<double> w0 = tf(p), wp = tf(pp), wm = tf(pm);
    Christoffel<double> c1 = christoffel_at<double>(s.total, p);
    Vec<double> d(n, 0.0);
    for (int k = 0; k < n; ++k) {
        d[k] = (wp[k] - wm[k]) / (2 * h);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) d[k] += c1.at(k, i, j) * x[i] * w0[j];
    }
    Vec<double> cy = covariant_derivative_at<double>(s.total, ConstField{x}, ye, p);
    Vec<double> cz = covariant_derivative_at<double>(s.total, ConstField{x}, ze, p);
    return vec_sub(vec_sub(d, T_at(s, p, cy, z)), T_at(s, p, y, cz));
}

}  // namespace

TEST_SUITE("oneill") {
    TEST_CASE("T and A vanish when both distributions are flat and constant") {
        for (const char* name : {"example3", "product_spheres"}) {
            ScenarioSpec s = builtin(name);
            auto pts = sample_points(s.total, 3, s.seed);
            for (const auto& p : pts) {
                TangentSplit split = base_split_at(s, p);
                for (const auto& v : split.vertical)
                    for (const auto& w : split.vertical) CHECK(max_abs(T_at(s, p, v, w)) < 1e-9);
                for (const auto& a : split.horizontal)
                    for (const auto& b : split.horizontal) CHECK(max_abs(A_at(s, p, a, b)) < 1e-9);
            }
        }
    }

    TEST_CASE("fibre tensor reproduces the frozen curved-fibre values") {
        ScenarioSpec s = builtin("scaled_fiber");
        std::vector<double> p0 = {0.0, 0.0, 0.0, 1.0};
        TangentSplit split = base_split_at(s, p0);
        REQUIRE(split.vertical.size() == 3);

        // The splitting is coordinate-aligned at this point, so the frame
        // order is pinned: e1/sqrt(2), e2/sqrt(2), sqrt(2) e3.
        CHECK(split.vertical[0][0] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
        CHECK(split.vertical[2][2] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

        Vec<double> t11 = T_at(s, p0, split.vertical[0], split.vertical[0]);
        Vec<double> t33 = T_at(s, p0, split.vertical[2], split.vertical[2]);
        CHECK(max_diff(t11, {0.0, 0.0, 0.0, 1.0}) < 1e-10);
        CHECK(max_diff(t33, {0.0, 0.0, 0.0, 2.0}) < 1e-10);
        CHECK(max_abs(T_at(s, p0, split.vertical[0], split.vertical[1])) < 1e-10);
        CHECK(max_abs(T_at(s, p0, split.vertical[0], split.vertical[2])) < 1e-10);
    }

    TEST_CASE("wrong-slot arguments annihilate T and A") {
        ScenarioSpec s = builtin("scaled_fiber");
        std::vector<double> p = {0.05, -0.1, 0.2, 1.3};
        TangentSplit split = base_split_at(s, p);
        Vec<double> any = {0.3, -0.7, 1.1, 0.4};
        CHECK(max_abs(T_at(s, p, split.horizontal[0], any)) < 1e-12);
        CHECK(max_abs(A_at(s, p, split.vertical[0], any)) < 1e-12);
    }

    TEST_CASE("fiber geometry freezes the curved fixture") {
        ScenarioSpec s = builtin("scaled_fiber");
        FiberGeometryReport rep = fiber_geometry(s, {{0.0, 0.0, 0.0, 1.0}});
        CHECK(max_diff(rep.H, {0.0, 0.0, 0.0, 4.0 / 3.0}) < 1e-10);
        CHECK(rep.max_T_norm == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
        CHECK(rep.umbilicity_defect == doctest::Approx(std::sqrt(2.0) / 3.0).epsilon(1e-10));
        CHECK(rep.max_H_norm == doctest::Approx(2.0 * std::sqrt(2.0) / 3.0).epsilon(1e-10));
        CHECK(rep.H_vertical_leak < 1e-12);
        CHECK(rep.H_in_jd2_defect < 1e-12);
    }

    TEST_CASE("spherical fibres are umbilical with inward mean curvature") {
        ScenarioSpec s = builtin("umbilical_witness");
        std::vector<double> q = {0.5, 0.3, -0.4, 0.7, 0.1, -0.2};
        double r2 = 0.5 * 0.5 + 0.3 * 0.3 + 0.4 * 0.4 + 0.7 * 0.7;
        FiberGeometryReport rep = fiber_geometry(s, {q});
        Vec<double> expected = {-q[0] / r2, -q[1] / r2, -q[2] / r2, -q[3] / r2, 0.0, 0.0};
        CHECK(max_diff(rep.H, expected) < 1e-9);
        CHECK(rep.umbilicity_defect < 1e-9);
        CHECK(rep.max_T_norm > 0.5);  // genuinely curved fibres
        CHECK(rep.H_vertical_leak < 1e-12);
        CHECK(rep.H_in_jd2_defect < 1e-12);
    }

    TEST_CASE("covariant derivative of T matches finite differences") {
        double largest = 0.0;
        for (const char* name : {"scaled_fiber", "shear_horizontal"}) {
            ScenarioSpec s = builtin(name);
            auto pts = sample_points(s.total, 2, s.seed);
            for (const auto& p : pts) {
                TangentSplit split = base_split_at(s, p);
                for (const Vec<double>& x : {split.vertical[0], split.horizontal[0]}) {
                    Vec<double> y = split.vertical[0];
                    Vec<double> z = split.vertical.back();
                    Vec<double> ad = nabla_T_at(s, p, x, y, z);
                    Vec<double> fd = nabla_T_fd(s, p, x, y, z);
                    CHECK(max_diff(ad, fd) < 1e-8);
                    largest = std::max(largest, max_abs(ad));
                }
            }
        }
        CHECK(largest > 1e-2);  // the oracle saw nonzero derivatives
    }

    TEST_CASE("nabla_T is linear in the direction slot") {
        ScenarioSpec s = builtin("scaled_fiber");
        std::vector<double> p = {0.1, 0.05, -0.2, 1.4};
        TangentSplit split = base_split_at(s, p);
        Vec<double> x = split.horizontal[0];
        Vec<double> one = nabla_T_at(s, p, x, split.vertical[0], split.vertical[2]);
        Vec<double> two = nabla_T_at(s, p, vec_scale(2.0, x), split.vertical[0], split.vertical[2]);
        CHECK(max_diff(two, vec_scale(2.0, one)) < 1e-12);
    }

    TEST_CASE("curvature identity witness on the hyperbolic scenario") {
        ScenarioSpec s = builtin("scaled_fiber");
        std::vector<double> p0 = {0.0, 0.0, 0.0, 1.0};
        TangentSplit split = base_split_at(s, p0);
        Mat<double> j = j_matrix_at(s.total, p0);
        Vec<double> x1 = split.vertical[0];
        Vec<double> x2 = j * x1;  // stays vertical: the invariant part is J-closed
        Vec<double> x3 = split.vertical[2];
        Vec<double> z = split.horizontal[0];
        CurvatureRelationTerms t = curvature_relation_terms(s, p0, x1, x2, x3, z);
        CHECK(t.lhs == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(t.rhs == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(t.residual < 1e-9);
        CHECK(t.residual_flipped == doctest::Approx(2.0).epsilon(1e-9));
    }

    TEST_CASE("half-bracket identity is exercised by twisting horizontal planes") {
        ScenarioSpec s = builtin("shear_horizontal");
        auto pts = sample_points(s.total, 3, s.seed);
        Mat<double> g;
        double biggest = 0.0;
        for (const auto& p : pts) {
            g = metric_at_checked(s.total, p);
            TangentSplit split = base_split_at(s, p);
            Mat<double> pv = vertical_projector_checked(s, p);
            for (size_t a = 0; a < split.horizontal.size(); ++a)
                for (size_t b = a + 1; b < split.horizontal.size(); ++b) {
                    Vec<double> aab = A_at(s, p, split.horizontal[a], split.horizontal[b]);
                    biggest = std::max(biggest, norm(g, aab));
                    Vec<double> br = lie_bracket_at<double>(
                        HorizontalExtension{&s, split.horizontal[a]},
                        HorizontalExtension{&s, split.horizontal[b]}, p);
                    CHECK(norm(g, vec_sub(aab, vec_scale(0.5, pv * br))) < 1e-9);
                }
        }
        CHECK(biggest > 0.05);  // the identity is not vacuously 0 = 0 here
    }

    TEST_CASE("modulated arguments leave T and A unchanged") {
        ScenarioSpec s = builtin("shear_horizontal");
        auto pts = sample_points(s.total, 2, s.seed);
        for (const auto& p : pts) {
            TangentSplit split = base_split_at(s, p);
            Vec<double> e = split.vertical[0];
            Vec<double> eh = split.horizontal[0];
            Vec<double> f = {0.4, -1.0, 0.7, 0.2};
            TTensorField<Modulated<ConstField>, Modulated<ConstField>> tmod{
                &s, modulated(ConstField{e}, p), modulated(ConstField{f}, p)};
            CHECK(max_diff(tmod(p), T_at(s, p, e, f)) < 1e-8);
            ATensorField<Modulated<ConstField>, Modulated<ConstField>> amod{
                &s, modulated(ConstField{eh}, p), modulated(ConstField{f}, p)};
            CHECK(max_diff(amod(p), A_at(s, p, eh, f)) < 1e-8);
        }
    }

    TEST_CASE("identity and decomposition checks pass on every builtin") {
        for (const auto& name : builtin_names()) {
            CAPTURE(name);
            ScenarioSpec s = builtin(name);
            auto pts = sample_points(s.total, 3, s.seed);
            bool is_sub = check_riemannian_submersion(s, pts).status == Status::Pass;

            CheckReport ids = check_oneill_identities(s, pts);
            CHECK(ids.status == Status::Pass);
            CHECK(has_detail(ids, "max half-bracket residual") == is_sub);

            CheckReport fund = check_fundamental_equations(s, pts);
            CHECK(fund.status == (is_sub ? Status::Pass : Status::NotApplicable));

            CheckReport fib = check_fiber_geometry(s, pts);
            CHECK(fib.status == Status::Pass);

            CheckReport curv = check_curvature_relation(s, pts);
            CHECK(curv.status == (is_sub ? Status::Pass : Status::NotApplicable));
            if (is_sub) CHECK(curv.max_residual < 1.0);
        }
    }

    TEST_CASE("flat decomposition residuals stay near machine precision") {
        ScenarioSpec s = builtin("example3");
        auto pts = sample_points(s.total, 4, s.seed);
        CheckReport fund = check_fundamental_equations(s, pts);
        CHECK(fund.status == Status::Pass);
        CHECK(fund.max_residual < 1e-1);  // raw residuals below 1e-10
    }

    TEST_CASE("non-submersion scenarios are flagged inapplicable with a reason") {
        ScenarioSpec s = builtin("cp1_spaceform");
        auto pts = sample_points(s.total, 3, s.seed);
        CheckReport fund = check_fundamental_equations(s, pts);
        CHECK(fund.status == Status::NotApplicable);
        CHECK(has_detail(fund, "not one on this sample set"));
        CheckReport curv = check_curvature_relation(s, pts);
        CHECK(curv.status == Status::NotApplicable);
        CheckReport ids = check_oneill_identities(s, pts);
        CHECK(ids.status == Status::Pass);
        CHECK(has_detail(ids, "skipped"));
    }

    TEST_CASE("curvature relation stays honest when the total space is flat") {
        // Flat total space: the curvature block vanishes, so the
        // antisymmetrized derivative of T must cancel even though T itself
        // does not (spherical fibres).
        ScenarioSpec s = builtin("umbilical_witness");
        std::vector<double> p = {0.5, 0.3, -0.4, 0.7, 0.1, -0.2};
        TangentSplit split = base_split_at(s, p);
        Vec<double> t11 = T_at(s, p, split.vertical[0], split.vertical[0]);
        CHECK(max_abs(t11) > 0.1);
        CurvatureRelationTerms t = curvature_relation_terms(
            s, p, split.vertical[0], split.vertical[1], split.vertical[2], split.horizontal[0]);
        CHECK(std::abs(t.lhs) < 1e-12);
        CHECK(t.residual < 1e-8);
    }
}
