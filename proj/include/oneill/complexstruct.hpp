#pragma once

// Almost complex structure support: Hermitian compatibility of (g, J), the
// covariant constancy of J (the defect measured here vanishes exactly when
// the chart is Kaehler), and the constant-holomorphic-curvature model with
// its least-squares fit.

#include <cstdint>
#include <vector>

#include "oneill/geometry.hpp"
#include "oneill/report.hpp"

namespace oneill {

template <class S>
Mat<S> j_matrix_at(const ManifoldSpec& m, const std::vector<S>& x) {
    if (!m.has_J()) fail(Error::Code::MissingJ, "scenario declares no complex structure J");
    Mat<S> j(m.dim, m.dim);
    for (int r = 0; r < m.dim; ++r)
        for (int c = 0; c < m.dim; ++c)
            j(r, c) = eval_expr<S>(*m.J[static_cast<size_t>(r) * m.dim + c], m.coords, x);
    return j;
}

// Field combinator: pointwise J applied to another field.
template <class F>
struct JApplied {
    const ManifoldSpec* m;
    F inner;

    template <class S>
    Vec<S> operator()(const std::vector<S>& x) const {
        return j_matrix_at(*m, x) * inner(x);
    }
};

template <class F>
JApplied<F> j_applied(const ManifoldSpec& m, F f) {
    return {&m, std::move(f)};
}

struct HermitianResiduals {
    double max_j_squared = 0.0;  // worst entry of J*J + I
    double max_g_compat = 0.0;   // worst |g(Jx,Jy) - g(x,y)| over sampled pairs
};

HermitianResiduals almost_hermitian_residuals(const ManifoldSpec& m,
                                              const std::vector<std::vector<double>>& pts,
                                              std::uint64_t seed);

CheckReport validate_almost_hermitian(const ManifoldSpec& m,
                                      const std::vector<std::vector<double>>& pts,
                                      std::uint64_t seed, double tol_scale = 1.0);

// (nabla_x J)y = nabla_x(Jy) - J nabla_x y with constant-component extensions
// of the tangent vectors x, y.
Vec<double> kaehler_defect_at(const ManifoldSpec& m, const std::vector<double>& p,
                              const Vec<double>& x, const Vec<double>& y);

// Worst defect norm over sample points and seeded frame pairs.
double max_kaehler_defect(const ManifoldSpec& m, const std::vector<std::vector<double>>& pts);

// (c/4)[g(y,z)x - g(x,z)y + g(Jy,z)Jx - g(Jx,z)Jy + 2g(x,Jy)Jz]
Vec<double> space_form_curvature(double c, const ManifoldSpec& m, const std::vector<double>& p,
                                 const Vec<double>& x, const Vec<double>& y, const Vec<double>& z);

struct SpaceFormFit {
    double c_estimate = 0.0;
    double residual_max = 0.0;          // worst |R - c*model| component anywhere
    std::vector<double> per_point_c;    // least-squares c at each sample point
};

// Least-squares fit of the constant over seeded random tangent triples
// (10 per point). Always returns the fit; callers decide what a large
// residual means for them.
SpaceFormFit fit_space_form_constant(const ManifoldSpec& m,
                                     const std::vector<std::vector<double>>& pts,
                                     std::uint64_t seed);

}  // namespace oneill
