#include "oneill/complexstruct.hpp"

#include <cmath>
#include <random>

namespace oneill {

namespace {

double uniform_pm1(std::mt19937_64& rng) { return -1.0 + 2.0 * ((rng() >> 11) * 0x1.0p-53); }

Vec<double> random_vector(std::mt19937_64& rng, int n) {
    Vec<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = uniform_pm1(rng);
    return v;
}

}  // namespace

HermitianResiduals almost_hermitian_residuals(const ManifoldSpec& m,
                                              const std::vector<std::vector<double>>& pts,
                                              std::uint64_t seed) {
    HermitianResiduals out;
    std::mt19937_64 rng(seed);
    for (const auto& p : pts) {
        Mat<double> g = metric_at_checked(m, p);
        Mat<double> j = j_matrix_at(m, seed_coords<double>(p));
        Mat<double> jj = j * j;
        for (int r = 0; r < m.dim; ++r)
            for (int c = 0; c < m.dim; ++c) {
                double want = r == c ? -1.0 : 0.0;
                out.max_j_squared = std::max(out.max_j_squared, std::abs(jj(r, c) - want));
            }
        for (int rep = 0; rep < 10; ++rep) {
            Vec<double> x = random_vector(rng, m.dim);
            Vec<double> y = random_vector(rng, m.dim);
            double d = std::abs(dot(g, j * x, j * y) - dot(g, x, y));
            out.max_g_compat = std::max(out.max_g_compat, d);
        }
    }
    return out;
}

CheckReport validate_almost_hermitian(const ManifoldSpec& m,
                                      const std::vector<std::vector<double>>& pts,
                                      std::uint64_t seed, double tol_scale) {
    HermitianResiduals res = almost_hermitian_residuals(m, pts, seed);
    ResidualFold fold{tol_scale};
    fold.add(res.max_j_squared, 1e-10);
    fold.add(res.max_g_compat, 1e-9);
    return finish_report("almost_hermitian", fold,
                         {"max |J^2 + I| entry = " + fmt_g(res.max_j_squared),
                          "max |g(Jx,Jy) - g(x,y)| = " + fmt_g(res.max_g_compat)});
}

Vec<double> kaehler_defect_at(const ManifoldSpec& m, const std::vector<double>& p,
                              const Vec<double>& x, const Vec<double>& y) {
    ConstField fx{x}, fy{y};
    auto jy = j_applied(m, fy);
    Vec<double> a = covariant_derivative_at<double>(m, fx, jy, p);
    Vec<double> b = covariant_derivative_at<double>(m, fx, fy, p);
    Mat<double> j = j_matrix_at(m, seed_coords<double>(p));
    return vec_sub(a, j * b);
}

double max_kaehler_defect(const ManifoldSpec& m, const std::vector<std::vector<double>>& pts) {
    double worst = 0.0;
    for (const auto& p : pts) {
        Mat<double> g = metric_at_checked(m, p);
        for (int i = 0; i < m.dim; ++i)
            for (int j = 0; j < m.dim; ++j) {
                Vec<double> ei(m.dim, 0.0), ej(m.dim, 0.0);
                ei[i] = 1.0;
                ej[j] = 1.0;
                worst = std::max(worst, norm(g, kaehler_defect_at(m, p, ei, ej)));
            }
    }
    return worst;
}

Vec<double> space_form_curvature(double c, const ManifoldSpec& m, const std::vector<double>& p,
                                 const Vec<double>& x, const Vec<double>& y,
                                 const Vec<double>& z) {
    Mat<double> g = metric_at_p<double>(m, p);
    Mat<double> j = j_matrix_at(m, seed_coords<double>(p));
    Vec<double> jx = j * x, jy = j * y, jz = j * z;
    double gyz = dot(g, y, z), gxz = dot(g, x, z);
    double gjyz = dot(g, jy, z), gjxz = dot(g, jx, z);
    double gxjy = dot(g, x, jy);
    Vec<double> out(m.dim, 0.0);
    for (int k = 0; k < m.dim; ++k)
        out[k] = (c / 4.0) * (gyz * x[k] - gxz * y[k] + gjyz * jx[k] - gjxz * jy[k] +
                              2.0 * gxjy * jz[k]);
    return out;
}

SpaceFormFit fit_space_form_constant(const ManifoldSpec& m,
                                     const std::vector<std::vector<double>>& pts,
                                     std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    SpaceFormFit fit;

    struct Sample {
        Vec<double> actual;
        Vec<double> model;  // space-form curvature at c = 1
    };
    std::vector<std::vector<Sample>> samples;

    double num = 0, den = 0;
    for (const auto& p : pts) {
        Riemann r = riemann_tensor_at(m, p);
        std::vector<Sample> here;
        double pnum = 0, pden = 0;
        for (int rep = 0; rep < 10; ++rep) {
            Vec<double> x = random_vector(rng, m.dim);
            Vec<double> y = random_vector(rng, m.dim);
            Vec<double> z = random_vector(rng, m.dim);
            Sample s{riemann_apply(r, x, y, z), space_form_curvature(1.0, m, p, x, y, z)};
            for (int k = 0; k < m.dim; ++k) {
                pnum += s.model[k] * s.actual[k];
                pden += s.model[k] * s.model[k];
            }
            here.push_back(std::move(s));
        }
        num += pnum;
        den += pden;
        fit.per_point_c.push_back(pden > 0 ? pnum / pden : 0.0);
        samples.push_back(std::move(here));
    }
    fit.c_estimate = den > 0 ? num / den : 0.0;

    for (const auto& here : samples)
        for (const Sample& s : here)
            for (size_t k = 0; k < s.actual.size(); ++k)
                fit.residual_max = std::max(fit.residual_max,
                                            std::abs(s.actual[k] - fit.c_estimate * s.model[k]));
    return fit;
}

}  // namespace oneill
