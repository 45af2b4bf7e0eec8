#include "oneill/geometry.hpp"

#include <random>

namespace oneill {

Mat<double> metric_at_checked(const ManifoldSpec& m, const std::vector<double>& p) {
    Mat<double> g = metric_at_p<double>(m, p);
    std::vector<double> ev = sym_eigenvalues(g);
    if (ev.empty() || !(ev.front() > 1e-10))
        fail(Error::Code::DegenerateMetric,
             "metric is not positive definite at a sampled point (min eigenvalue " +
                 repr_double(ev.empty() ? 0.0 : ev.front()) + ")");
    return g;
}

Riemann riemann_tensor_at(const ManifoldSpec& m, const std::vector<double>& p) {
    int n = m.dim;
    Christoffel<Jet2<double>> cj = christoffel_at<Jet2<double>>(m, p);
    auto val = [&](int k, int i, int j) { return cj.at(k, i, j).val; };

    Riemann r(n);
    for (int l = 0; l < n; ++l)
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < i; ++j) {
                    double s = cj.at(l, j, k).g_or0(i) - cj.at(l, i, k).g_or0(j);
                    for (int mm = 0; mm < n; ++mm)
                        s += val(l, i, mm) * val(mm, j, k) - val(l, j, mm) * val(mm, i, k);
                    r.at(l, k, i, j) = s;
                    r.at(l, k, j, i) = -s;  // antisymmetry in the plane slots
                }
    return r;
}

Vec<double> riemann_apply(const Riemann& r, const Vec<double>& x, const Vec<double>& y,
                          const Vec<double>& z) {
    int n = r.n;
    Vec<double> out(n, 0.0);
    for (int l = 0; l < n; ++l) {
        double s = 0;
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) s += r.at(l, k, i, j) * z[k] * x[i] * y[j];
        out[l] = s;
    }
    return out;
}

Vec<double> riemann_at(const ManifoldSpec& m, const std::vector<double>& p, const Vec<double>& x,
                       const Vec<double>& y, const Vec<double>& z) {
    return riemann_apply(riemann_tensor_at(m, p), x, y, z);
}

std::vector<std::vector<double>> sample_points(const ManifoldSpec& m, int count, uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto uniform = [&] { return (rng() >> 11) * 0x1.0p-53; };
    std::vector<std::vector<double>> pts;
    pts.reserve(count);
    for (int k = 0; k < count; ++k) {
        std::vector<double> p(m.dim);
        for (int i = 0; i < m.dim; ++i) {
            Interval iv = m.domain_of(i);
            double margin = 0.05 * (iv.hi - iv.lo);
            p[i] = (iv.lo + margin) + uniform() * (iv.hi - iv.lo - 2 * margin);
        }
        pts.push_back(std::move(p));
    }
    return pts;
}

}  // namespace oneill
