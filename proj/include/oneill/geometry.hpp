#pragma once

// Chart-level Riemannian geometry of one manifold: metric evaluation,
// Christoffel symbols, Levi-Civita covariant derivatives, Lie brackets,
// Riemann curvature. Everything is generic over the scalar algebra; seeding a
// point as jet variables makes any quantity computed here differentiable one
// more time from the outside.

#include <cstdint>
#include <string>
#include <vector>

#include "oneill/expr.hpp"
#include "oneill/jet.hpp"
#include "oneill/linalg.hpp"

namespace oneill {

struct Interval {
    double lo = -2.0;
    double hi = 2.0;
};

// One chart. The metric stores only the upper triangle, so symmetry holds by
// construction. J, when present, is a full matrix of expressions.
struct ManifoldSpec {
    int dim = 0;
    std::vector<std::string> coords;
    std::vector<ExprPtr> metric_upper;  // row-major upper triangle, size dim(dim+1)/2
    std::vector<ExprPtr> J;             // empty, or row-major dim*dim
    std::vector<Interval> domain;       // per coordinate; defaults to (-2,2)
    std::string label;

    bool has_J() const { return !J.empty(); }

    const ExprPtr& metric_entry(int i, int j) const {
        if (i > j) std::swap(i, j);
        return metric_upper[static_cast<size_t>(i) * dim - i * (i - 1) / 2 + (j - i)];
    }

    Interval domain_of(int i) const { return i < static_cast<int>(domain.size()) ? domain[i] : Interval{}; }
};

// Seeds p as jet variables at every nesting level of S, so a value computed
// from the result carries derivatives with respect to the coordinates.
template <class S>
struct SeedTraits {
    static S var(double v, int, int) { return v; }
};
template <class T>
struct SeedTraits<Jet2<T>> {
    static Jet2<T> var(double v, int i, int n) {
        return Jet2<T>::variable(SeedTraits<T>::var(v, i, n), i, n);
    }
};

template <class S>
std::vector<S> seed_coords(const std::vector<double>& p) {
    int n = static_cast<int>(p.size());
    std::vector<S> x;
    x.reserve(p.size());
    for (int i = 0; i < n; ++i) x.push_back(SeedTraits<S>::var(p[i], i, n));
    return x;
}

// Vector fields are anything callable as f(coords over S) -> components over
// S for every scalar S used here. Two basic ones:

struct ExprField {
    std::vector<std::string> names;
    std::vector<ExprPtr> comps;

    template <class S>
    Vec<S> operator()(const std::vector<S>& x) const {
        Vec<S> v;
        v.reserve(comps.size());
        for (const auto& c : comps) v.push_back(eval_expr<S>(*c, names, x));
        return v;
    }
};

struct ConstField {
    Vec<double> v;

    template <class S>
    Vec<S> operator()(const std::vector<S>&) const {
        Vec<S> out;
        out.reserve(v.size());
        for (double c : v) out.push_back(S(c));
        return out;
    }
};

// Rescales a field by 1 + sum_i (x_i - center_i): equal to the inner field at
// the center point but with different derivatives there. Feeding both through
// a tensorial formula and comparing at the center witnesses tensoriality.
template <class F>
struct Modulated {
    F inner;
    std::vector<double> center;

    template <class S>
    Vec<S> operator()(const std::vector<S>& x) const {
        S scale(1.0);
        for (size_t i = 0; i < center.size(); ++i) scale = scale + (x[i] - center[i]);
        Vec<S> v = inner(x);
        for (auto& c : v) c = scale * c;
        return v;
    }
};

template <class F>
Modulated<F> modulated(F f, std::vector<double> center) {
    return Modulated<F>{std::move(f), std::move(center)};
}

template <class S>
Mat<S> metric_at(const ManifoldSpec& m, const std::vector<S>& x) {
    Mat<S> g(m.dim, m.dim);
    for (int i = 0; i < m.dim; ++i)
        for (int j = i; j < m.dim; ++j) {
            g(i, j) = eval_expr<S>(*m.metric_entry(i, j), m.coords, x);
            if (i != j) g(j, i) = g(i, j);
        }
    return g;
}

template <class S>
Mat<S> metric_at_p(const ManifoldSpec& m, const std::vector<double>& p) {
    return metric_at(m, seed_coords<S>(p));
}

// Double-precision metric with the positive-definiteness gate: smallest
// eigenvalue must exceed 1e-10.
Mat<double> metric_at_checked(const ManifoldSpec& m, const std::vector<double>& p);

template <class S>
struct Christoffel {
    int n = 0;
    std::vector<S> v;  // index ((k*n)+i)*n+j for Gamma^k_{ij}

    explicit Christoffel(int dim = 0)
        : n(dim), v(static_cast<size_t>(dim) * dim * dim) {}
    const S& at(int k, int i, int j) const {
        return v[(static_cast<size_t>(k) * n + i) * n + j];
    }
    S& at(int k, int i, int j) { return v[(static_cast<size_t>(k) * n + i) * n + j]; }
};

// Koszul coordinate formula. The metric is evaluated one jet level above S to
// supply the partial derivatives; the result stays at level S, so Christoffel
// symbols themselves remain differentiable from outside when S is a jet. The
// _coords form takes an S-valued position carrying whatever derivative
// structure the caller seeded.
template <class S>
Christoffel<S> christoffel_at_coords(const ManifoldSpec& m, const std::vector<S>& xs) {
    int n = m.dim;
    std::vector<Jet2<S>> x;
    x.reserve(xs.size());
    for (int i = 0; i < n; ++i) x.push_back(Jet2<S>::variable(xs[i], i, n));
    Mat<Jet2<S>> gj = metric_at(m, x);
    Mat<S> gval(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) gval(i, j) = gj(i, j).val;
    Mat<S> ginv = inverse(gval, Error::Code::DegenerateMetric);

    Christoffel<S> c(n);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j <= i; ++j) {
                S sum{};
                for (int l = 0; l < n; ++l) {
                    S dg = gj(j, l).g_or0(i) + gj(i, l).g_or0(j) - gj(i, j).g_or0(l);
                    sum = sum + ginv(k, l) * dg;
                }
                c.at(k, i, j) = 0.5 * sum;
                if (i != j) c.at(k, j, i) = c.at(k, i, j);
            }
    return c;
}

template <class S>
Christoffel<S> christoffel_at(const ManifoldSpec& m, const std::vector<double>& p) {
    return christoffel_at_coords<S>(m, seed_coords<S>(p));
}

// [X,Y]^k = X^i d_i Y^k - Y^i d_i X^k
template <class S, class FX, class FY>
Vec<S> lie_bracket_at(const FX& X, const FY& Y, const std::vector<double>& p) {
    int n = static_cast<int>(p.size());
    auto x = seed_coords<Jet2<S>>(p);
    Vec<Jet2<S>> xv = X(x);
    Vec<Jet2<S>> yv = Y(x);
    Vec<S> out(n, S{});
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            out[k] = out[k] + xv[i].val * yv[k].g_or0(i) - yv[i].val * xv[k].g_or0(i);
    return out;
}

// (nabla_X Y)^k = X^i d_i Y^k + Gamma^k_{ij} X^i Y^j
template <class S, class FX, class FY>
Vec<S> covariant_derivative_at_coords(const ManifoldSpec& m, const FX& X, const FY& Y,
                                      const std::vector<S>& xs) {
    int n = m.dim;
    std::vector<Jet2<S>> x;
    x.reserve(xs.size());
    for (int i = 0; i < n; ++i) x.push_back(Jet2<S>::variable(xs[i], i, n));
    Vec<Jet2<S>> xv = X(x);
    Vec<Jet2<S>> yv = Y(x);
    Christoffel<S> c = christoffel_at_coords<S>(m, xs);
    Vec<S> out(n, S{});
    for (int k = 0; k < n; ++k) {
        for (int i = 0; i < n; ++i) {
            out[k] = out[k] + xv[i].val * yv[k].g_or0(i);
            for (int j = 0; j < n; ++j)
                out[k] = out[k] + c.at(k, i, j) * xv[i].val * yv[j].val;
        }
    }
    return out;
}

template <class S, class FX, class FY>
Vec<S> covariant_derivative_at(const ManifoldSpec& m, const FX& X, const FY& Y,
                               const std::vector<double>& p) {
    return covariant_derivative_at_coords<S>(m, X, Y, seed_coords<S>(p));
}

// R^l_{kij} with the convention R(e_i,e_j)e_k = R^l_{kij} e_l, realizing
// R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_{[X,Y]} Z.
struct Riemann {
    int n = 0;
    std::vector<double> v;

    explicit Riemann(int dim = 0)
        : n(dim), v(static_cast<size_t>(dim) * dim * dim * dim) {}
    double at(int l, int k, int i, int j) const {
        return v[((static_cast<size_t>(l) * n + k) * n + i) * n + j];
    }
    double& at(int l, int k, int i, int j) {
        return v[((static_cast<size_t>(l) * n + k) * n + i) * n + j];
    }
};

Riemann riemann_tensor_at(const ManifoldSpec& m, const std::vector<double>& p);

// R(x,y)z for tangent vectors given by components at p.
Vec<double> riemann_at(const ManifoldSpec& m, const std::vector<double>& p,
                       const Vec<double>& x, const Vec<double>& y, const Vec<double>& z);
Vec<double> riemann_apply(const Riemann& r, const Vec<double>& x, const Vec<double>& y,
                          const Vec<double>& z);

// Seeded uniform sampling over the declared domain, shrunk 5% inward from
// each boundary to stay clear of chart degeneracies.
std::vector<std::vector<double>> sample_points(const ManifoldSpec& m, int count, uint64_t seed);

}  // namespace oneill
