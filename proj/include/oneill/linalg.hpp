#pragma once

// Small dense matrices over an arbitrary scalar algebra (double, Jet2<double>,
// Jet2<Jet2<double>>). Everything here is O(n^3) Gauss-Jordan territory; the
// matrices involved never exceed 8x8. Eigen is used only behind the
// double-precision entry points in linalg.cpp (eigenvalues, singular values):
// instantiating Eigen over jet scalars would drag comparison semantics into
// the AD type for no benefit at these sizes.

#include <cstdlib>
#include <vector>

#include "oneill/errors.hpp"
#include "oneill/jet.hpp"

namespace oneill {

template <class S>
using Vec = std::vector<S>;

template <class S>
struct Mat {
    int rows = 0, cols = 0;
    std::vector<S> a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}

    S& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    const S& operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    static Mat identity(int n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = S(1.0);
        return m;
    }
};

template <class S>
Mat<S> operator+(const Mat<S>& x, const Mat<S>& y) {
    Mat<S> r(x.rows, x.cols);
    for (size_t k = 0; k < r.a.size(); ++k) r.a[k] = x.a[k] + y.a[k];
    return r;
}

template <class S>
Mat<S> operator-(const Mat<S>& x, const Mat<S>& y) {
    Mat<S> r(x.rows, x.cols);
    for (size_t k = 0; k < r.a.size(); ++k) r.a[k] = x.a[k] - y.a[k];
    return r;
}

template <class S>
Mat<S> operator*(const Mat<S>& x, const Mat<S>& y) {
    Mat<S> r(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int k = 0; k < x.cols; ++k) {
            const S& xik = x(i, k);
            for (int j = 0; j < y.cols; ++j) r(i, j) = r(i, j) + xik * y(k, j);
        }
    return r;
}

template <class S>
Vec<S> operator*(const Mat<S>& x, const Vec<S>& v) {
    Vec<S> r(x.rows, S{});
    for (int i = 0; i < x.rows; ++i)
        for (int j = 0; j < x.cols; ++j) r[i] = r[i] + x(i, j) * v[j];
    return r;
}

template <class S>
Mat<S> mat_scale(double c, const Mat<S>& x) {
    Mat<S> r(x.rows, x.cols);
    for (size_t k = 0; k < x.a.size(); ++k) r.a[k] = S(c) * x.a[k];
    return r;
}

template <class S>
Mat<S> transpose(const Mat<S>& x) {
    Mat<S> r(x.cols, x.rows);
    for (int i = 0; i < x.rows; ++i)
        for (int j = 0; j < x.cols; ++j) r(j, i) = x(i, j);
    return r;
}

template <class S>
Vec<S> vec_add(const Vec<S>& x, const Vec<S>& y) {
    Vec<S> r(x.size());
    for (size_t k = 0; k < x.size(); ++k) r[k] = x[k] + y[k];
    return r;
}

template <class S>
Vec<S> vec_sub(const Vec<S>& x, const Vec<S>& y) {
    Vec<S> r(x.size());
    for (size_t k = 0; k < x.size(); ++k) r[k] = x[k] - y[k];
    return r;
}

template <class S>
Vec<S> vec_scale(const S& c, const Vec<S>& x) {
    Vec<S> r(x.size());
    for (size_t k = 0; k < x.size(); ++k) r[k] = c * x[k];
    return r;
}

template <class S>
S dot(const Vec<S>& x, const Vec<S>& y) {
    S r{};
    for (size_t k = 0; k < x.size(); ++k) r = r + x[k] * y[k];
    return r;
}

// g-inner product x^T G y.
template <class S>
S dot(const Mat<S>& G, const Vec<S>& x, const Vec<S>& y) {
    S r{};
    for (int i = 0; i < G.rows; ++i)
        for (int j = 0; j < G.cols; ++j) r = r + x[i] * G(i, j) * y[j];
    return r;
}

// Gauss-Jordan inverse with partial pivoting on the primal magnitude. The
// primal part of a jet matrix is the plain double matrix, so pivot choices
// agree across scalar algebras and the value channel stays exact.
template <class S>
Mat<S> inverse(const Mat<S>& m, Error::Code on_singular = Error::Code::SingularMatrix) {
    if (m.rows != m.cols) fail(Error::Code::Internal, "inverse of non-square matrix");
    int n = m.rows;
    Mat<S> a = m;
    Mat<S> inv = Mat<S>::identity(n);
    for (int col = 0; col < n; ++col) {
        int piv = col;
        double best = std::abs(primal(a(col, col)));
        for (int r = col + 1; r < n; ++r) {
            double cand = std::abs(primal(a(r, col)));
            if (cand > best) {
                best = cand;
                piv = r;
            }
        }
        if (!(best > 1e-250)) fail(on_singular, "singular matrix in inverse");
        if (piv != col)
            for (int j = 0; j < n; ++j) {
                std::swap(a(piv, j), a(col, j));
                std::swap(inv(piv, j), inv(col, j));
            }
        S d = a(col, col);
        for (int j = 0; j < n; ++j) {
            a(col, j) = a(col, j) / d;
            inv(col, j) = inv(col, j) / d;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            // No primal-zero shortcut here: a jet entry with zero value can
            // still carry derivatives that must be eliminated.
            S f = a(r, col);
            for (int j = 0; j < n; ++j) {
                a(r, j) = a(r, j) - f * a(col, j);
                inv(r, j) = inv(r, j) - f * inv(col, j);
            }
        }
    }
    return inv;
}

double norm(const Vec<double>& x);
double norm(const Mat<double>& G, const Vec<double>& x);

// Double-precision spectral helpers (Eigen-backed, linalg.cpp).
std::vector<double> sym_eigenvalues(const Mat<double>& m);                    // ascending
std::pair<std::vector<double>, Mat<double>> sym_eigen(const Mat<double>& m);  // vecs in columns
std::vector<double> singular_values(const Mat<double>& m);                    // descending

// Modified Gram-Schmidt with respect to the inner product G. Candidates whose
// orthogonalized residual drops below rel_tol of the largest candidate's
// G-norm are dropped (so both dependent directions and noise-level candidates
// go).
std::vector<Vec<double>> gram_schmidt(const Mat<double>& G, const std::vector<Vec<double>>& cand,
                                      double rel_tol = 1e-9);

}  // namespace oneill
