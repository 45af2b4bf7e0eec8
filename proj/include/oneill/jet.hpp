#pragma once

// Second-order forward-mode jets. A Jet2<double> carries value, gradient and
// Hessian with respect to n seeded variables; Jet2<Jet2<double>> gives third
// derivatives of anything built from inner-jet evaluations. Design rules that
// the rest of the library relies on:
//
//  * the value channel performs exactly the same double operations as a plain
//    evaluation, so `eval<double>` equals the `.val` of `eval<Jet2<double>>`
//    bit for bit;
//  * n == 0 encodes a constant that broadcasts against any seeded width;
//  * the Hessian is exactly symmetric: only the lower triangle is computed
//    and the upper triangle mirrors it.

#include <cmath>
#include <vector>

#include "oneill/errors.hpp"

namespace oneill {

inline double primal(double x) { return x; }

template <class T>
struct Jet2 {
    int n = 0;  // seeded width; 0 = constant
    T val{};
    std::vector<T> grad;   // size n
    std::vector<T> hess;   // size n*n row-major

    Jet2() = default;

    // Constant. The template keeps Jet2<double>(double) from colliding with
    // the copy constructor at deeper nesting levels.
    template <class U,
              class = std::enable_if_t<std::is_constructible_v<T, U> &&
                                       !std::is_same_v<std::decay_t<U>, Jet2<T>>>>
    Jet2(U&& c) : val(static_cast<T>(std::forward<U>(c))) {}

    static Jet2 variable(const T& v, int index, int nvars) {
        Jet2 j;
        j.n = nvars;
        j.val = v;
        j.grad.assign(nvars, T{});
        j.hess.assign(static_cast<size_t>(nvars) * nvars, T{});
        j.grad[index] = T(1.0);
        return j;
    }

    const T& h(int i, int j) const { return hess[static_cast<size_t>(i) * n + j]; }
    T& h(int i, int j) { return hess[static_cast<size_t>(i) * n + j]; }

    // Gradient/Hessian reads that treat constants as zero-filled. References,
    // not copies: at nesting depth 2 a copy here would allocate.
    const T& g_or0(int i) const { return n ? grad[i] : zero(); }
    const T& h_or0(int i, int j) const { return n ? h(i, j) : zero(); }

    static const T& zero() {
        static const T z{};
        return z;
    }
};

template <class T>
double primal(const Jet2<T>& x) {
    return primal(x.val);
}

namespace detail {
inline int join_width(int a, int b) {
    if (a == 0) return b;
    if (b == 0) return a;
    if (a != b) fail(Error::Code::Internal, "jet width mismatch");
    return a;
}
template <class T>
void resize_like(Jet2<T>& r, int n) {
    r.n = n;
    if (n) {
        r.grad.assign(n, T{});
        r.hess.assign(static_cast<size_t>(n) * n, T{});
    }
}
}  // namespace detail

template <class T>
Jet2<T> operator-(const Jet2<T>& a) {
    Jet2<T> r;
    detail::resize_like(r, a.n);
    r.val = -a.val;
    for (int i = 0; i < a.n; ++i) r.grad[i] = -a.grad[i];
    for (size_t k = 0; k < a.hess.size(); ++k) r.hess[k] = -a.hess[k];
    return r;
}

template <class T>
Jet2<T> operator+(const Jet2<T>& a, const Jet2<T>& b) {
    Jet2<T> r;
    detail::resize_like(r, detail::join_width(a.n, b.n));
    r.val = a.val + b.val;
    for (int i = 0; i < r.n; ++i) r.grad[i] = a.g_or0(i) + b.g_or0(i);
    for (int i = 0; i < r.n; ++i)
        for (int j = 0; j <= i; ++j) {
            r.h(i, j) = a.h_or0(i, j) + b.h_or0(i, j);
            if (i != j) r.h(j, i) = r.h(i, j);
        }
    return r;
}

template <class T>
Jet2<T> operator-(const Jet2<T>& a, const Jet2<T>& b) {
    Jet2<T> r;
    detail::resize_like(r, detail::join_width(a.n, b.n));
    r.val = a.val - b.val;
    for (int i = 0; i < r.n; ++i) r.grad[i] = a.g_or0(i) - b.g_or0(i);
    for (int i = 0; i < r.n; ++i)
        for (int j = 0; j <= i; ++j) {
            r.h(i, j) = a.h_or0(i, j) - b.h_or0(i, j);
            if (i != j) r.h(j, i) = r.h(i, j);
        }
    return r;
}

template <class T>
Jet2<T> operator*(const Jet2<T>& a, const Jet2<T>& b) {
    Jet2<T> r;
    detail::resize_like(r, detail::join_width(a.n, b.n));
    r.val = a.val * b.val;
    for (int i = 0; i < r.n; ++i) r.grad[i] = a.g_or0(i) * b.val + a.val * b.g_or0(i);
    for (int i = 0; i < r.n; ++i)
        for (int j = 0; j <= i; ++j) {
            r.h(i, j) = a.h_or0(i, j) * b.val + a.g_or0(i) * b.g_or0(j) +
                        a.g_or0(j) * b.g_or0(i) + a.val * b.h_or0(i, j);
            if (i != j) r.h(j, i) = r.h(i, j);
        }
    return r;
}

template <class T>
Jet2<T> operator/(const Jet2<T>& a, const Jet2<T>& b) {
    if (primal(b) == 0.0) fail(Error::Code::Domain, "division by zero");
    Jet2<T> r;
    detail::resize_like(r, detail::join_width(a.n, b.n));
    r.val = a.val / b.val;
    // q = a/b  =>  q_i = (a_i - q b_i)/b,  q_ij = (a_ij - q_i b_j - q_j b_i - q b_ij)/b
    for (int i = 0; i < r.n; ++i) r.grad[i] = (a.g_or0(i) - r.val * b.g_or0(i)) / b.val;
    for (int i = 0; i < r.n; ++i)
        for (int j = 0; j <= i; ++j) {
            r.h(i, j) = (a.h_or0(i, j) - r.grad[i] * b.g_or0(j) - r.grad[j] * b.g_or0(i) -
                         r.val * b.h_or0(i, j)) /
                        b.val;
            if (i != j) r.h(j, i) = r.h(i, j);
        }
    return r;
}

template <class T> Jet2<T> operator+(const Jet2<T>& a, double c) { return a + Jet2<T>(c); }
template <class T> Jet2<T> operator+(double c, const Jet2<T>& a) { return Jet2<T>(c) + a; }
template <class T> Jet2<T> operator-(const Jet2<T>& a, double c) { return a - Jet2<T>(c); }
template <class T> Jet2<T> operator-(double c, const Jet2<T>& a) { return Jet2<T>(c) - a; }
template <class T> Jet2<T> operator*(const Jet2<T>& a, double c) { return a * Jet2<T>(c); }
template <class T> Jet2<T> operator*(double c, const Jet2<T>& a) { return Jet2<T>(c) * a; }
template <class T> Jet2<T> operator/(const Jet2<T>& a, double c) { return a / Jet2<T>(c); }
template <class T> Jet2<T> operator/(double c, const Jet2<T>& a) { return Jet2<T>(c) / a; }

// f(u) for scalar f with first/second derivative values d1, d2 at u.val.
template <class T>
Jet2<T> chain(const Jet2<T>& u, T f, T d1, T d2) {
    Jet2<T> r;
    detail::resize_like(r, u.n);
    r.val = std::move(f);
    for (int i = 0; i < u.n; ++i) r.grad[i] = d1 * u.grad[i];
    for (int i = 0; i < r.n; ++i)
        for (int j = 0; j <= i; ++j) {
            r.h(i, j) = d1 * u.h(i, j) + d2 * u.grad[i] * u.grad[j];
            if (i != j) r.h(j, i) = r.h(i, j);
        }
    return r;
}

template <class T>
Jet2<T> sin(const Jet2<T>& u) {
    using std::sin;
    using std::cos;
    if (u.n == 0) return Jet2<T>(sin(u.val));
    T s = sin(u.val), c = cos(u.val);
    return chain(u, s, c, -s);
}

template <class T>
Jet2<T> cos(const Jet2<T>& u) {
    using std::sin;
    using std::cos;
    if (u.n == 0) return Jet2<T>(cos(u.val));
    T s = sin(u.val), c = cos(u.val);
    return chain(u, c, -s, -c);
}

template <class T>
Jet2<T> exp(const Jet2<T>& u) {
    using std::exp;
    if (u.n == 0) return Jet2<T>(exp(u.val));
    T e = exp(u.val);
    return chain(u, e, e, e);
}

template <class T>
Jet2<T> log(const Jet2<T>& u) {
    using std::log;
    if (primal(u) <= 0.0) fail(Error::Code::Domain, "log of non-positive value");
    if (u.n == 0) return Jet2<T>(log(u.val));
    T inv = T(1.0) / u.val;
    return chain(u, log(u.val), inv, -(inv * inv));
}

template <class T>
Jet2<T> sqrt(const Jet2<T>& u) {
    using std::sqrt;
    if (primal(u) < 0.0) fail(Error::Code::Domain, "sqrt of negative value");
    if (u.n == 0) return Jet2<T>(sqrt(u.val));
    if (primal(u) == 0.0) fail(Error::Code::Domain, "sqrt derivative at zero");
    T s = sqrt(u.val);
    T d1 = T(0.5) / s;
    return chain(u, s, d1, T(-0.5) * d1 / u.val);
}

// Checked double counterparts of the jet transcendentals, sharing their
// domain policy, so generic code can call sin/cos/exp/log/sqrt unqualified
// over any supported scalar.
inline double sin(double u) { return std::sin(u); }
inline double cos(double u) { return std::cos(u); }
inline double exp(double u) { return std::exp(u); }
inline double log(double u) {
    if (u <= 0.0) fail(Error::Code::Domain, "log of non-positive value");
    return std::log(u);
}
inline double sqrt(double u) {
    if (u < 0.0) fail(Error::Code::Domain, "sqrt of negative value");
    return std::sqrt(u);
}

// Integer power by repeated multiplication. Both the double evaluator and the
// jet evaluators route through this, so the value channels agree exactly.
template <class S>
S powi(const S& base, int e) {
    if (e == 0) return S(1.0);
    int m = e < 0 ? -e : e;
    S r = base;
    for (int k = 1; k < m; ++k) r = r * base;
    if (e < 0) {
        if (primal(r) == 0.0) fail(Error::Code::Domain, "zero raised to negative power");
        r = S(1.0) / r;
    }
    return r;
}

}  // namespace oneill
