#pragma once

#include <functional>
#include <vector>

#include "oneill/errors.hpp"

// Central finite differences, used throughout the tests as the independent
// oracle for anything the jets or the geometry kernels differentiate.
namespace fd {

using Fn = std::function<double(const std::vector<double>&)>;

inline double partial(const Fn& f, std::vector<double> x, int i, double h = 1e-5) {
    x[i] += h;
    double fp = f(x);
    x[i] -= 2 * h;
    double fm = f(x);
    return (fp - fm) / (2 * h);
}

inline double second(const Fn& f, std::vector<double> x, int i, int j, double h = 1e-4) {
    if (i == j) {
        double f0 = f(x);
        x[i] += h;
        double fp = f(x);
        x[i] -= 2 * h;
        double fm = f(x);
        return (fp - 2 * f0 + fm) / (h * h);
    }
    auto at = [&](double di, double dj) {
        std::vector<double> y = x;
        y[i] += di;
        y[j] += dj;
        return f(y);
    };
    return (at(h, h) - at(h, -h) - at(-h, h) + at(-h, -h)) / (4 * h * h);
}

inline std::vector<double> grad(const Fn& f, const std::vector<double>& x, double h = 1e-5) {
    std::vector<double> g(x.size());
    for (size_t i = 0; i < x.size(); ++i) g[i] = partial(f, x, static_cast<int>(i), h);
    return g;
}

}  // namespace fd

// True iff f() throws an oneill::Error carrying exactly the wanted code.
template <class F>
bool throws_code(oneill::Error::Code want, F&& f) {
    try {
        f();
    } catch (const oneill::Error& e) {
        return e.code == want;
    } catch (...) {
        return false;
    }
    return false;
}
