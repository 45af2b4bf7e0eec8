#pragma once

// Pointwise operator blocks of J against the vertical/horizontal splitting:
// for vertical V, JV = phi V + omega V (vertical + horizontal parts); for
// horizontal X, JX = B X + C X (vertical + horizontal parts). Each block is
// pre- and post-projected, so as matrices on the full tangent space they
// annihilate the complementary subspace.
//
// The derived projectors d1, d2, jd2, mu are built by smooth matrix algebra
// alone: -phi^2 fixes the J-invariant part of the vertical space, and
// conjugating by J moves d2 into the horizontal space. They are honest
// projectors only when the vertical space actually splits J-invariantly; the
// classification layer establishes that before anything downstream leans on
// them.

#include <vector>

#include "oneill/complexstruct.hpp"
#include "oneill/submersion.hpp"

namespace oneill {

template <class S>
struct PointOperators {
    Mat<S> pv, ph;          // splitting projectors
    Mat<S> j;               // complex structure
    Mat<S> phi, omega, b, c;
    Mat<S> d1, d2, jd2, mu;  // distribution projectors
};

template <class S>
PointOperators<S> point_operators_at(const ScenarioSpec& s, const std::vector<S>& x) {
    PointOperators<S> ops;
    int n = s.total.dim;
    ops.pv = vertical_projector_at(s, x);
    ops.ph = Mat<S>::identity(n) - ops.pv;
    ops.j = j_matrix_at(s.total, x);
    ops.phi = ops.pv * (ops.j * ops.pv);
    ops.omega = ops.ph * (ops.j * ops.pv);
    ops.b = ops.pv * (ops.j * ops.ph);
    ops.c = ops.ph * (ops.j * ops.ph);
    ops.d1 = mat_scale(-1.0, ops.phi * ops.phi);
    ops.d2 = ops.pv - ops.d1;
    ops.jd2 = mat_scale(-1.0, ops.j * (ops.d2 * ops.j));
    ops.mu = ops.ph - ops.jd2;
    return ops;
}

PointOperators<double> point_operators_checked(const ScenarioSpec& s,
                                               const std::vector<double>& p);

}  // namespace oneill
