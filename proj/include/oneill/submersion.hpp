#pragma once

// The map F between the two spaces of a scenario: differential, vertical and
// horizontal projectors, submersion verification, horizontal lifts, and the
// second fundamental form of the map.
//
// Tangent vectors are extended to fields by the projected-frame construction
// x -> P(x) * (constant vector), with P the vertical or horizontal projector.
// The projector family is smooth in x (it is built from the metric and the
// Jacobian by inversion of a full-rank Gram block), so these extensions are
// differentiable to the depth the jets carry, and every tensorial quantity
// computed from them is independent of the choice of extension.

#include <cstdint>
#include <vector>

#include "oneill/geometry.hpp"
#include "oneill/report.hpp"
#include "oneill/scenario.hpp"

namespace oneill {

template <class S>
Vec<S> map_value(const ScenarioSpec& s, const std::vector<S>& x) {
    Vec<S> q;
    q.reserve(s.map.size());
    for (const auto& c : s.map) q.push_back(eval_expr<S>(*c, s.total.coords, x));
    return q;
}

Vec<double> map_point(const ScenarioSpec& s, const std::vector<double>& p);

// Jacobian entries J(i,j) = dF_i/dx_j as S-values at an S-valued point, one
// jet level up from S internally, same trick as christoffel_at.
template <class S>
Mat<S> map_jacobian_at(const ScenarioSpec& s, const std::vector<S>& x) {
    int n = s.total.dim, m = s.base.dim;
    std::vector<Jet2<S>> xj;
    xj.reserve(x.size());
    for (int i = 0; i < n; ++i) xj.push_back(Jet2<S>::variable(x[i], i, n));
    Mat<S> jac(m, n);
    for (int i = 0; i < m; ++i) {
        Jet2<S> fi = eval_expr<Jet2<S>>(*s.map[i], s.total.coords, xj);
        for (int j = 0; j < n; ++j) jac(i, j) = fi.g_or0(j);
    }
    return jac;
}

Mat<double> map_jacobian(const ScenarioSpec& s, const std::vector<double>& p);

// Relative-singular-value rank gate: smallest/largest < 1e-7 is a rank drop.
void require_full_rank(const Mat<double>& jac, const std::vector<double>& p);

// P_V = I - G^-1 J^T (J G^-1 J^T)^-1 J, the g1-orthogonal projector onto
// ker dF. Smooth in x wherever the Jacobian keeps full rank.
template <class S>
Mat<S> vertical_projector_at(const ScenarioSpec& s, const std::vector<S>& x) {
    int n = s.total.dim;
    Mat<S> g = metric_at(s.total, x);
    Mat<S> jac = map_jacobian_at(s, x);
    Mat<S> gi = inverse(g, Error::Code::DegenerateMetric);
    Mat<S> gijt = gi * transpose(jac);
    Mat<S> gram = jac * gijt;
    Mat<S> gram_inv = inverse(gram, Error::Code::RankDeficient);
    Mat<S> ph = gijt * (gram_inv * jac);
    Mat<S> pv = Mat<S>::identity(n) - ph;
    return pv;
}

template <class S>
Mat<S> horizontal_projector_at(const ScenarioSpec& s, const std::vector<S>& x) {
    return Mat<S>::identity(s.total.dim) - vertical_projector_at(s, x);
}

// Rank-gated double-precision projector for drivers.
Mat<double> vertical_projector_checked(const ScenarioSpec& s, const std::vector<double>& p);

Vec<double> pushforward_at(const ScenarioSpec& s, const std::vector<double>& p,
                           const Vec<double>& v);

// Right inverse of the Jacobian with g1-horizontal columns,
// A = G^-1 J^T (J G^-1 J^T)^-1: column a is the horizontal lift of d/dy_a.
template <class S>
Mat<S> horizontal_lift_matrix_at(const ScenarioSpec& s, const std::vector<S>& x) {
    Mat<S> g = metric_at(s.total, x);
    Mat<S> jac = map_jacobian_at(s, x);
    Mat<S> gi = inverse(g, Error::Code::DegenerateMetric);
    Mat<S> gijt = gi * transpose(jac);
    Mat<S> gram = jac * gijt;
    return gijt * inverse(gram, Error::Code::RankDeficient);
}

// Projected-frame extensions of a fixed tangent vector.
struct VerticalExtension {
    const ScenarioSpec* s = nullptr;
    Vec<double> v;

    template <class S>
    Vec<S> operator()(const std::vector<S>& x) const {
        return vertical_projector_at(*s, x) * ConstField{v}(x);
    }
};

struct HorizontalExtension {
    const ScenarioSpec* s = nullptr;
    Vec<double> v;

    template <class S>
    Vec<S> operator()(const std::vector<S>& x) const {
        return horizontal_projector_at(*s, x) * ConstField{v}(x);
    }
};

// Pointwise projected part of an arbitrary field.
template <class F>
struct VerticalPart {
    const ScenarioSpec* s = nullptr;
    F inner;

    template <class S>
    Vec<S> operator()(const std::vector<S>& x) const {
        return vertical_projector_at(*s, x) * inner(x);
    }
};

template <class F>
struct HorizontalPart {
    const ScenarioSpec* s = nullptr;
    F inner;

    template <class S>
    Vec<S> operator()(const std::vector<S>& x) const {
        return horizontal_projector_at(*s, x) * inner(x);
    }
};

template <class F>
VerticalPart<F> vertical_part(const ScenarioSpec& s, F f) {
    return {&s, std::move(f)};
}

template <class F>
HorizontalPart<F> horizontal_part(const ScenarioSpec& s, F f) {
    return {&s, std::move(f)};
}

// Anchored extension splitting a fixed tangent vector at the anchor point
// into vertical + horizontal parts and extending each by its own projected
// frame. Unlike the constant extension, this keeps both parts inside their
// distributions away from the anchor.
struct SplitExtension {
    const ScenarioSpec* s = nullptr;
    Vec<double> v_part, h_part;

    template <class S>
    Vec<S> operator()(const std::vector<S>& x) const {
        Mat<S> pv = vertical_projector_at(*s, x);
        Mat<S> ph = Mat<S>::identity(s->total.dim) - pv;
        return vec_add(pv * ConstField{v_part}(x), ph * ConstField{h_part}(x));
    }
};

SplitExtension split_extension(const ScenarioSpec& s, const std::vector<double>& p,
                               const Vec<double>& v);

// Evaluate a field at a jet point, reusing an already-computed vertical
// projector when the field is built from one. The generic overload ignores
// the shared projector; the SplitExtension overload skips recomputing it,
// which matters inside nested-jet sweeps where each projector costs two
// matrix inversions at jet depth two.
template <class F, class S>
Vec<S> eval_with_projector(const F& f, const std::vector<S>& x, const Mat<S>&) {
    return f(x);
}

template <class S>
Vec<S> eval_with_projector(const SplitExtension& f, const std::vector<S>& x, const Mat<S>& pv) {
    Mat<S> ph = Mat<S>::identity(pv.rows) - pv;
    return vec_add(pv * ConstField{f.v_part}(x), ph * ConstField{f.h_part}(x));
}

// Basic lift of a base vector field: X(x) = A(x) * Xstar(F(x)). Horizontal
// everywhere and F-related to Xstar by construction.
template <class FBase>
struct BasicLift {
    const ScenarioSpec* s = nullptr;
    FBase base_field;

    template <class S>
    Vec<S> operator()(const std::vector<S>& x) const {
        return horizontal_lift_matrix_at(*s, x) * base_field(map_value(*s, x));
    }
};

template <class FBase>
BasicLift<FBase> basic_lift(const ScenarioSpec& s, FBase f) {
    return BasicLift<FBase>{&s, std::move(f)};
}

// Orthonormal bases for the splitting at a point. The distribution bases
// (d1, d2, jd2, mu) are filled by the vertical splitting layer; this layer
// provides the vertical/horizontal pair.
struct TangentSplit {
    std::vector<double> at;
    std::vector<Vec<double>> vertical;
    std::vector<Vec<double>> horizontal;
    std::vector<Vec<double>> d1, d2, jd2, mu;
    std::vector<double> phi_sq_spectrum;
};

TangentSplit base_split_at(const ScenarioSpec& s, const std::vector<double>& p);

// (nabla F*)(X,Y) at p, a vector at F(p) in base coordinates: the pullback
// covariant derivative of F*Y along X minus F*(nabla^1_X Y). Tensorial in
// both slots, so the value does not depend on how X, Y extend off p.
template <class FX, class FY>
Vec<double> second_fundamental_form_at(const ScenarioSpec& s, const std::vector<double>& p,
                                       const FX& X, const FY& Y) {
    int n = s.total.dim, m = s.base.dim;
    auto xj = seed_coords<Jet2<double>>(p);
    Mat<Jet2<double>> jac = map_jacobian_at(s, xj);
    Vec<Jet2<double>> yx = Y(xj);
    Vec<Jet2<double>> w = jac * yx;  // F*Y as a section along F, with x-derivatives
    Vec<Jet2<double>> xx = X(xj);

    Vec<double> q = map_value(s, p);
    Christoffel<double> c2 = christoffel_at<double>(s.base, q);

    Vec<double> fx(m, 0.0);
    for (int a = 0; a < m; ++a)
        for (int i = 0; i < n; ++i) fx[a] += jac(a, i).val * xx[i].val;

    Vec<double> out(m, 0.0);
    for (int c = 0; c < m; ++c) {
        for (int i = 0; i < n; ++i) out[c] += xx[i].val * w[c].g_or0(i);
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) out[c] += c2.at(c, a, b) * fx[a] * w[b].val;
    }

    Vec<double> cov = covariant_derivative_at<double>(s.total, X, Y, p);
    Mat<double> jp = map_jacobian(s, p);
    Vec<double> push = jp * cov;
    for (int c = 0; c < m; ++c) out[c] -= push[c];
    return out;
}

// S1 (maximal rank) and S2 (horizontal isometry) at every sampled point.
CheckReport check_riemannian_submersion(const ScenarioSpec& s,
                                        const std::vector<std::vector<double>>& pts,
                                        double tol_scale = 1.0);

// Symmetry of (nabla F*) in its two slots, extension independence, and its
// vanishing on horizontal pairs when the map is a Riemannian submersion.
CheckReport check_second_fundamental_form(const ScenarioSpec& s,
                                          const std::vector<std::vector<double>>& pts,
                                          double tol_scale = 1.0);

// Pushforward of the horizontal part of a bracket of basic lifts against the
// base bracket. Applicable to constant-Jacobian submersions only.
CheckReport check_basic_field_correspondence(const ScenarioSpec& s,
                                             const std::vector<std::vector<double>>& pts,
                                             double tol_scale = 1.0);

}  // namespace oneill
