#include "oneill/oneill.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "oneill/errors.hpp"
#include "oneill/operators.hpp"

namespace oneill {

namespace {

std::string point_str(const std::vector<double>& p) {
    std::ostringstream os;
    os << "(";
    for (size_t i = 0; i < p.size(); ++i) {
        if (i) os << ", ";
        os << fmt_g(p[i]);
    }
    os << ")";
    return os.str();
}

Vec<double> random_pm1(std::mt19937_64& rng, int n) {
    Vec<double> v(n);
    for (auto& c : v) c = 2.0 * ((rng() >> 11) * 0x1.0p-53) - 1.0;
    return v;
}

// Random g-unit combination of a frame.
Vec<double> random_combo(std::mt19937_64& rng, const Mat<double>& g,
                         const std::vector<Vec<double>>& frame) {
    int n = static_cast<int>(frame.front().size());
    Vec<double> v(n, 0.0);
    Vec<double> c = random_pm1(rng, static_cast<int>(frame.size()));
    for (size_t i = 0; i < frame.size(); ++i) v = vec_add(v, vec_scale(c[i], frame[i]));
    double nv = norm(g, v);
    return nv > 1e-12 ? vec_scale(1.0 / nv, v) : frame.front();
}

CheckReport not_applicable(std::string name, std::string reason) {
    CheckReport r;
    r.check = std::move(name);
    r.status = Status::NotApplicable;
    r.details.push_back(std::move(reason));
    return r;
}

bool is_riemannian_submersion(const ScenarioSpec& s,
                              const std::vector<std::vector<double>>& pts) {
    return check_riemannian_submersion(s, pts).status == Status::Pass;
}

// First jet of the field x -> T_{YZ}(x) at p: one nested sweep gives the
// value and all coordinate derivatives, so directional derivatives in any
// number of directions come for free afterwards.
struct TFieldJet {
    Vec<double> value;
    Mat<double> grad;  // grad(k, i) = d_i of component k
};

TFieldJet t_field_jet(const ScenarioSpec& s, const std::vector<double>& p,
                      const SplitExtension& ye, const SplitExtension& ze) {
    TTensorField<SplitExtension, SplitExtension> tf{&s, ye, ze};
    int n = s.total.dim;
    Vec<Jet2<double>> w = tf(seed_coords<Jet2<double>>(p));
    TFieldJet jet{Vec<double>(n), Mat<double>(n, n)};
    for (int k = 0; k < n; ++k) {
        jet.value[k] = w[k].val;
        for (int i = 0; i < n; ++i) jet.grad(k, i) = w[k].g_or0(i);
    }
    return jet;
}

Vec<double> nabla1_of(const Christoffel<double>& c, const TFieldJet& jet, const Vec<double>& x) {
    int n = c.n;
    Vec<double> out(n, 0.0);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i) {
            out[k] += x[i] * jet.grad(k, i);
            for (int j = 0; j < n; ++j) out[k] += c.at(k, i, j) * x[i] * jet.value[j];
        }
    return out;
}

}  // namespace

Vec<double> T_at(const ScenarioSpec& s, const std::vector<double>& p, const Vec<double>& e,
                 const Vec<double>& f) {
    metric_at_checked(s.total, p);
    require_full_rank(map_jacobian(s, p), p);
    TTensorField<ConstField, ConstField> t{&s, ConstField{e}, ConstField{f}};
    return t(p);
}

Vec<double> A_at(const ScenarioSpec& s, const std::vector<double>& p, const Vec<double>& e,
                 const Vec<double>& f) {
    metric_at_checked(s.total, p);
    require_full_rank(map_jacobian(s, p), p);
    ATensorField<ConstField, ConstField> a{&s, ConstField{e}, ConstField{f}};
    return a(p);
}

Vec<double> nabla_T_at(const ScenarioSpec& s, const std::vector<double>& p, const Vec<double>& x,
                       const Vec<double>& y, const Vec<double>& z) {
    SplitExtension yext = split_extension(s, p, y);
    SplitExtension zext = split_extension(s, p, z);
    ConstField dir{x};
    Vec<double> d_t = nabla1_of(christoffel_at<double>(s.total, p), t_field_jet(s, p, yext, zext), x);
    Vec<double> cy = covariant_derivative_at<double>(s.total, dir, yext, p);
    Vec<double> cz = covariant_derivative_at<double>(s.total, dir, zext, p);
    return vec_sub(vec_sub(d_t, T_at(s, p, cy, z)), T_at(s, p, y, cz));
}

CurvatureRelationTerms curvature_relation_terms(const ScenarioSpec& s,
                                                const std::vector<double>& p, const Vec<double>& x1,
                                                const Vec<double>& x2, const Vec<double>& x3,
                                                const Vec<double>& z) {
    Mat<double> g = metric_at_checked(s.total, p);
    CurvatureRelationTerms t;
    t.lhs = dot(g, riemann_at(s.total, p, x1, x2, x3), z);
    double a = dot(g, nabla_T_at(s, p, x1, x2, x3), z);
    double b = dot(g, nabla_T_at(s, p, x2, x1, x3), z);
    t.rhs = a - b;
    t.residual = std::abs(t.lhs - t.rhs);
    t.residual_flipped = std::abs(t.lhs + t.rhs);
    return t;
}

double curvature_relation_residual(const ScenarioSpec& s, const std::vector<double>& p,
                                   const Vec<double>& x1, const Vec<double>& x2,
                                   const Vec<double>& x3, const Vec<double>& z) {
    return curvature_relation_terms(s, p, x1, x2, x3, z).residual;
}

FiberGeometryReport fiber_geometry(const ScenarioSpec& s,
                                   const std::vector<std::vector<double>>& pts) {
    FiberGeometryReport rep;
    for (size_t kp = 0; kp < pts.size(); ++kp) {
        const auto& p = pts[kp];
        Mat<double> g = metric_at_checked(s.total, p);
        TangentSplit split = base_split_at(s, p);
        int k = static_cast<int>(split.vertical.size());
        int n = s.total.dim;

        std::vector<std::vector<Vec<double>>> t(k, std::vector<Vec<double>>(k));
        Vec<double> h(n, 0.0);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) {
                t[i][j] = T_at(s, p, split.vertical[i], split.vertical[j]);
                rep.max_T_norm = std::max(rep.max_T_norm, norm(g, t[i][j]));
                if (i == j) h = vec_add(h, t[i][j]);
            }
        h = vec_scale(1.0 / k, h);

        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) {
                Vec<double> d = i == j ? vec_sub(t[i][j], h) : t[i][j];
                rep.umbilicity_defect = std::max(rep.umbilicity_defect, norm(g, d));
            }

        Mat<double> pv = vertical_projector_checked(s, p);
        rep.max_H_norm = std::max(rep.max_H_norm, norm(g, h));
        rep.H_vertical_leak = std::max(rep.H_vertical_leak, norm(g, pv * h));
        PointOperators<double> ops = point_operators_at<double>(s, p);
        rep.H_in_jd2_defect = std::max(rep.H_in_jd2_defect, norm(g, vec_sub(h, ops.jd2 * h)));
        if (kp == 0) rep.H = h;
    }
    return rep;
}

CheckReport check_oneill_identities(const ScenarioSpec& s,
                                    const std::vector<std::vector<double>>& pts,
                                    double tol_scale) {
    ResidualFold fold{tol_scale};
    bool is_sub = is_riemannian_submersion(s, pts);
    std::mt19937_64 rng(s.seed ^ 0x544e534f52ull);

    double r_sym = 0, r_skew = 0, r_rev = 0, r_slot = 0, r_ext = 0, r_alt = 0, r_br = 0;

    for (const auto& p : pts) {
        Mat<double> g = metric_at_checked(s.total, p);
        TangentSplit split = base_split_at(s, p);
        Mat<double> pv = vertical_projector_checked(s, p);
        Mat<double> ph = Mat<double>::identity(s.total.dim) - pv;
        const auto& vs = split.vertical;
        const auto& hs = split.horizontal;

        for (size_t i = 0; i < vs.size(); ++i)
            for (size_t j = i; j < vs.size(); ++j) {
                Vec<double> tij = T_at(s, p, vs[i], vs[j]);
                Vec<double> tji = T_at(s, p, vs[j], vs[i]);
                r_sym = std::max(r_sym, norm(g, vec_sub(tij, tji)));
                r_rev = std::max(r_rev, norm(g, pv * tij));
            }
        for (const auto& v : vs)
            for (const auto& h : hs) {
                r_rev = std::max(r_rev, norm(g, ph * T_at(s, p, v, h)));
                r_rev = std::max(r_rev, norm(g, pv * A_at(s, p, h, v)));
            }
        for (size_t a = 0; a < hs.size(); ++a)
            for (size_t b = a; b < hs.size(); ++b) {
                Vec<double> aab = A_at(s, p, hs[a], hs[b]);
                r_rev = std::max(r_rev, norm(g, ph * aab));
                if (is_sub) {
                    Vec<double> aba = A_at(s, p, hs[b], hs[a]);
                    r_alt = std::max(r_alt, norm(g, vec_add(aab, aba)));
                    Vec<double> br = lie_bracket_at<double>(HorizontalExtension{&s, hs[a]},
                                                            HorizontalExtension{&s, hs[b]}, p);
                    r_br = std::max(r_br, norm(g, vec_sub(aab, vec_scale(0.5, pv * br))));
                }
            }

        // Wrong first slot: T ignores horizontal directions, A vertical ones.
        Vec<double> mixed = random_pm1(rng, s.total.dim);
        r_slot = std::max(r_slot, norm(g, T_at(s, p, hs.front(), mixed)));
        r_slot = std::max(r_slot, norm(g, A_at(s, p, vs.front(), mixed)));

        // Skew-adjointness against the metric, on random unit vectors.
        Vec<double> e = random_combo(rng, g, vs);
        Vec<double> eh = random_combo(rng, g, hs);
        Vec<double> f = random_pm1(rng, s.total.dim);
        Vec<double> h2 = random_pm1(rng, s.total.dim);
        r_skew = std::max(r_skew, std::abs(dot(g, T_at(s, p, e, f), h2) +
                                           dot(g, f, T_at(s, p, e, h2))));
        r_skew = std::max(r_skew, std::abs(dot(g, A_at(s, p, eh, f), h2) +
                                           dot(g, f, A_at(s, p, eh, h2))));

        // Extension independence: modulated inputs agree with constant ones.
        Modulated<ConstField> me = modulated(ConstField{e}, p);
        Modulated<ConstField> mf = modulated(ConstField{f}, p);
        TTensorField<Modulated<ConstField>, Modulated<ConstField>> tmod{&s, me, mf};
        r_ext = std::max(r_ext, norm(g, vec_sub(tmod(p), T_at(s, p, e, f))));
        Modulated<ConstField> meh = modulated(ConstField{eh}, p);
        ATensorField<Modulated<ConstField>, Modulated<ConstField>> amod{&s, meh, mf};
        r_ext = std::max(r_ext, norm(g, vec_sub(amod(p), A_at(s, p, eh, f))));
    }

    fold.add(r_sym, 1e-9);
    fold.add(r_skew, 1e-9);
    fold.add(r_rev, 1e-9);
    fold.add(r_slot, 1e-9);
    fold.add(r_ext, 1e-8);
    std::vector<std::string> details = {
        "max symmetry residual on vertical pairs = " + fmt_g(r_sym),
        "max skew-adjointness residual = " + fmt_g(r_skew),
        "max distribution-reversal residual = " + fmt_g(r_rev),
        "max wrong-slot residual = " + fmt_g(r_slot),
        "max extension-independence residual = " + fmt_g(r_ext),
    };
    if (is_sub) {
        fold.add(r_alt, 1e-9);
        fold.add(r_br, 1e-9);
        details.push_back("max alternation residual on horizontal pairs = " + fmt_g(r_alt));
        details.push_back("max half-bracket residual = " + fmt_g(r_br));
    } else {
        details.push_back(
            "alternation and half-bracket clauses skipped: the map is not a Riemannian "
            "submersion on this sample set");
    }
    return finish_report("oneill_identities", fold, std::move(details));
}

CheckReport check_fundamental_equations(const ScenarioSpec& s,
                                        const std::vector<std::vector<double>>& pts,
                                        double tol_scale) {
    if (!is_riemannian_submersion(s, pts))
        return not_applicable("fundamental_equations",
                              "the decomposition equations are stated for Riemannian "
                              "submersions; this map is not one on this sample set");

    ResidualFold fold{tol_scale};
    double r_vv = 0, r_vh = 0, r_hv = 0, r_hh = 0;
    for (const auto& p : pts) {
        Mat<double> g = metric_at_checked(s.total, p);
        TangentSplit split = base_split_at(s, p);
        Mat<double> pv = vertical_projector_checked(s, p);
        Mat<double> ph = Mat<double>::identity(s.total.dim) - pv;
        const auto& vs = split.vertical;
        const auto& hs = split.horizontal;

        for (const auto& v : vs) {
            ConstField dir{v};
            for (const auto& w : vs) {
                Vec<double> d =
                    covariant_derivative_at<double>(s.total, dir, VerticalExtension{&s, w}, p);
                r_vv = std::max(r_vv, norm(g, vec_sub(ph * d, T_at(s, p, v, w))));
            }
            for (const auto& x : hs) {
                Vec<double> d =
                    covariant_derivative_at<double>(s.total, dir, HorizontalExtension{&s, x}, p);
                r_vh = std::max(r_vh, norm(g, vec_sub(pv * d, T_at(s, p, v, x))));
            }
        }
        for (const auto& x : hs) {
            ConstField dir{x};
            for (const auto& v : vs) {
                Vec<double> d =
                    covariant_derivative_at<double>(s.total, dir, VerticalExtension{&s, v}, p);
                r_hv = std::max(r_hv, norm(g, vec_sub(ph * d, A_at(s, p, x, v))));
            }
            for (const auto& y : hs) {
                Vec<double> d =
                    covariant_derivative_at<double>(s.total, dir, HorizontalExtension{&s, y}, p);
                r_hh = std::max(r_hh, norm(g, vec_sub(pv * d, A_at(s, p, x, y))));
            }
        }
    }
    fold.add(r_vv, 1e-9);
    fold.add(r_vh, 1e-9);
    fold.add(r_hv, 1e-9);
    fold.add(r_hh, 1e-9);
    return finish_report(
        "fundamental_equations", fold,
        {"max vertical-pair decomposition residual = " + fmt_g(r_vv),
         "max vertical-direction mixed residual = " + fmt_g(r_vh),
         "max horizontal-direction mixed residual = " + fmt_g(r_hv),
         "max horizontal-pair decomposition residual = " + fmt_g(r_hh)});
}

CheckReport check_fiber_geometry(const ScenarioSpec& s,
                                 const std::vector<std::vector<double>>& pts, double tol_scale) {
    FiberGeometryReport rep = fiber_geometry(s, pts);
    ResidualFold fold{tol_scale};
    fold.add(rep.H_vertical_leak, 1e-9);
    std::vector<std::string> details = {
        "max |T| over vertical frame pairs = " + fmt_g(rep.max_T_norm),
        "umbilicity defect = " + fmt_g(rep.umbilicity_defect),
        "max |H| = " + fmt_g(rep.max_H_norm),
        "mean curvature at " + point_str(pts.front()) + " = " + point_str(rep.H),
        "vertical leak of H = " + fmt_g(rep.H_vertical_leak),
        "deviation of H from the J-image of the anti-invariant vertical directions = " +
            fmt_g(rep.H_in_jd2_defect),
    };
    if (rep.max_T_norm < 1e-7 * tol_scale) {
        // Totally geodesic fibres force umbilicity and a vanishing mean
        // curvature; a violation here means T_at and the trace disagree.
        fold.add(rep.umbilicity_defect, 1e-7);
        fold.add(rep.max_H_norm, 1e-7);
        details.push_back("fibres are totally geodesic at this tolerance");
    } else if (rep.umbilicity_defect < 1e-7 * tol_scale) {
        details.push_back("fibres are umbilical at this tolerance");
    }
    return finish_report("fiber_geometry", fold, std::move(details));
}

CheckReport check_curvature_relation(const ScenarioSpec& s,
                                     const std::vector<std::vector<double>>& pts,
                                     double tol_scale) {
    if (!is_riemannian_submersion(s, pts))
        return not_applicable("curvature_relation",
                              "the curvature identity is stated for Riemannian submersions; "
                              "this map is not one on this sample set");

    ResidualFold fold{tol_scale};
    double r_adopted = 0, r_flipped = 0, max_pairing = 0;
    bool any_pair = false;

    for (const auto& p : pts) {
        TangentSplit split = base_split_at(s, p);
        const auto& vs = split.vertical;
        const auto& hs = split.horizontal;
        int k = static_cast<int>(vs.size());
        if (k < 2) continue;  // one-dimensional fibres carry no vertical pair
        any_pair = true;

        Mat<double> g = metric_at_checked(s.total, p);
        Riemann riem = riemann_tensor_at(s.total, p);
        Christoffel<double> c1 = christoffel_at<double>(s.total, p);

        // All derivatives (nabla_{v_i} T)_{v_j} v_l from k^2 nested sweeps:
        // one jet of the T field per argument pair serves every direction.
        std::vector<SplitExtension> vext;
        vext.reserve(vs.size());
        for (const auto& v : vs) vext.push_back(split_extension(s, p, v));

        std::vector<Vec<double>> cov_dir(static_cast<size_t>(k) * k);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j)
                cov_dir[static_cast<size_t>(i) * k + j] =
                    covariant_derivative_at<double>(s.total, ConstField{vs[i]}, vext[j], p);

        std::vector<Vec<double>> nabla(static_cast<size_t>(k) * k * k);
        for (int j = 0; j < k; ++j)
            for (int l = 0; l < k; ++l) {
                TFieldJet jet = t_field_jet(s, p, vext[j], vext[l]);
                for (int i = 0; i < k; ++i) {
                    Vec<double> d = nabla1_of(c1, jet, vs[i]);
                    d = vec_sub(d, T_at(s, p, cov_dir[static_cast<size_t>(i) * k + j], vs[l]));
                    d = vec_sub(d, T_at(s, p, vs[j], cov_dir[static_cast<size_t>(i) * k + l]));
                    nabla[(static_cast<size_t>(i) * k + j) * k + l] = std::move(d);
                }
            }

        for (int i = 0; i < k; ++i)
            for (int j = i + 1; j < k; ++j)
                for (int l = 0; l < k; ++l) {
                    Vec<double> rhs_vec =
                        vec_sub(nabla[(static_cast<size_t>(i) * k + j) * k + l],
                                nabla[(static_cast<size_t>(j) * k + i) * k + l]);
                    Vec<double> lhs_vec = riemann_apply(riem, vs[i], vs[j], vs[l]);
                    for (const auto& z : hs) {
                        double lhs = dot(g, lhs_vec, z);
                        double rhs = dot(g, rhs_vec, z);
                        r_adopted = std::max(r_adopted, std::abs(lhs - rhs));
                        r_flipped = std::max(r_flipped, std::abs(lhs + rhs));
                        max_pairing = std::max(max_pairing, std::abs(lhs));
                        fold.add(std::abs(lhs - rhs), 1e-6);
                    }
                }
    }

    std::vector<std::string> details = {
        "max residual, adopted orientation = " + fmt_g(r_adopted),
        "max residual, flipped orientation = " + fmt_g(r_flipped),
        "largest curvature pairing magnitude = " + fmt_g(max_pairing)};
    if (!any_pair)
        details.push_back("fibres are one-dimensional; the identity holds vacuously");
    return finish_report("curvature_relation", fold, std::move(details));
}

}  // namespace oneill
