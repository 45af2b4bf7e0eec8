#include "oneill/semiinv.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <string>
#include <utility>

#include "oneill/complexstruct.hpp"
#include "oneill/geometry.hpp"
#include "oneill/submersion.hpp"

namespace oneill {

namespace {

constexpr double kSpectrumGate = 1e-6;
constexpr double kRouteGate = 1e-6;

std::string point_str(const std::vector<double>& p) {
    std::string out = "(";
    for (size_t i = 0; i < p.size(); ++i) {
        if (i) out += ", ";
        out += fmt_g(p[i]);
    }
    return out + ")";
}

CheckReport not_applicable(std::string name, std::string reason) {
    CheckReport r;
    r.check = std::move(name);
    r.status = Status::NotApplicable;
    r.details.push_back(std::move(reason));
    return r;
}

const char* kNotSubmersion =
    "the statement presumes a Riemannian submersion; the map is not one on this sample set";
const char* kNotHermitian =
    "the statement presumes an almost Hermitian total space; (g, J) fails compatibility on "
    "this sample set";

std::string generic_reason(double gap) {
    return "the vertical space does not split J-invariantly on this sample set (spectrum "
           "distance from {0,1} = " +
           fmt_g(gap) + ")";
}

std::string kaehler_reason(double defect) {
    return "the statement is proved on Kaehler charts; the Kaehler defect reaches " +
           fmt_g(defect) + " on this sample set";
}

std::string umbilical_reason(double defect) {
    return "the fibres are not totally umbilical on this sample set (umbilicity defect = " +
           fmt_g(defect) + ")";
}

// Preconditions shared by the theorem checkers. Classification is attempted
// only once the map and the complex structure qualify.
struct Gates {
    bool sub = false;
    bool herm = false;
    double kaehler_defect = 0.0;
    bool kaehler = false;
    std::optional<Classification> cls;
};

Gates gates_for(const ScenarioSpec& s, const std::vector<std::vector<double>>& pts,
                double tol_scale) {
    Gates g;
    g.sub = check_riemannian_submersion(s, pts, tol_scale).status == Status::Pass;
    g.herm = validate_almost_hermitian(s.total, pts, s.seed, tol_scale).status == Status::Pass;
    g.kaehler_defect = max_kaehler_defect(s.total, pts);
    g.kaehler = g.kaehler_defect < 1e-7 * tol_scale;
    if (g.sub && g.herm) g.cls = classify(s, pts);
    return g;
}

std::optional<CheckReport> gate_block(const std::string& name, const Gates& g,
                                      bool need_kaehler = true) {
    if (!g.sub) return not_applicable(name, kNotSubmersion);
    if (!g.herm) return not_applicable(name, kNotHermitian);
    if (g.cls->kind == Kind::Generic)
        return not_applicable(name, generic_reason(g.cls->worst_spectrum_gap));
    if (need_kaehler && !g.kaehler) return not_applicable(name, kaehler_reason(g.kaehler_defect));
    return std::nullopt;
}

double max_abs(const Mat<double>& m) {
    double r = 0.0;
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) r = std::max(r, std::abs(m(i, j)));
    return r;
}

Vec<double> random_pm1(std::mt19937_64& rng, int n) {
    Vec<double> v(n);
    for (auto& x : v) x = (rng() & 1) ? 1.0 : -1.0;
    return v;
}

// Operator chains as smooth fields: x -> M(x) * inner(x) with M one of the
// splitting operators. phi/omega/d1/d2 absorb a vertical projection of the
// inner field and b/c a horizontal one, so a constant inner field behaves
// like its projected extension.
enum class Chain { Phi, Omega, B, C, D1, D2 };

template <class Inner>
struct ChainOf {
    const ScenarioSpec* s = nullptr;
    Chain which = Chain::Phi;
    Inner inner;

    template <class S>
    Vec<S> operator()(const std::vector<S>& x) const {
        PointOperators<S> ops = point_operators_at<S>(*s, x);
        Vec<S> v = inner(x);
        switch (which) {
            case Chain::Phi: return ops.phi * v;
            case Chain::Omega: return ops.omega * v;
            case Chain::B: return ops.b * v;
            case Chain::C: return ops.c * v;
            case Chain::D1: return ops.d1 * v;
            case Chain::D2: return ops.d2 * v;
        }
        return ops.phi * v;
    }
};

using ChainField = ChainOf<ConstField>;
using BasicChainField = ChainOf<BasicLift<ConstField>>;

ChainField chain(const ScenarioSpec& s, Chain which, const Vec<double>& v) {
    return {&s, which, ConstField{v}};
}

// Chain over the basic extension of a horizontal vector at p. The clause
// derivatives on mixed vertical/horizontal pairs are extension-dependent;
// the basic extension is the one that turns their membership defects into
// the mixed second fundamental form of the map.
BasicChainField basic_chain(const ScenarioSpec& s, Chain which, const std::vector<double>& p,
                            const Vec<double>& z) {
    return {&s, which, BasicLift<ConstField>{&s, ConstField{pushforward_at(s, p, z)}}};
}

double g2_norm(const Mat<double>& gq, const Vec<double>& w) { return std::sqrt(dot(gq, w, w)); }

// Thm-3.4/Prop-3.6 clause pair for an ordered vertical pair (x, y):
//   a = vhat-nabla_x(phi Y) + T_x(omega y)   (should sit in d1)
//   b = H-nabla_x(omega Y) + T_x(phi y)      (should sit in jd2)
struct VerticalClauses {
    Vec<double> a, b;
};

VerticalClauses vertical_pair_clauses(const ScenarioSpec& s, const std::vector<double>& p,
                                      const PointOperators<double>& ops, const Vec<double>& x,
                                      const Vec<double>& y) {
    ConstField dir{x};
    Vec<double> d_phi =
        covariant_derivative_at<double>(s.total, dir, chain(s, Chain::Phi, y), p);
    Vec<double> d_omega =
        covariant_derivative_at<double>(s.total, dir, chain(s, Chain::Omega, y), p);
    return {vec_add(ops.pv * d_phi, T_at(s, p, x, ops.omega * y)),
            vec_add(ops.ph * d_omega, T_at(s, p, x, ops.phi * y))};
}

// Prop-3.5 clause defects for an ordered horizontal pair, plus the direct
// route: the vertical part of the horizontal covariant derivative (the
// integrability/geodesy obstruction of the horizontal distribution).
struct HfScan {
    double cond = 0.0;
    double direct = 0.0;
    double gap = 0.0;
    std::string worst;
};

HfScan hf_scan(const ScenarioSpec& s, const std::vector<std::vector<double>>& pts,
               const Classification& cls) {
    HfScan out;
    for (size_t ip = 0; ip < pts.size(); ++ip) {
        const auto& p = pts[ip];
        const TangentSplit& sp = cls.splits[ip];
        Mat<double> g = metric_at_checked(s.total, p);
        PointOperators<double> ops = point_operators_at<double>(s, p);
        for (size_t i = 0; i < sp.horizontal.size(); ++i)
            for (size_t j = i + 1; j < sp.horizontal.size(); ++j) {
                ConstField dir{sp.horizontal[i]};
                const Vec<double>& zj = sp.horizontal[j];
                Vec<double> db =
                    covariant_derivative_at<double>(s.total, dir, chain(s, Chain::B, zj), p);
                Vec<double> dc =
                    covariant_derivative_at<double>(s.total, dir, chain(s, Chain::C, zj), p);
                Vec<double> sum = vec_add(db, dc);
                double defect1 = norm(g, ops.jd2 * (ops.ph * sum));
                double defect2 = norm(g, ops.d1 * (ops.pv * sum));
                double cond = std::hypot(defect1, defect2);
                Vec<double> dh = covariant_derivative_at<double>(
                    s.total, dir, HorizontalExtension{&s, zj}, p);
                double direct = norm(g, ops.pv * dh);
                if (direct > out.direct) out.worst = point_str(p);
                out.cond = std::max(out.cond, cond);
                out.direct = std::max(out.direct, direct);
                out.gap = std::max(out.gap, std::abs(cond - direct));
            }
    }
    return out;
}

// Fibre-geodesy scan, three routes per ordered vertical pair: clause
// memberships, the pairing of the map's second fundamental form against the
// pushed frame (with the T-correction on the mu directions), and |T| itself.
struct VfScan {
    double clause = 0.0;
    double mapform = 0.0;
    double direct = 0.0;
    double gap = 0.0;
    std::string worst;
};

VfScan vf_scan(const ScenarioSpec& s, const std::vector<std::vector<double>>& pts,
               const Classification& cls) {
    VfScan out;
    for (size_t ip = 0; ip < pts.size(); ++ip) {
        const auto& p = pts[ip];
        const TangentSplit& sp = cls.splits[ip];
        Mat<double> g = metric_at_checked(s.total, p);
        Mat<double> gq = metric_at_checked(s.base, map_value(s, p));
        Mat<double> jac = map_jacobian(s, p);
        PointOperators<double> ops = point_operators_at<double>(s, p);

        std::vector<Vec<double>> push_jd2, push_mu;
        for (const auto& z : sp.d2) push_jd2.push_back(jac * (ops.j * z));
        for (const auto& w : sp.mu) push_mu.push_back(jac * w);

        for (const auto& x : sp.vertical)
            for (const auto& y : sp.vertical) {
                VerticalClauses cl = vertical_pair_clauses(s, p, ops, x, y);
                double pa = std::hypot(norm(g, ops.d2 * cl.a), norm(g, ops.mu * cl.b));

                Vec<double> sff1 =
                    second_fundamental_form_at(s, p, ConstField{x}, ConstField{y});
                double c1 = 0.0;
                for (size_t k = 0; k < sp.d2.size(); ++k) {
                    double t = dot(gq, sff1, push_jd2[k]);
                    c1 += t * t;
                }
                Vec<double> phi_y = ops.phi * y;
                Vec<double> sff2 = second_fundamental_form_at(s, p, ConstField{x},
                                                              ConstField{ops.omega * y});
                double c2 = 0.0;
                for (size_t k = 0; k < sp.mu.size(); ++k) {
                    double t = dot(gq, sff2, push_mu[k]) + dot(g, T_at(s, p, x, sp.mu[k]), phi_y);
                    c2 += t * t;
                }
                double pb = std::sqrt(c1 + c2);
                double pc = norm(g, T_at(s, p, x, y));

                if (pc > out.direct) out.worst = point_str(p);
                out.clause = std::max(out.clause, pa);
                out.mapform = std::max(out.mapform, pb);
                out.direct = std::max(out.direct, pc);
                out.gap = std::max({out.gap, std::abs(pa - pc), std::abs(pb - pc)});
            }
    }
    return out;
}

std::string kind_dims_detail(const Classification& cls) {
    return std::string("kind = ") + to_string(cls.kind) + ", dim d1 = " +
           std::to_string(cls.dim_d1) + ", dim d2 = " + std::to_string(cls.dim_d2) +
           ", dim mu = " + std::to_string(cls.dim_mu);
}

void flag_route_disagreement(CheckReport& rep, double gap, double tol_scale) {
    if (gap >= kRouteGate * tol_scale) {
        rep.status = Status::TheoremViolation;
        rep.details.push_back(
            "ROUTE DISAGREEMENT: independent evaluations of the same obstruction differ by " +
            fmt_g(gap) + "; the routes must agree whether the property holds or not");
    }
}

}  // namespace

const char* to_string(Kind k) {
    switch (k) {
        case Kind::Invariant: return "invariant";
        case Kind::AntiInvariant: return "anti_invariant";
        case Kind::SemiInvariant: return "semi_invariant";
        case Kind::Generic: return "generic";
    }
    return "generic";
}

TangentSplit split_vertical_at(const ScenarioSpec& s, const std::vector<double>& p) {
    TangentSplit split = base_split_at(s, p);
    Mat<double> g = metric_at_checked(s.total, p);
    PointOperators<double> ops = point_operators_at<double>(s, p);
    int n = s.total.dim;
    int kv = static_cast<int>(split.vertical.size());

    // Matrix of -phi^2 on the vertical orthonormal frame. Self-adjoint, so
    // its eigenframe stays g-orthonormal after mapping back to coordinates.
    Mat<double> a(kv, kv);
    std::vector<Vec<double>> phiv(kv);
    for (int i = 0; i < kv; ++i) phiv[i] = ops.phi * split.vertical[i];
    for (int i = 0; i < kv; ++i)
        for (int j = i; j < kv; ++j) {
            double v = dot(g, phiv[i], phiv[j]);
            a(i, j) = v;
            a(j, i) = v;
        }
    auto [vals, vecs] = sym_eigen(a);
    split.phi_sq_spectrum = vals;

    for (int k = 0; k < kv; ++k) {
        Vec<double> w(n, 0.0);
        for (int i = 0; i < kv; ++i) w = vec_add(w, vec_scale(vecs(i, k), split.vertical[i]));
        bool invariant_side = std::abs(vals[k] - 1.0) < std::abs(vals[k]);
        (invariant_side ? split.d1 : split.d2).push_back(std::move(w));
    }

    std::vector<Vec<double>> jd2_cand;
    for (const auto& w : split.d2) jd2_cand.push_back(ops.ph * (ops.j * w));
    split.jd2 = gram_schmidt(g, jd2_cand);

    std::vector<Vec<double>> mu_cand = split.jd2;
    for (const auto& h : split.horizontal) mu_cand.push_back(h);
    std::vector<Vec<double>> full = gram_schmidt(g, mu_cand);
    split.mu.assign(full.begin() + static_cast<long>(split.jd2.size()), full.end());
    return split;
}

Classification classify(const ScenarioSpec& s, const std::vector<std::vector<double>>& pts) {
    if (pts.empty()) fail(Error::Code::Internal, "classification needs at least one sample point");
    Classification out;
    for (const auto& p : pts) {
        TangentSplit sp = split_vertical_at(s, p);
        for (double lam : sp.phi_sq_spectrum)
            out.worst_spectrum_gap =
                std::max(out.worst_spectrum_gap, std::min(std::abs(lam), std::abs(lam - 1.0)));
        out.splits.push_back(std::move(sp));
    }
    const TangentSplit& first = out.splits.front();
    out.dim_d1 = static_cast<int>(first.d1.size());
    out.dim_d2 = static_cast<int>(first.d2.size());
    out.dim_mu = static_cast<int>(first.mu.size());
    if (out.worst_spectrum_gap > kSpectrumGate) {
        out.kind = Kind::Generic;
        return out;
    }
    for (const auto& sp : out.splits)
        if (static_cast<int>(sp.d1.size()) != out.dim_d1 ||
            static_cast<int>(sp.d2.size()) != out.dim_d2)
            fail(Error::Code::RankInstability,
                 "vertical splitting changes rank across samples: dim d1 = " +
                     std::to_string(out.dim_d1) + " at " + point_str(first.at) + " but " +
                     std::to_string(sp.d1.size()) + " at " + point_str(sp.at));
    out.kind = out.dim_d2 == 0   ? Kind::Invariant
               : out.dim_d1 == 0 ? Kind::AntiInvariant
                                 : Kind::SemiInvariant;
    return out;
}

Vec<double> nabla_phi_at(const ScenarioSpec& s, const std::vector<double>& p, const Vec<double>& v,
                         const Vec<double>& w) {
    PointOperators<double> ops = point_operators_checked(s, p);
    ConstField dir{v};
    Vec<double> d_phi = covariant_derivative_at<double>(s.total, dir, chain(s, Chain::Phi, w), p);
    Vec<double> d_w =
        covariant_derivative_at<double>(s.total, dir, VerticalExtension{&s, w}, p);
    return vec_sub(ops.pv * d_phi, ops.phi * d_w);
}

Vec<double> nabla_omega_at(const ScenarioSpec& s, const std::vector<double>& p,
                           const Vec<double>& v, const Vec<double>& w) {
    PointOperators<double> ops = point_operators_checked(s, p);
    ConstField dir{v};
    Vec<double> d_omega =
        covariant_derivative_at<double>(s.total, dir, chain(s, Chain::Omega, w), p);
    Vec<double> d_w =
        covariant_derivative_at<double>(s.total, dir, VerticalExtension{&s, w}, p);
    return vec_sub(ops.ph * d_omega, ops.omega * d_w);
}

CheckReport check_classification(const ScenarioSpec& s,
                                 const std::vector<std::vector<double>>& pts, double tol_scale) {
    Gates ga = gates_for(s, pts, tol_scale);
    if (!ga.sub) return not_applicable("classification", kNotSubmersion);
    if (!ga.herm) return not_applicable("classification", kNotHermitian);
    const Classification& cls = *ga.cls;

    ResidualFold fold{tol_scale};
    double r_onb = 0, r_range = 0, r_inv = 0, r_anti = 0;
    for (size_t ip = 0; ip < pts.size(); ++ip) {
        const auto& p = pts[ip];
        const TangentSplit& sp = cls.splits[ip];
        Mat<double> g = metric_at_checked(s.total, p);
        PointOperators<double> ops = point_operators_at<double>(s, p);

        std::vector<Vec<double>> frame = sp.d1;
        frame.insert(frame.end(), sp.d2.begin(), sp.d2.end());
        frame.insert(frame.end(), sp.jd2.begin(), sp.jd2.end());
        frame.insert(frame.end(), sp.mu.begin(), sp.mu.end());
        for (size_t i = 0; i < frame.size(); ++i)
            for (size_t j = i; j < frame.size(); ++j)
                r_onb = std::max(
                    r_onb, std::abs(dot(g, frame[i], frame[j]) - (i == j ? 1.0 : 0.0)));

        for (double lam : sp.phi_sq_spectrum)
            r_range = std::max({r_range, -lam, lam - 1.0});

        if (cls.kind != Kind::Generic) {
            for (const auto& u : sp.d1) {
                Vec<double> ju = ops.j * u;
                r_inv = std::max(r_inv, norm(g, vec_sub(ju, ops.d1 * ju)));
            }
            for (const auto& w : sp.d2) r_anti = std::max(r_anti, norm(g, ops.pv * (ops.j * w)));
        }
    }
    r_range = std::max(r_range, 0.0);

    fold.add(r_onb, 1e-9);
    fold.add(r_range, 1e-9);
    std::vector<std::string> details = {
        kind_dims_detail(cls),
        "worst spectrum distance from {0,1} = " + fmt_g(cls.worst_spectrum_gap),
        "spectrum of -phi^2 at " + point_str(pts.front()) + " = " +
            point_str(cls.splits.front().phi_sq_spectrum),
        "max frame orthonormality residual = " + fmt_g(r_onb),
        "max spectrum range overshoot = " + fmt_g(r_range),
    };
    if (cls.kind != Kind::Generic) {
        fold.add(r_inv, 1e-8);
        fold.add(r_anti, 1e-8);
        details.push_back("max J-closure residual of the invariant part = " + fmt_g(r_inv));
        details.push_back("max vertical leak of J(anti-invariant part) = " + fmt_g(r_anti));
    } else {
        details.push_back(
            "the spectrum departs {0,1}; no invariant/anti-invariant splitting is claimed");
    }
    return finish_report("classification", fold, std::move(details));
}

CheckReport check_operator_identities(const ScenarioSpec& s,
                                      const std::vector<std::vector<double>>& pts,
                                      double tol_scale) {
    ResidualFold fold{tol_scale};
    double kd = max_kaehler_defect(s.total, pts);
    bool kaehler = kd < 1e-7 * tol_scale;
    std::mt19937_64 rng(s.seed ^ 0x73656d69696e76ull);

    double r_alg = 0, r_skew = 0, r_phi = 0, r_omega = 0;
    for (const auto& p : pts) {
        Mat<double> g = metric_at_checked(s.total, p);
        PointOperators<double> ops = point_operators_checked(s, p);

        // The four block consequences of J^2 = -I through the splitting:
        // phi^2 + B omega = -Id_V, omega phi + C omega = 0,
        // phi B + B C = 0, omega B + C^2 = -Id_H.
        r_alg = std::max(r_alg, max_abs(ops.phi * ops.phi + ops.b * ops.omega + ops.pv));
        r_alg = std::max(r_alg, max_abs(ops.omega * ops.phi + ops.c * ops.omega));
        r_alg = std::max(r_alg, max_abs(ops.phi * ops.b + ops.b * ops.c));
        r_alg = std::max(r_alg, max_abs(ops.omega * ops.b + ops.c * ops.c + ops.ph));

        for (int k = 0; k < 4; ++k) {
            Vec<double> x = random_pm1(rng, s.total.dim);
            Vec<double> y = random_pm1(rng, s.total.dim);
            r_skew = std::max(r_skew,
                              std::abs(dot(g, ops.j * x, y) + dot(g, x, ops.j * y)));
        }

        if (kaehler) {
            TangentSplit sp = base_split_at(s, p);
            for (const auto& v : sp.vertical)
                for (const auto& w : sp.vertical) {
                    Vec<double> tvw = T_at(s, p, v, w);
                    Vec<double> rhs_phi = vec_sub(ops.b * tvw, T_at(s, p, v, ops.omega * w));
                    r_phi = std::max(
                        r_phi, norm(g, vec_sub(nabla_phi_at(s, p, v, w), rhs_phi)));
                    Vec<double> rhs_omega = vec_sub(ops.c * tvw, T_at(s, p, v, ops.phi * w));
                    r_omega = std::max(
                        r_omega, norm(g, vec_sub(nabla_omega_at(s, p, v, w), rhs_omega)));
                }
        }
    }

    fold.add(r_alg, 1e-10);
    fold.add(r_skew, 1e-9);
    std::vector<std::string> details = {
        "max operator block identity residual = " + fmt_g(r_alg),
        "max J skew-compatibility residual = " + fmt_g(r_skew),
    };
    if (kaehler) {
        fold.add(r_phi, 1e-7);
        fold.add(r_omega, 1e-7);
        details.push_back("max nabla-phi transport residual = " + fmt_g(r_phi));
        details.push_back("max nabla-omega transport residual = " + fmt_g(r_omega));
    } else {
        details.push_back("covariant transport clauses skipped: the Kaehler defect reaches " +
                          fmt_g(kd) + " on this sample set");
    }
    return finish_report("operator_identities", fold, std::move(details));
}

CheckReport check_d2_integrability(const ScenarioSpec& s,
                                   const std::vector<std::vector<double>>& pts,
                                   double tol_scale) {
    Gates ga = gates_for(s, pts, tol_scale);
    if (auto na = gate_block("d2_integrability", ga)) return *na;
    const Classification& cls = *ga.cls;

    if (cls.dim_d2 <= 1) {
        CheckReport r;
        r.check = "d2_integrability";
        r.details = {kind_dims_detail(cls),
                     "the anti-invariant distribution has dimension " +
                         std::to_string(cls.dim_d2) + "; it is integrable for dimension reasons"};
        return r;
    }

    ResidualFold fold{tol_scale};
    double r_leak = 0;
    std::string worst;
    for (size_t ip = 0; ip < pts.size(); ++ip) {
        const auto& p = pts[ip];
        const TangentSplit& sp = cls.splits[ip];
        Mat<double> g = metric_at_checked(s.total, p);
        PointOperators<double> ops = point_operators_at<double>(s, p);
        for (size_t i = 0; i < sp.d2.size(); ++i)
            for (size_t j = i + 1; j < sp.d2.size(); ++j) {
                Vec<double> br = lie_bracket_at<double>(chain(s, Chain::D2, sp.d2[i]),
                                                        chain(s, Chain::D2, sp.d2[j]), p);
                double leak = norm(g, vec_sub(br, ops.d2 * br));
                if (leak > r_leak) worst = point_str(p);
                r_leak = std::max(r_leak, leak);
            }
    }
    fold.add(r_leak, 1e-7);
    CheckReport rep = finish_report(
        "d2_integrability", fold,
        {kind_dims_detail(cls),
         "max bracket leak outside the anti-invariant distribution = " + fmt_g(r_leak)});
    if (rep.status == Status::Fail) {
        rep.status = Status::TheoremViolation;
        rep.details.push_back("the anti-invariant distribution must always be integrable; a "
                              "leak at " + worst + " contradicts the theory");
    }
    return rep;
}

CheckReport check_d1_integrability(const ScenarioSpec& s,
                                   const std::vector<std::vector<double>>& pts,
                                   double tol_scale) {
    Gates ga = gates_for(s, pts, tol_scale);
    if (auto na = gate_block("d1_integrability", ga)) return *na;
    const Classification& cls = *ga.cls;
    if (cls.dim_d1 == 0)
        return not_applicable(
            "d1_integrability",
            "the invariant distribution is trivial on this sample set; there is nothing to "
            "integrate");
    if (cls.dim_d2 == 0)
        return not_applicable(
            "d1_integrability",
            "the anti-invariant distribution is trivial on this sample set; the whole fibre "
            "is invariant and integrability is automatic");

    ResidualFold fold{tol_scale};
    double r_bracket = 0, r_pair = 0, gap = 0;
    for (size_t ip = 0; ip < pts.size(); ++ip) {
        const auto& p = pts[ip];
        const TangentSplit& sp = cls.splits[ip];
        Mat<double> g = metric_at_checked(s.total, p);
        PointOperators<double> ops = point_operators_at<double>(s, p);
        for (size_t i = 0; i < sp.d1.size(); ++i)
            for (size_t j = i + 1; j < sp.d1.size(); ++j) {
                Vec<double> br = lie_bracket_at<double>(chain(s, Chain::D1, sp.d1[i]),
                                                        chain(s, Chain::D1, sp.d1[j]), p);
                Vec<double> tj = T_at(s, p, sp.d1[i], ops.j * sp.d1[j]);
                Vec<double> ti = T_at(s, p, sp.d1[j], ops.j * sp.d1[i]);
                Vec<double> tdiff = vec_sub(tj, ti);
                for (const auto& z : sp.d2) {
                    double lhs = dot(g, br, z);
                    double rhs = dot(g, tdiff, ops.j * z);
                    r_bracket = std::max(r_bracket, std::abs(lhs));
                    r_pair = std::max(r_pair, std::abs(rhs));
                    gap = std::max(gap, std::abs(lhs - rhs));
                }
            }
    }
    fold.add(r_bracket, 1e-7);
    fold.add(r_pair, 1e-7);
    CheckReport rep = finish_report(
        "d1_integrability", fold,
        {kind_dims_detail(cls),
         "max fibre-bracket component along the anti-invariant directions = " + fmt_g(r_bracket),
         "max T-pairing criterion residual = " + fmt_g(r_pair),
         "route gap = " + fmt_g(gap)});
    flag_route_disagreement(rep, gap, tol_scale);
    return rep;
}

CheckReport check_totally_geodesic_map(const ScenarioSpec& s,
                                       const std::vector<std::vector<double>>& pts,
                                       double tol_scale) {
    Gates ga = gates_for(s, pts, tol_scale);
    if (auto na = gate_block("totally_geodesic_map", ga)) return *na;
    const Classification& cls = *ga.cls;

    ResidualFold fold{tol_scale};
    double r_cond = 0, r_direct = 0, r_hpair = 0, gap = 0;
    std::string worst;
    for (size_t ip = 0; ip < pts.size(); ++ip) {
        const auto& p = pts[ip];
        const TangentSplit& sp = cls.splits[ip];
        Mat<double> g = metric_at_checked(s.total, p);
        Mat<double> gq = metric_at_checked(s.base, map_value(s, p));
        PointOperators<double> ops = point_operators_at<double>(s, p);

        for (const auto& x : sp.vertical) {
            ConstField dir{x};
            for (const auto& y : sp.vertical) {
                VerticalClauses cl = vertical_pair_clauses(s, p, ops, x, y);
                double cond = std::hypot(norm(g, ops.d2 * cl.a), norm(g, ops.mu * cl.b));
                Vec<double> sff =
                    second_fundamental_form_at(s, p, ConstField{x}, ConstField{y});
                double direct = g2_norm(gq, sff);
                if (direct > r_direct) worst = point_str(p);
                r_cond = std::max(r_cond, cond);
                r_direct = std::max(r_direct, direct);
                gap = std::max(gap, std::abs(cond - direct));
            }
            for (const auto& z : sp.horizontal) {
                Vec<double> db = covariant_derivative_at<double>(
                    s.total, dir, basic_chain(s, Chain::B, p, z), p);
                Vec<double> dc = covariant_derivative_at<double>(
                    s.total, dir, basic_chain(s, Chain::C, p, z), p);
                Vec<double> ca = vec_add(ops.pv * db, T_at(s, p, x, ops.c * z));
                Vec<double> cb = vec_add(T_at(s, p, x, ops.b * z), ops.ph * dc);
                double cond = std::hypot(norm(g, ops.d2 * ca), norm(g, ops.mu * cb));
                Vec<double> sff =
                    second_fundamental_form_at(s, p, ConstField{x}, ConstField{z});
                double direct = g2_norm(gq, sff);
                if (direct > r_direct) worst = point_str(p);
                r_cond = std::max(r_cond, cond);
                r_direct = std::max(r_direct, direct);
                gap = std::max(gap, std::abs(cond - direct));
            }
        }
        for (size_t i = 0; i < sp.horizontal.size(); ++i)
            for (size_t j = i; j < sp.horizontal.size(); ++j) {
                Vec<double> sff = second_fundamental_form_at(
                    s, p, ConstField{sp.horizontal[i]}, ConstField{sp.horizontal[j]});
                r_hpair = std::max(r_hpair, g2_norm(gq, sff));
            }
    }

    fold.add(r_cond, 1e-7);
    fold.add(r_direct, 1e-7);
    fold.add(r_hpair, 1e-8);
    std::vector<std::string> details = {
        kind_dims_detail(cls),
        "max membership-clause defect = " + fmt_g(r_cond),
        "max second-fundamental-form norm of the map (direct route) = " + fmt_g(r_direct),
        "max horizontal-pair second-fundamental-form norm = " + fmt_g(r_hpair),
        "route gap = " + fmt_g(gap),
    };
    if (!worst.empty()) details.push_back("worst pair at " + worst);
    CheckReport rep = finish_report("totally_geodesic_map", fold, std::move(details));
    flag_route_disagreement(rep, gap, tol_scale);
    if (rep.status == Status::Pass)
        rep.details.push_back("the map is totally geodesic at this tolerance");
    return rep;
}

CheckReport check_horizontal_foliation(const ScenarioSpec& s,
                                       const std::vector<std::vector<double>>& pts,
                                       double tol_scale) {
    Gates ga = gates_for(s, pts, tol_scale);
    if (auto na = gate_block("horizontal_foliation", ga)) return *na;
    const Classification& cls = *ga.cls;

    HfScan scan = hf_scan(s, pts, cls);
    ResidualFold fold{tol_scale};
    fold.add(scan.cond, 1e-7);
    fold.add(scan.direct, 1e-7);
    std::vector<std::string> details = {
        kind_dims_detail(cls),
        "max clause-membership defect = " + fmt_g(scan.cond),
        "max vertical part of horizontal covariant derivatives (direct route) = " +
            fmt_g(scan.direct),
        "route gap = " + fmt_g(scan.gap),
    };
    if (!scan.worst.empty()) details.push_back("worst pair at " + scan.worst);
    CheckReport rep = finish_report("horizontal_foliation", fold, std::move(details));
    flag_route_disagreement(rep, scan.gap, tol_scale);
    if (rep.status == Status::Pass)
        rep.details.push_back(
            "the horizontal distribution integrates to totally geodesic leaves at this "
            "tolerance");
    return rep;
}

CheckReport check_vertical_foliation(const ScenarioSpec& s,
                                     const std::vector<std::vector<double>>& pts,
                                     double tol_scale) {
    Gates ga = gates_for(s, pts, tol_scale);
    if (auto na = gate_block("vertical_foliation", ga)) return *na;
    const Classification& cls = *ga.cls;

    VfScan scan = vf_scan(s, pts, cls);
    ResidualFold fold{tol_scale};
    fold.add(scan.clause, 1e-7);
    fold.add(scan.mapform, 1e-7);
    fold.add(scan.direct, 1e-7);
    std::vector<std::string> details = {
        kind_dims_detail(cls),
        "max clause-membership route = " + fmt_g(scan.clause),
        "max map-form pairing route = " + fmt_g(scan.mapform),
        "max |T| direct route = " + fmt_g(scan.direct),
        "route gap = " + fmt_g(scan.gap),
    };
    if (!scan.worst.empty()) details.push_back("worst pair at " + scan.worst);
    CheckReport rep = finish_report("vertical_foliation", fold, std::move(details));
    flag_route_disagreement(rep, scan.gap, tol_scale);
    if (rep.status == Status::Pass)
        rep.details.push_back("the fibres are totally geodesic at this tolerance");
    return rep;
}

CheckReport check_product_three_factor(const ScenarioSpec& s,
                                       const std::vector<std::vector<double>>& pts,
                                       double tol_scale) {
    Gates ga = gates_for(s, pts, tol_scale);
    if (auto na = gate_block("product_three_factor", ga)) return *na;
    const Classification& cls = *ga.cls;

    // Fibre clause: nabla phi = 0, with the T-transport identity as the
    // second route to the same tensor.
    double r_phi = 0, r_phi_t = 0, phi_gap = 0;
    for (size_t ip = 0; ip < pts.size(); ++ip) {
        const auto& p = pts[ip];
        const TangentSplit& sp = cls.splits[ip];
        Mat<double> g = metric_at_checked(s.total, p);
        PointOperators<double> ops = point_operators_at<double>(s, p);
        for (const auto& v : sp.vertical)
            for (const auto& w : sp.vertical) {
                double direct = norm(g, nabla_phi_at(s, p, v, w));
                double transported = norm(
                    g, vec_sub(ops.b * T_at(s, p, v, w), T_at(s, p, v, ops.omega * w)));
                r_phi = std::max(r_phi, direct);
                r_phi_t = std::max(r_phi_t, transported);
                phi_gap = std::max(phi_gap, std::abs(direct - transported));
            }
    }
    HfScan hf = hf_scan(s, pts, cls);

    ResidualFold fold{tol_scale};
    fold.add(r_phi, 1e-7);
    fold.add(r_phi_t, 1e-7);
    fold.add(hf.cond, 1e-7);
    fold.add(hf.direct, 1e-7);
    CheckReport rep = finish_report(
        "product_three_factor", fold,
        {kind_dims_detail(cls),
         "max |nabla phi| on the fibres (direct route) = " + fmt_g(r_phi),
         "max |nabla phi| via T-transport = " + fmt_g(r_phi_t),
         "max horizontal clause defect = " + fmt_g(hf.cond),
         "max horizontal direct obstruction = " + fmt_g(hf.direct),
         "route gaps: fibre = " + fmt_g(phi_gap) + ", horizontal = " + fmt_g(hf.gap)});
    flag_route_disagreement(rep, std::max(phi_gap, hf.gap), tol_scale);
    if (rep.status == Status::Fail) {
        if (r_phi >= 1e-7 * tol_scale)
            rep.details.push_back("failing side: the fibres do not split (nabla phi != 0)");
        if (std::max(hf.cond, hf.direct) >= 1e-7 * tol_scale)
            rep.details.push_back("failing side: the horizontal leaves are not totally geodesic");
    } else if (rep.status == Status::Pass) {
        rep.details.push_back(
            "the total space splits locally into invariant x anti-invariant x base factors at "
            "this tolerance");
    }
    return rep;
}

CheckReport check_product_two_factor(const ScenarioSpec& s,
                                     const std::vector<std::vector<double>>& pts,
                                     double tol_scale) {
    Gates ga = gates_for(s, pts, tol_scale);
    if (auto na = gate_block("product_two_factor", ga)) return *na;
    const Classification& cls = *ga.cls;

    VfScan vf = vf_scan(s, pts, cls);
    HfScan hf = hf_scan(s, pts, cls);

    ResidualFold fold{tol_scale};
    fold.add(vf.mapform, 1e-7);
    fold.add(vf.clause, 1e-7);
    fold.add(vf.direct, 1e-7);
    fold.add(hf.cond, 1e-7);
    fold.add(hf.direct, 1e-7);
    CheckReport rep = finish_report(
        "product_two_factor", fold,
        {kind_dims_detail(cls),
         "max fibre-leaf obstruction (map-form route) = " + fmt_g(vf.mapform),
         "max fibre-leaf obstruction (clause route) = " + fmt_g(vf.clause),
         "max fibre-leaf obstruction (|T| route) = " + fmt_g(vf.direct),
         "max horizontal-leaf clause defect = " + fmt_g(hf.cond),
         "max horizontal-leaf direct obstruction = " + fmt_g(hf.direct),
         "route gaps: fibre = " + fmt_g(vf.gap) + ", horizontal = " + fmt_g(hf.gap)});
    flag_route_disagreement(rep, std::max(vf.gap, hf.gap), tol_scale);
    if (rep.status == Status::Fail) {
        if (vf.direct >= 1e-7 * tol_scale)
            rep.details.push_back("failing side: the fibre leaves are not totally geodesic");
        if (std::max(hf.cond, hf.direct) >= 1e-7 * tol_scale)
            rep.details.push_back("failing side: the horizontal leaves are not totally geodesic");
    } else if (rep.status == Status::Pass) {
        rep.details.push_back(
            "the total space splits locally into fibre x base factors at this tolerance");
    }
    return rep;
}

CheckReport check_mean_curvature_location(const ScenarioSpec& s,
                                          const std::vector<std::vector<double>>& pts,
                                          double tol_scale) {
    Gates ga = gates_for(s, pts, tol_scale);
    if (auto na = gate_block("mean_curvature_location", ga)) return *na;
    const Classification& cls = *ga.cls;

    FiberGeometryReport fg = fiber_geometry(s, pts);
    if (fg.umbilicity_defect >= 1e-7 * tol_scale)
        return not_applicable("mean_curvature_location", umbilical_reason(fg.umbilicity_defect));

    ResidualFold fold{tol_scale};
    double r_mu = 0, r_vert = 0, h_max = 0;
    std::string worst;
    for (size_t ip = 0; ip < pts.size(); ++ip) {
        const auto& p = pts[ip];
        const TangentSplit& sp = cls.splits[ip];
        Mat<double> g = metric_at_checked(s.total, p);
        PointOperators<double> ops = point_operators_at<double>(s, p);
        Vec<double> h(s.total.dim, 0.0);
        for (const auto& v : sp.vertical) h = vec_add(h, T_at(s, p, v, v));
        h = vec_scale(1.0 / static_cast<double>(sp.vertical.size()), h);
        double leak = norm(g, ops.mu * h);
        if (leak > r_mu) worst = point_str(p);
        r_mu = std::max(r_mu, leak);
        r_vert = std::max(r_vert, norm(g, ops.pv * h));
        h_max = std::max(h_max, norm(g, h));
    }
    fold.add(r_mu, 1e-7);
    fold.add(r_vert, 1e-9);
    std::vector<std::string> details = {
        kind_dims_detail(cls),
        "umbilicity defect = " + fmt_g(fg.umbilicity_defect),
        "max |H| = " + fmt_g(h_max),
        "max component of H outside J(anti-invariant directions) = " + fmt_g(r_mu),
        "max vertical leak of H = " + fmt_g(r_vert),
    };
    if (!worst.empty()) details.push_back("worst point at " + worst);
    CheckReport rep = finish_report("mean_curvature_location", fold, std::move(details));
    if (rep.status == Status::Fail) {
        rep.status = Status::TheoremViolation;
        rep.details.push_back(
            "with totally umbilical fibres the mean curvature must lie in the J-image of the "
            "anti-invariant directions; this residual contradicts the theory");
    } else {
        rep.details.push_back("the mean curvature sits inside J(anti-invariant directions)");
    }
    return rep;
}

CheckReport check_space_form_consistency(const ScenarioSpec& s,
                                         const std::vector<std::vector<double>>& pts,
                                         double tol_scale) {
    Gates ga = gates_for(s, pts, tol_scale);
    if (auto na = gate_block("space_form_consistency", ga)) return *na;
    const Classification& cls = *ga.cls;

    SpaceFormFit fit = fit_space_form_constant(s.total, pts, s.seed);
    if (fit.residual_max >= 1e-6 * tol_scale)
        return not_applicable(
            "space_form_consistency",
            "the total metric does not fit a constant-holomorphic-curvature model on this "
            "sample set (fit residual = " +
                fmt_g(fit.residual_max) + ")");
    FiberGeometryReport fg = fiber_geometry(s, pts);
    if (fg.umbilicity_defect >= 1e-7 * tol_scale)
        return not_applicable("space_form_consistency", umbilical_reason(fg.umbilicity_defect));

    bool geodesic_fibres = fg.max_T_norm < 1e-7 * tol_scale;
    ResidualFold fold{tol_scale};
    std::vector<std::string> details = {
        kind_dims_detail(cls),
        "fitted holomorphic curvature constant = " + fmt_g(fit.c_estimate),
        "max |T| = " + fmt_g(fg.max_T_norm),
        "umbilicity defect = " + fmt_g(fg.umbilicity_defect),
    };
    bool dim_breach = false;
    if (geodesic_fibres) {
        details.push_back(
            "fibres are totally geodesic; the flatness obstruction is not exercised");
    } else {
        fold.add(std::abs(fit.c_estimate), 1e-6);
        details.push_back(
            "umbilical non-geodesic fibres force a flat model: |c| folded against tolerance");
        if (cls.dim_d2 != 1) {
            dim_breach = true;
            details.push_back(
                "with umbilical non-geodesic fibres the anti-invariant directions must form a "
                "line; found dimension " +
                std::to_string(cls.dim_d2));
        } else {
            details.push_back("the anti-invariant directions form a line, as the alternative "
                              "forces");
        }
    }
    CheckReport rep = finish_report("space_form_consistency", fold, std::move(details));
    if (rep.status == Status::Fail || dim_breach) rep.status = Status::TheoremViolation;
    return rep;
}

}  // namespace oneill
