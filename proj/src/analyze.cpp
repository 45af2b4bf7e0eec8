#include "oneill/analyze.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "oneill/complexstruct.hpp"
#include "oneill/geometry.hpp"
#include "oneill/oneill.hpp"
#include "oneill/submersion.hpp"

namespace oneill {

namespace {

// A field affine in the chart coordinates: a + M(x - p). Gives the torsion
// check real derivative terms instead of the zeros constant fields produce.
struct AffineField {
    std::vector<double> p;
    Vec<double> a;
    Mat<double> m;

    template <class S>
    Vec<S> operator()(const std::vector<S>& x) const {
        Vec<S> out(a.size(), S{});
        for (size_t i = 0; i < a.size(); ++i) {
            S acc = S(a[i]);
            for (size_t j = 0; j < x.size(); ++j)
                acc = acc + S(m(static_cast<int>(i), static_cast<int>(j))) * (x[j] - S(p[j]));
            out[i] = acc;
        }
        return out;
    }
};

struct ChartResiduals {
    double total = 0.0;
    double base = 0.0;
    double worst() const { return std::max(total, base); }
};

double christoffel_symmetry_residual(const ManifoldSpec& m,
                                     const std::vector<std::vector<double>>& pts) {
    double worst = 0.0;
    for (const auto& p : pts) {
        Christoffel<double> c = christoffel_at<double>(m, p);
        for (int k = 0; k < m.dim; ++k)
            for (int i = 0; i < m.dim; ++i)
                for (int j = i + 1; j < m.dim; ++j)
                    worst = std::max(worst, std::abs(c.at(k, i, j) - c.at(k, j, i)));
    }
    return worst;
}

double torsion_residual(const ManifoldSpec& m, const std::vector<std::vector<double>>& pts,
                        std::uint64_t salt) {
    std::mt19937_64 rng(salt);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 0.0;
    for (const auto& p : pts) {
        AffineField x{p, Vec<double>(p.size()), Mat<double>(m.dim, m.dim)};
        AffineField y = x;
        for (int i = 0; i < m.dim; ++i) {
            x.a[i] = u(rng);
            y.a[i] = u(rng);
            for (int j = 0; j < m.dim; ++j) {
                x.m(i, j) = u(rng);
                y.m(i, j) = u(rng);
            }
        }
        Vec<double> t = vec_sub(vec_sub(covariant_derivative_at<double>(m, x, y, p),
                                        covariant_derivative_at<double>(m, y, x, p)),
                                lie_bracket_at<double>(x, y, p));
        worst = std::max(worst, norm(metric_at_checked(m, p), t));
    }
    return worst;
}

double metric_compat_residual(const ManifoldSpec& m, const std::vector<std::vector<double>>& pts) {
    double worst = 0.0;
    for (const auto& p : pts) {
        Mat<Jet2<double>> gj = metric_at(m, seed_coords<Jet2<double>>(p));
        Christoffel<double> c = christoffel_at<double>(m, p);
        for (int i = 0; i < m.dim; ++i)
            for (int j = 0; j < m.dim; ++j)
                for (int k = j; k < m.dim; ++k) {
                    double d = gj(j, k).g_or0(i);
                    for (int l = 0; l < m.dim; ++l)
                        d -= c.at(l, i, j) * gj(l, k).val + c.at(l, i, k) * gj(j, l).val;
                    worst = std::max(worst, std::abs(d));
                }
    }
    return worst;
}

double curvature_symmetry_residual(const ManifoldSpec& m,
                                   const std::vector<std::vector<double>>& pts) {
    double worst = 0.0;
    for (const auto& p : pts) {
        Riemann r = riemann_tensor_at(m, p);
        Mat<double> g = metric_at_checked(m, p);
        int n = m.dim;
        // Lowered tensor D(a,b,i,j) = g(e_a, R(e_i,e_j) e_b).
        auto lower = [&](int a, int b, int i, int j) {
            double v = 0.0;
            for (int l = 0; l < n; ++l) v += g(a, l) * r.at(l, b, i, j);
            return v;
        };
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) {
                        double d = lower(a, b, i, j);
                        worst = std::max(worst, std::abs(d + lower(a, b, j, i)));
                        worst = std::max(worst, std::abs(d + lower(b, a, i, j)));
                        worst = std::max(worst, std::abs(d - lower(i, j, a, b)));
                        worst = std::max(worst,
                                         std::abs(r.at(a, b, i, j) + r.at(a, i, j, b) +
                                                  r.at(a, j, b, i)));
                    }
    }
    return worst;
}

CheckReport chart_report(const char* name, const ChartResiduals& res, double base_tol,
                         double tol_scale, const char* what) {
    ResidualFold fold{tol_scale};
    fold.add(res.total, base_tol);
    fold.add(res.base, base_tol);
    CheckReport r = finish_report(name, fold, {});
    r.details.push_back(std::string("max ") + what + " on the total chart = " +
                        fmt_g(res.total));
    r.details.push_back(std::string("max ") + what + " on the base chart = " + fmt_g(res.base));
    return r;
}

const char* status_color(Status s) {
    switch (s) {
        case Status::Pass: return "\033[32m";
        case Status::Fail: return "\033[31m";
        case Status::NotApplicable: return "\033[2m";
        case Status::TheoremViolation: return "\033[35m";
    }
    return "";
}

}  // namespace

CheckReport check_christoffel_symmetry(const ScenarioSpec& s,
                                       const std::vector<std::vector<double>>& pts_total,
                                       const std::vector<std::vector<double>>& pts_base,
                                       double tol_scale) {
    ChartResiduals res{christoffel_symmetry_residual(s.total, pts_total),
                       christoffel_symmetry_residual(s.base, pts_base)};
    return chart_report("christoffel_symmetry", res, 1e-12, tol_scale,
                        "|Gamma^k_ij - Gamma^k_ji|");
}

CheckReport check_connection_torsion(const ScenarioSpec& s,
                                     const std::vector<std::vector<double>>& pts_total,
                                     const std::vector<std::vector<double>>& pts_base,
                                     double tol_scale) {
    ChartResiduals res{torsion_residual(s.total, pts_total, 0x746f7273696f6e31ull),
                       torsion_residual(s.base, pts_base, 0x746f7273696f6e32ull)};
    return chart_report("connection_torsion", res, 1e-9, tol_scale,
                        "|nabla_X Y - nabla_Y X - [X,Y]| over affine field pairs");
}

CheckReport check_connection_metric_compat(const ScenarioSpec& s,
                                           const std::vector<std::vector<double>>& pts_total,
                                           const std::vector<std::vector<double>>& pts_base,
                                           double tol_scale) {
    ChartResiduals res{metric_compat_residual(s.total, pts_total),
                       metric_compat_residual(s.base, pts_base)};
    return chart_report("connection_metric_compat", res, 1e-9, tol_scale,
                        "|d_i g_jk - Gamma*g - g*Gamma|");
}

CheckReport check_curvature_symmetries(const ScenarioSpec& s,
                                       const std::vector<std::vector<double>>& pts_total,
                                       const std::vector<std::vector<double>>& pts_base,
                                       double tol_scale) {
    ChartResiduals res{curvature_symmetry_residual(s.total, pts_total),
                       curvature_symmetry_residual(s.base, pts_base)};
    return chart_report("curvature_symmetries", res, 1e-8, tol_scale,
                        "curvature symmetry defect (pair, skew, Bianchi)");
}

CheckReport check_kaehler(const ScenarioSpec& s, const std::vector<std::vector<double>>& pts,
                          double tol_scale) {
    double defect = max_kaehler_defect(s.total, pts);
    ResidualFold fold{tol_scale};
    fold.add(defect, 1e-7);
    CheckReport r = finish_report("kaehler", fold, {});
    r.details.push_back("max |(nabla_x J)y| over seeded pairs = " + fmt_g(defect));
    return r;
}

CheckReport check_space_form_fit(const ScenarioSpec& s,
                                 const std::vector<std::vector<double>>& pts, std::uint64_t seed,
                                 double tol_scale) {
    SpaceFormFit fit = fit_space_form_constant(s.total, pts, seed);
    CheckReport r;
    r.check = "space_form_fit";
    if (fit.residual_max >= 1e-6 * tol_scale) {
        r.status = Status::NotApplicable;
        r.details.push_back(
            "the total metric does not fit a constant-holomorphic-curvature model on this "
            "sample set (fit residual = " +
            fmt_g(fit.residual_max) + ")");
        return r;
    }
    ResidualFold fold{tol_scale};
    fold.add(fit.residual_max, 1e-6);
    r = finish_report("space_form_fit", fold, {});
    r.details.push_back("fitted holomorphic curvature constant = " + fmt_g(fit.c_estimate));
    r.details.push_back("max fit residual = " + fmt_g(fit.residual_max));
    return r;
}

const std::vector<std::string>& catalog_names() {
    static const std::vector<std::string> names = {
        "almost_hermitian",       "basic_field_correspondence",
        "christoffel_symmetry",   "classification",
        "connection_metric_compat", "connection_torsion",
        "curvature_relation",     "curvature_symmetries",
        "d1_integrability",       "d2_integrability",
        "fiber_geometry",         "fundamental_equations",
        "horizontal_foliation",   "kaehler",
        "mean_curvature_location", "oneill_identities",
        "operator_identities",    "product_three_factor",
        "product_two_factor",     "riemannian_submersion",
        "second_fundamental_form", "space_form_consistency",
        "space_form_fit",         "totally_geodesic_map",
        "vertical_foliation",
    };
    return names;
}

AnalysisResult run_analysis(const ScenarioSpec& s, const std::string& display_name,
                            const AnalyzeOptions& opts) {
    int n = opts.samples.value_or(s.samples);
    std::uint64_t seed = opts.seed.value_or(s.seed);
    double ts = opts.tol_scale;
    auto pt = sample_points(s.total, n, seed);
    auto pb = sample_points(s.base, n, seed);

    AnalysisResult r;
    r.name = display_name;
    r.label = s.label;
    r.total_dim = s.total.dim;
    r.base_dim = s.base.dim;
    r.samples = n;
    r.seed = seed;
    r.classification = classify(s, pt);

    auto add = [&](const std::string& name, CheckReport rep) {
        rep.check = name;
        r.checks.push_back(std::move(rep));
    };
    add("almost_hermitian", validate_almost_hermitian(s.total, pt, seed, ts));
    add("basic_field_correspondence", check_basic_field_correspondence(s, pt, ts));
    add("christoffel_symmetry", check_christoffel_symmetry(s, pt, pb, ts));
    add("classification", check_classification(s, pt, ts));
    add("connection_metric_compat", check_connection_metric_compat(s, pt, pb, ts));
    add("connection_torsion", check_connection_torsion(s, pt, pb, ts));
    add("curvature_relation", check_curvature_relation(s, pt, ts));
    add("curvature_symmetries", check_curvature_symmetries(s, pt, pb, ts));
    add("d1_integrability", check_d1_integrability(s, pt, ts));
    add("d2_integrability", check_d2_integrability(s, pt, ts));
    add("fiber_geometry", check_fiber_geometry(s, pt, ts));
    add("fundamental_equations", check_fundamental_equations(s, pt, ts));
    add("horizontal_foliation", check_horizontal_foliation(s, pt, ts));
    add("kaehler", check_kaehler(s, pt, ts));
    add("mean_curvature_location", check_mean_curvature_location(s, pt, ts));
    add("oneill_identities", check_oneill_identities(s, pt, ts));
    add("operator_identities", check_operator_identities(s, pt, ts));
    add("product_three_factor", check_product_three_factor(s, pt, ts));
    add("product_two_factor", check_product_two_factor(s, pt, ts));
    add("riemannian_submersion", check_riemannian_submersion(s, pt, ts));
    add("second_fundamental_form", check_second_fundamental_form(s, pt, ts));
    add("space_form_consistency", check_space_form_consistency(s, pt, ts));
    add("space_form_fit", check_space_form_fit(s, pt, seed, ts));
    add("totally_geodesic_map", check_totally_geodesic_map(s, pt, ts));
    add("vertical_foliation", check_vertical_foliation(s, pt, ts));
    return r;
}

std::string classification_line(const Classification& c) {
    std::ostringstream os;
    os << "CLASSIFICATION " << to_string(c.kind) << " dimD1=" << c.dim_d1
       << " dimD2=" << c.dim_d2 << " dimMu=" << c.dim_mu;
    return os.str();
}

void render_table(std::ostream& os, const AnalysisResult& r, bool color) {
    os << "scenario " << r.name << ": " << r.label << "\n";
    os << "total dim " << r.total_dim << " -> base dim " << r.base_dim << "; samples "
       << r.samples << ", seed " << r.seed << "\n";
    os << classification_line(r.classification) << "\n";
    for (const auto& c : r.checks) {
        std::string st = to_string(c.status);
        std::string padding(st.size() < 18 ? 18 - st.size() : 1, ' ');
        os << "  " << std::left << std::setw(28) << c.check << ' ';
        if (color) os << status_color(c.status) << st << "\033[0m";
        else os << st;
        os << padding << "res " << fmt_g(c.max_residual) << "\n";
        for (const auto& d : c.details) os << "      | " << d << "\n";
    }
}

void render_json_lines(std::ostream& os, const AnalysisResult& r) {
    for (const auto& c : r.checks) {
        nlohmann::ordered_json o;
        o["scenario"] = r.name;
        o["check"] = c.check;
        o["status"] = to_string(c.status);
        o["max_residual"] = c.max_residual;
        o["tolerance"] = c.tolerance;
        o["details"] = c.details;
        os << o.dump() << "\n";
    }
}

}  // namespace oneill
