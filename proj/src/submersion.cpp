#include "oneill/submersion.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "oneill/errors.hpp"

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

double relative_min_sv(const Mat<double>& jac) {
    std::vector<double> sv = singular_values(jac);
    return sv.front() == 0.0 ? 0.0 : sv.back() / sv.front();
}

}  // namespace

Vec<double> map_point(const ScenarioSpec& s, const std::vector<double>& p) {
    return map_value<double>(s, p);
}

Mat<double> map_jacobian(const ScenarioSpec& s, const std::vector<double>& p) {
    return map_jacobian_at<double>(s, p);
}

void require_full_rank(const Mat<double>& jac, const std::vector<double>& p) {
    double rel = relative_min_sv(jac);
    if (rel < 1e-7)
        fail(Error::Code::RankDeficient,
             "Jacobian loses rank at " + point_str(p) +
                 ": relative singular value = " + fmt_g(rel));
}

Mat<double> vertical_projector_checked(const ScenarioSpec& s, const std::vector<double>& p) {
    metric_at_checked(s.total, p);
    require_full_rank(map_jacobian(s, p), p);
    return vertical_projector_at<double>(s, p);
}

Vec<double> pushforward_at(const ScenarioSpec& s, const std::vector<double>& p,
                           const Vec<double>& v) {
    return map_jacobian(s, p) * v;
}

SplitExtension split_extension(const ScenarioSpec& s, const std::vector<double>& p,
                               const Vec<double>& v) {
    Mat<double> pv = vertical_projector_checked(s, p);
    Vec<double> vv = pv * v;
    return SplitExtension{&s, vv, vec_sub(v, vv)};
}

TangentSplit base_split_at(const ScenarioSpec& s, const std::vector<double>& p) {
    int n = s.total.dim, m = s.base.dim;
    Mat<double> g = metric_at_checked(s.total, p);
    Mat<double> pv = vertical_projector_checked(s, p);

    auto columns = [n](const Mat<double>& mat) {
        std::vector<Vec<double>> cols;
        for (int j = 0; j < n; ++j) {
            Vec<double> c(n);
            for (int i = 0; i < n; ++i) c[i] = mat(i, j);
            cols.push_back(std::move(c));
        }
        return cols;
    };

    TangentSplit split;
    split.at = p;
    split.vertical = gram_schmidt(g, columns(pv));
    Mat<double> ph = Mat<double>::identity(n) - pv;
    split.horizontal = gram_schmidt(g, columns(ph));
    if (static_cast<int>(split.vertical.size()) != n - m ||
        static_cast<int>(split.horizontal.size()) != m)
        fail(Error::Code::Internal,
             "projector rank mismatch at " + point_str(p) + ": vertical " +
                 std::to_string(split.vertical.size()) + ", horizontal " +
                 std::to_string(split.horizontal.size()));
    return split;
}

CheckReport check_riemannian_submersion(const ScenarioSpec& s,
                                        const std::vector<std::vector<double>>& pts,
                                        double tol_scale) {
    ResidualFold fold{tol_scale};
    std::vector<std::string> details;
    double min_rel_sv = 1.0;
    double max_s2 = 0.0;

    for (size_t k = 0; k < pts.size(); ++k) {
        const auto& p = pts[k];
        metric_at_checked(s.total, p);
        Mat<double> jac = map_jacobian(s, p);
        double rel = relative_min_sv(jac);
        min_rel_sv = std::min(min_rel_sv, rel);
        if (rel < 1e-7) {
            fold.add(2.0, 1.0);
            details.push_back("point " + std::to_string(k) + " " + point_str(p) +
                              ": Jacobian drops below maximal rank (relative singular value = " +
                              fmt_g(rel) + ")");
            continue;
        }
        TangentSplit split = base_split_at(s, p);
        Vec<double> q = map_point(s, p);
        Mat<double> g2 = metric_at_checked(s.base, q);
        for (size_t i = 0; i < split.horizontal.size(); ++i) {
            Vec<double> fi = jac * split.horizontal[i];
            for (size_t j = i; j < split.horizontal.size(); ++j) {
                Vec<double> fj = jac * split.horizontal[j];
                double want = (i == j) ? 1.0 : 0.0;
                double r = std::abs(dot(g2, fi, fj) - want);
                max_s2 = std::max(max_s2, r);
                fold.add(r, 1e-9);
            }
        }
    }

    details.push_back("min relative singular value of the differential = " + fmt_g(min_rel_sv));
    details.push_back("max deviation of the differential from a horizontal isometry = " +
                      fmt_g(max_s2));
    return finish_report("riemannian_submersion", fold, std::move(details));
}

CheckReport check_second_fundamental_form(const ScenarioSpec& s,
                                          const std::vector<std::vector<double>>& pts,
                                          double tol_scale) {
    ResidualFold fold{tol_scale};
    std::vector<std::string> details;
    bool is_sub = check_riemannian_submersion(s, pts, tol_scale).status == Status::Pass;

    std::mt19937_64 rng(s.seed ^ 0x53464F524Dull);
    int n = s.total.dim;
    double max_sym = 0.0, max_ext = 0.0, max_hor = 0.0;

    for (const auto& p : pts) {
        Vec<double> u = random_pm1(rng, n);
        Vec<double> v = random_pm1(rng, n);
        Vec<double> q = map_point(s, p);
        Mat<double> g2 = metric_at_checked(s.base, q);

        Vec<double> uv = second_fundamental_form_at(s, p, ConstField{u}, ConstField{v});
        Vec<double> vu = second_fundamental_form_at(s, p, ConstField{v}, ConstField{u});
        double sym = norm(g2, vec_sub(uv, vu));
        max_sym = std::max(max_sym, sym);
        fold.add(sym, 1e-8);

        Vec<double> uv_mod =
            second_fundamental_form_at(s, p, ConstField{u}, modulated(ConstField{v}, p));
        double ext = norm(g2, vec_sub(uv_mod, uv));
        max_ext = std::max(max_ext, ext);
        fold.add(ext, 1e-8);

        if (is_sub) {
            TangentSplit split = base_split_at(s, p);
            for (size_t i = 0; i < split.horizontal.size(); ++i)
                for (size_t j = i; j < split.horizontal.size(); ++j) {
                    Vec<double> w = second_fundamental_form_at(
                        s, p, HorizontalExtension{&s, split.horizontal[i]},
                        HorizontalExtension{&s, split.horizontal[j]});
                    double r = norm(g2, w);
                    max_hor = std::max(max_hor, r);
                    fold.add(r, 1e-8);
                }
        }
    }

    details.push_back("max asymmetry of the form in its two slots = " + fmt_g(max_sym));
    details.push_back("max dependence on the field extension = " + fmt_g(max_ext));
    if (is_sub)
        details.push_back("max norm of the form on horizontal pairs = " + fmt_g(max_hor));
    else
        details.push_back(
            "horizontal-pair clause skipped: the map is not a Riemannian submersion on this "
            "sample set");
    return finish_report("second_fundamental_form", fold, std::move(details));
}

CheckReport check_basic_field_correspondence(const ScenarioSpec& s,
                                             const std::vector<std::vector<double>>& pts,
                                             double tol_scale) {
    auto not_applicable = [](std::string why) {
        CheckReport r;
        r.check = "basic_field_correspondence";
        r.status = Status::NotApplicable;
        r.details.push_back(std::move(why));
        return r;
    };

    if (check_riemannian_submersion(s, pts, tol_scale).status != Status::Pass)
        return not_applicable("the map is not a Riemannian submersion on this sample set");

    Mat<double> jac0 = map_jacobian(s, pts.front());
    for (const auto& p : pts) {
        Mat<double> jac = map_jacobian(s, p);
        for (size_t i = 0; i < jac.a.size(); ++i)
            if (std::abs(jac.a[i] - jac0.a[i]) > 1e-10)
                return not_applicable(
                    "the differential varies over the sample set; basic lifts of coordinate "
                    "fields are only attempted for constant-coefficient maps");
    }

    int m = s.base.dim;
    // Xstar = y_2 d/dy_1 (or y_1 d/dy_1 when the base is a line), Ystar the
    // matching coordinate field; their bracket is -d/dy_1 either way.
    std::vector<ExprPtr> xcomps(m), ycomps(m);
    for (int a = 0; a < m; ++a) {
        xcomps[a] = make_constant(0.0);
        ycomps[a] = make_constant(0.0);
    }
    xcomps[0] = make_var(s.base.coords[m >= 2 ? 1 : 0]);
    ycomps[m >= 2 ? 1 : 0] = make_constant(1.0);
    ExprField xstar{s.base.coords, xcomps};
    ExprField ystar{s.base.coords, ycomps};

    auto xlift = basic_lift(s, xstar);
    auto ylift = basic_lift(s, ystar);

    ResidualFold fold{tol_scale};
    double max_related = 0.0, max_bracket = 0.0;

    for (const auto& p : pts) {
        Vec<double> q = map_point(s, p);
        Mat<double> g2 = metric_at_checked(s.base, q);

        // F-relatedness of the lifts themselves.
        std::vector<double> qd(q.begin(), q.end());
        Vec<double> xq = xstar(qd);
        Vec<double> push_x = pushforward_at(s, p, xlift(p));
        double rel = norm(g2, vec_sub(push_x, xq));
        max_related = std::max(max_related, rel);
        fold.add(rel, 1e-9);

        // Horizontal part of the bracket of lifts against the base bracket.
        Vec<double> br = lie_bracket_at<double>(xlift, ylift, p);
        Mat<double> ph = Mat<double>::identity(s.total.dim) - vertical_projector_checked(s, p);
        Vec<double> push_br = pushforward_at(s, p, ph * br);
        Vec<double> base_br = lie_bracket_at<double>(xstar, ystar, qd);
        double r = norm(g2, vec_sub(push_br, base_br));
        max_bracket = std::max(max_bracket, r);
        fold.add(r, 1e-8);
    }

    std::vector<std::string> details;
    details.push_back("max pushforward mismatch of the lifted fields = " + fmt_g(max_related));
    details.push_back("max mismatch of projected bracket against base bracket = " +
                      fmt_g(max_bracket));
    return finish_report("basic_field_correspondence", fold, std::move(details));
}

}  // namespace oneill
