#include "oneill/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>
#include <utility>

#include "oneill/errors.hpp"

namespace oneill {

namespace {

// ---------------------------------------------------------------- parsing

struct RawRange {
    std::string name;
    Interval iv;
    SourcePos pos;
};

struct RawManifold {
    int dim = 0;
    std::vector<std::string> coords;
    std::vector<ExprPtr> metric_full;  // row-major dim*dim
    bool metric_rows = false;          // spelled "rows": symmetry is probed, not implied
    SourcePos metric_pos;
    std::vector<ExprPtr> J;
    std::vector<RawRange> ranges;
    SourcePos pos;
};

struct RawAssign {
    std::string name;
    ExprPtr e;
    SourcePos pos;
};

bool at_ident(const Parser& p, const char* kw) {
    return p.at(Tok::Ident) && p.peek().text == kw;
}

Token expect_ident(Parser& p, const char* kw) {
    if (!at_ident(p, kw))
        fail(Error::Code::Parse, std::string("expected '") + kw + "'", p.peek().pos);
    return p.next();
}

long long expect_integer(Parser& p, const char* what) {
    Token t = p.expect(Tok::Number, what);
    if (t.num != std::floor(t.num) || t.num < 0 || t.num > 9.0e15)
        fail(Error::Code::Parse, std::string(what) + " must be a nonnegative integer", t.pos);
    return static_cast<long long>(t.num);
}

double parse_signed_number(Parser& p, const char* what) {
    bool negate = p.accept(Tok::Minus);
    Token t = p.expect(Tok::Number, what);
    return negate ? -t.num : t.num;
}

// matrix := "diag" "(" EXPR ("," EXPR)* ")" | "rows" "[" row+ "]"
// Returns the full row-major matrix; diag fills off-diagonals with 0.
std::pair<std::vector<ExprPtr>, bool> parse_matrix(Parser& p, int dim, const char* owner) {
    size_t n = static_cast<size_t>(dim);
    if (at_ident(p, "diag")) {
        Token head = p.next();
        p.expect(Tok::LParen, "'('");
        std::vector<ExprPtr> entries;
        entries.push_back(p.parse_expr());
        while (p.accept(Tok::Comma)) entries.push_back(p.parse_expr());
        p.expect(Tok::RParen, "')'");
        if (entries.size() != n)
            fail(Error::Code::Validation,
                 std::string(owner) + " diag lists " + std::to_string(entries.size()) +
                     " entries for dimension " + std::to_string(dim),
                 head.pos);
        std::vector<ExprPtr> full(n * n);
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j)
                full[i * n + j] = (i == j) ? entries[i] : make_constant(0.0, head.pos);
        return {std::move(full), false};
    }
    if (at_ident(p, "rows")) {
        Token head = p.next();
        p.expect(Tok::LBracket, "'['");
        std::vector<std::vector<ExprPtr>> rows;
        while (p.at(Tok::LBracket)) {
            p.next();
            std::vector<ExprPtr> row;
            row.push_back(p.parse_expr());
            while (p.accept(Tok::Comma)) row.push_back(p.parse_expr());
            p.expect(Tok::RBracket, "']' after row");
            rows.push_back(std::move(row));
        }
        p.expect(Tok::RBracket, "']' after rows");
        if (rows.size() != n)
            fail(Error::Code::Validation,
                 std::string(owner) + " rows lists " + std::to_string(rows.size()) +
                     " rows for dimension " + std::to_string(dim),
                 head.pos);
        std::vector<ExprPtr> full;
        full.reserve(n * n);
        for (size_t i = 0; i < n; ++i) {
            if (rows[i].size() != n)
                fail(Error::Code::Validation,
                     std::string(owner) + " row " + std::to_string(i + 1) + " has " +
                         std::to_string(rows[i].size()) + " entries for dimension " +
                         std::to_string(dim),
                     head.pos);
            for (size_t j = 0; j < n; ++j) full.push_back(rows[i][j]);
        }
        return {std::move(full), true};
    }
    fail(Error::Code::Parse, "expected 'diag' or 'rows'", p.peek().pos);
}

RawManifold parse_manifold(Parser& p, const char* kw, bool allow_j) {
    RawManifold m;
    m.pos = expect_ident(p, kw).pos;
    p.expect(Tok::LBrace, "'{'");

    Token dim_kw = expect_ident(p, "dim");
    long long d = expect_integer(p, "dimension");
    if (d < 1) fail(Error::Code::Validation, "dimension must be positive", dim_kw.pos);
    if (d > 32) fail(Error::Code::Validation, "dimension must be at most 32", dim_kw.pos);
    m.dim = static_cast<int>(d);

    expect_ident(p, "coords");
    while (p.at(Tok::Ident) && p.peek().text != "metric") m.coords.push_back(p.next().text);

    m.metric_pos = expect_ident(p, "metric").pos;
    auto metric = parse_matrix(p, m.dim, kw);
    m.metric_full = std::move(metric.first);
    m.metric_rows = metric.second;

    if (at_ident(p, "J")) {
        Token j_kw = p.next();
        if (!allow_j)
            fail(Error::Code::Validation, "J belongs to the total space only", j_kw.pos);
        m.J = parse_matrix(p, m.dim, "J").first;
    }

    if (at_ident(p, "domain")) {
        p.next();
        while (p.at(Tok::Ident)) {
            Token name = p.next();
            expect_ident(p, "in");
            p.expect(Tok::LParen, "'('");
            double lo = parse_signed_number(p, "interval endpoint");
            p.expect(Tok::Comma, "','");
            double hi = parse_signed_number(p, "interval endpoint");
            p.expect(Tok::RParen, "')'");
            m.ranges.push_back({name.text, Interval{lo, hi}, name.pos});
        }
    }

    p.expect(Tok::RBrace, "'}'");
    return m;
}

std::vector<RawAssign> parse_map(Parser& p) {
    Token head = expect_ident(p, "map");
    p.expect(Tok::LBrace, "'{'");
    std::vector<RawAssign> out;
    while (p.at(Tok::Ident)) {
        Token n = p.next();
        p.expect(Tok::Equals, "'='");
        out.push_back({n.text, p.parse_expr(), n.pos});
    }
    p.expect(Tok::RBrace, "'}'");
    if (out.empty()) fail(Error::Code::Parse, "map block assigns nothing", head.pos);
    return out;
}

// -------------------------------------------------------------- validation

const Expr* find_unbound(const Expr& e, const std::set<std::string>& allowed) {
    if (e.kind == Expr::Kind::Var) return allowed.count(e.name) ? nullptr : &e;
    if (e.a)
        if (const Expr* bad = find_unbound(*e.a, allowed)) return bad;
    if (e.b)
        if (const Expr* bad = find_unbound(*e.b, allowed)) return bad;
    return nullptr;
}

void check_bound(const ExprPtr& e, const std::set<std::string>& allowed, const std::string& where) {
    if (const Expr* bad = find_unbound(*e, allowed))
        fail(Error::Code::Validation,
             where + " references undeclared coordinate '" + bad->name + "'", bad->pos);
}

void check_coords(const RawManifold& m, const char* which) {
    if (static_cast<int>(m.coords.size()) != m.dim)
        fail(Error::Code::Validation,
             std::string(which) + " declares " + std::to_string(m.coords.size()) +
                 " coordinates for dimension " + std::to_string(m.dim),
             m.pos);
    std::set<std::string> seen;
    for (const auto& c : m.coords)
        if (!seen.insert(c).second)
            fail(Error::Code::Validation,
                 std::string(which) + " repeats coordinate '" + c + "'", m.pos);
}

ManifoldSpec build_manifold(const RawManifold& raw, const char* which) {
    ManifoldSpec m;
    m.dim = raw.dim;
    m.coords = raw.coords;
    m.domain.assign(static_cast<size_t>(raw.dim), Interval{});

    std::set<std::string> ranged;
    for (const auto& r : raw.ranges) {
        auto it = std::find(m.coords.begin(), m.coords.end(), r.name);
        if (it == m.coords.end())
            fail(Error::Code::Validation,
                 std::string(which) + " domain names unknown coordinate '" + r.name + "'", r.pos);
        if (!ranged.insert(r.name).second)
            fail(Error::Code::Validation,
                 std::string(which) + " domain repeats coordinate '" + r.name + "'", r.pos);
        if (!(r.iv.lo < r.iv.hi))
            fail(Error::Code::Validation,
                 std::string(which) + " domain interval for '" + r.name + "' is empty", r.pos);
        m.domain[static_cast<size_t>(it - m.coords.begin())] = r.iv;
    }

    size_t n = static_cast<size_t>(raw.dim);
    std::set<std::string> own(m.coords.begin(), m.coords.end());
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i; j < n; ++j) {
            check_bound(raw.metric_full[i * n + j], own, std::string(which) + " metric entry");
            m.metric_upper.push_back(raw.metric_full[i * n + j]);
        }
    if (!raw.J.empty()) {
        for (const auto& e : raw.J) check_bound(e, own, "J entry");
        m.J = raw.J;
    }
    return m;
}

// A "rows" metric promises symmetry; hold it to that numerically before the
// lower triangle is discarded.
void probe_rows_symmetry(const ManifoldSpec& m, const RawManifold& raw) {
    auto pts = sample_points(m, 8, 0xA11CEull);
    size_t n = static_cast<size_t>(m.dim);
    for (const auto& pt : pts)
        for (size_t i = 0; i < n; ++i)
            for (size_t j = i + 1; j < n; ++j) {
                double gij = eval_expr<double>(*raw.metric_full[i * n + j], m.coords, pt);
                double gji = eval_expr<double>(*raw.metric_full[j * n + i], m.coords, pt);
                if (std::abs(gij - gji) > 1e-10)
                    fail(Error::Code::Validation,
                         "metric rows are not symmetric: entries (" + m.coords[i] + "," +
                             m.coords[j] + ") and (" + m.coords[j] + "," + m.coords[i] +
                             ") differ by " + repr_double(std::abs(gij - gji)),
                         raw.metric_pos);
            }
}

// -------------------------------------------------------------- printing

bool is_zero_constant(const Expr& e) {
    return e.kind == Expr::Kind::Constant && e.value == 0.0;
}

void print_matrix(std::ostringstream& os, const std::vector<ExprPtr>& full, int dim) {
    size_t n = static_cast<size_t>(dim);
    bool diagonal = true;
    for (size_t i = 0; i < n && diagonal; ++i)
        for (size_t j = 0; j < n && diagonal; ++j)
            if (i != j && !is_zero_constant(*full[i * n + j])) diagonal = false;
    if (diagonal) {
        os << "diag(";
        for (size_t i = 0; i < n; ++i) {
            if (i) os << ", ";
            os << to_string(*full[i * n + i]);
        }
        os << ")";
        return;
    }
    os << "rows [\n";
    for (size_t i = 0; i < n; ++i) {
        os << "    [";
        for (size_t j = 0; j < n; ++j) {
            if (j) os << ", ";
            os << to_string(*full[i * n + j]);
        }
        os << "]\n";
    }
    os << "  ]";
}

void print_manifold(std::ostringstream& os, const char* kw, const ManifoldSpec& m) {
    size_t n = static_cast<size_t>(m.dim);
    os << kw << " {\n";
    os << "  dim " << m.dim << "\n";
    os << "  coords";
    for (const auto& c : m.coords) os << ' ' << c;
    os << "\n";

    std::vector<ExprPtr> full(n * n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            full[i * n + j] = m.metric_entry(static_cast<int>(i), static_cast<int>(j));
    os << "  metric ";
    print_matrix(os, full, m.dim);
    os << "\n";

    if (m.has_J()) {
        os << "  J ";
        print_matrix(os, m.J, m.dim);
        os << "\n";
    }

    os << "  domain";
    for (size_t i = 0; i < n; ++i) {
        Interval iv = m.domain_of(static_cast<int>(i));
        os << ' ' << m.coords[i] << " in (" << repr_double(iv.lo) << ", " << repr_double(iv.hi)
           << ")";
    }
    os << "\n}\n";
}

bool manifolds_equal(const ManifoldSpec& a, const ManifoldSpec& b) {
    if (a.dim != b.dim || a.coords != b.coords) return false;
    if (a.metric_upper.size() != b.metric_upper.size() || a.J.size() != b.J.size()) return false;
    for (size_t i = 0; i < a.metric_upper.size(); ++i)
        if (!structurally_equal(*a.metric_upper[i], *b.metric_upper[i])) return false;
    for (size_t i = 0; i < a.J.size(); ++i)
        if (!structurally_equal(*a.J[i], *b.J[i])) return false;
    for (int i = 0; i < a.dim; ++i) {
        Interval ia = a.domain_of(i), ib = b.domain_of(i);
        if (ia.lo != ib.lo || ia.hi != ib.hi) return false;
    }
    return true;
}

}  // namespace

ScenarioSpec load_scenario(const std::string& text) {
    Parser p(tokenize(text));

    RawManifold raw_total = parse_manifold(p, "total", /*allow_j=*/true);
    RawManifold raw_base = parse_manifold(p, "base", /*allow_j=*/false);
    std::vector<RawAssign> assigns = parse_map(p);

    ScenarioSpec s;
    bool have_seed = false, have_samples = false, have_label = false;
    while (p.at(Tok::Ident)) {
        Token kw = p.next();
        if (kw.text == "seed") {
            if (have_seed) fail(Error::Code::Validation, "option 'seed' given twice", kw.pos);
            have_seed = true;
            s.seed = static_cast<std::uint64_t>(expect_integer(p, "seed"));
        } else if (kw.text == "samples") {
            if (have_samples)
                fail(Error::Code::Validation, "option 'samples' given twice", kw.pos);
            have_samples = true;
            long long v = expect_integer(p, "samples");
            if (v < 1) fail(Error::Code::Validation, "samples must be at least 1", kw.pos);
            s.samples = static_cast<int>(v);
        } else if (kw.text == "label") {
            if (have_label) fail(Error::Code::Validation, "option 'label' given twice", kw.pos);
            have_label = true;
            s.label = p.expect(Tok::String, "label string").text;
        } else {
            fail(Error::Code::Parse, "unknown option '" + kw.text + "'", kw.pos);
        }
    }
    if (!p.at_end()) fail(Error::Code::Parse, "unexpected trailing input", p.peek().pos);

    check_coords(raw_total, "total");
    check_coords(raw_base, "base");

    if (raw_base.dim >= raw_total.dim)
        fail(Error::Code::Validation,
             "base dimension " + std::to_string(raw_base.dim) +
                 " must be smaller than total dimension " + std::to_string(raw_total.dim),
             raw_base.pos);

    std::set<std::string> total_names(raw_total.coords.begin(), raw_total.coords.end());
    for (const auto& c : raw_base.coords)
        if (total_names.count(c))
            fail(Error::Code::Validation,
                 "coordinate '" + c + "' appears in both total and base", raw_base.pos);

    if (raw_total.J.empty())
        fail(Error::Code::MissingJ, "total space must declare J", raw_total.pos);
    if (raw_total.dim % 2 != 0)
        fail(Error::Code::Validation,
             "total space carries J, so its dimension must be even", raw_total.pos);

    s.total = build_manifold(raw_total, "total");
    s.base = build_manifold(raw_base, "base");

    if (raw_total.metric_rows) probe_rows_symmetry(s.total, raw_total);
    if (raw_base.metric_rows) probe_rows_symmetry(s.base, raw_base);

    std::map<std::string, ExprPtr> by_name;
    for (const auto& a : assigns) {
        if (std::find(raw_base.coords.begin(), raw_base.coords.end(), a.name) ==
            raw_base.coords.end())
            fail(Error::Code::Validation,
                 "map assigns unknown coordinate '" + a.name + "'", a.pos);
        if (!by_name.emplace(a.name, a.e).second)
            fail(Error::Code::Validation, "map assigns '" + a.name + "' twice", a.pos);
        check_bound(a.e, total_names, "map component for '" + a.name + "'");
    }
    for (const auto& c : raw_base.coords) {
        auto it = by_name.find(c);
        if (it == by_name.end())
            fail(Error::Code::Validation, "map does not assign base coordinate '" + c + "'");
        s.map.push_back(it->second);
    }

    return s;
}

std::string print_scenario(const ScenarioSpec& s) {
    std::ostringstream os;
    print_manifold(os, "total", s.total);
    print_manifold(os, "base", s.base);
    os << "map {\n";
    for (size_t i = 0; i < s.map.size(); ++i)
        os << "  " << s.base.coords[i] << " = " << to_string(*s.map[i]) << "\n";
    os << "}\n";
    os << "seed " << s.seed << "\n";
    os << "samples " << s.samples << "\n";
    if (!s.label.empty()) os << "label \"" << s.label << "\"\n";
    return os.str();
}

bool scenarios_equal(const ScenarioSpec& a, const ScenarioSpec& b) {
    if (!manifolds_equal(a.total, b.total) || !manifolds_equal(a.base, b.base)) return false;
    if (a.map.size() != b.map.size()) return false;
    for (size_t i = 0; i < a.map.size(); ++i)
        if (!structurally_equal(*a.map[i], *b.map[i])) return false;
    return a.seed == b.seed && a.samples == b.samples && a.label == b.label;
}

bool label_claims_submersion(const ScenarioSpec& s) {
    return s.label.find("submersion") != std::string::npos;
}

// ------------------------------------------------------------- builtins

namespace {

const char* kExample3 = R"scn(# Flat six-space fibered over flat three-space by paired averages.
total {
  dim 6
  coords x1 x2 x3 x4 x5 x6
  metric diag(1, 1, 1, 1, 1, 1)
  J rows [
    [0, -1, 0, 0, 0, 0]
    [1, 0, 0, 0, 0, 0]
    [0, 0, 0, -1, 0, 0]
    [0, 0, 1, 0, 0, 0]
    [0, 0, 0, 0, 0, -1]
    [0, 0, 0, 0, 1, 0]
  ]
}
base {
  dim 3
  coords y1 y2 y3
  metric diag(1, 1, 1)
}
map {
  y1 = (x1 + x2)/sqrt(2)
  y2 = (x3 + x5)/sqrt(2)
  y3 = (x4 + x6)/sqrt(2)
}
label "mixed-fiber submersion from flat six-space"
)scn";

const char* kAntiInvariantR2 = R"scn(# The flat plane projecting onto one axis; the fiber direction is
# rotated out of the fibers by J.
total {
  dim 2
  coords x1 x2
  metric diag(1, 1)
  J rows [
    [0, -1]
    [1, 0]
  ]
}
base {
  dim 1
  coords y1
  metric diag(1)
}
map {
  y1 = x2
}
label "anti-invariant submersion from the flat plane"
)scn";

const char* kInvariantR4 = R"scn(# Flat four-space onto flat two-space; fibers are complex lines, so the
# vertical distribution is J-invariant. Domains are left at the default.
total {
  dim 4
  coords x1 x2 x3 x4
  metric diag(1, 1, 1, 1)
  J rows [
    [0, -1, 0, 0]
    [1, 0, 0, 0]
    [0, 0, 0, -1]
    [0, 0, 1, 0]
  ]
}
base {
  dim 2
  coords y1 y2
  metric diag(1, 1)
}
map {
  y1 = x3
  y2 = x4
}
label "holomorphic submersion with complex-line fibers"
)scn";

const char* kGenericRotated = R"scn(# The fiber plane here meets J at a 45-degree angle: J maps neither into
# the fibers nor out of them, so the vertical splitting degenerates.
total {
  dim 6
  coords x1 x2 x3 x4 x5 x6
  metric diag(1, 1, 1, 1, 1, 1)
  J rows [
    [0, -1, 0, 0, 0, 0]
    [1, 0, 0, 0, 0, 0]
    [0, 0, 0, -1, 0, 0]
    [0, 0, 1, 0, 0, 0]
    [0, 0, 0, 0, 0, -1]
    [0, 0, 0, 0, 1, 0]
  ]
}
base {
  dim 4
  coords y1 y2 y3 y4
  metric diag(1, 1, 1, 1)
}
map {
  y1 = (x2 - x3)/sqrt(2)
  y2 = x4
  y3 = x5
  y4 = x6
}
label "submersion whose fibers sit at an angle to J"
)scn";

const char* kProductSpheres = R"scn(# A product of two projective-line charts, projecting onto the second
# factor. Fibers are the first factor: totally geodesic and J-invariant.
total {
  dim 4
  coords x1 x2 x3 x4
  metric diag(1/(1 + x1^2 + x2^2)^2, 1/(1 + x1^2 + x2^2)^2, 1/(1 + x3^2 + x4^2)^2, 1/(1 + x3^2 + x4^2)^2)
  J rows [
    [0, -1, 0, 0]
    [1, 0, 0, 0]
    [0, 0, 0, -1]
    [0, 0, 1, 0]
  ]
  domain x1 in (-0.9, 0.9) x2 in (-0.9, 0.9) x3 in (-0.9, 0.9) x4 in (-0.9, 0.9)
}
base {
  dim 2
  coords y1 y2
  metric diag(1/(1 + y1^2 + y2^2)^2, 1/(1 + y1^2 + y2^2)^2)
  domain y1 in (-0.9, 0.9) y2 in (-0.9, 0.9)
}
map {
  y1 = x3
  y2 = x4
}
label "product of projective-line factors, holomorphic submersion onto the second"
)scn";

const char* kCp1Spaceform = R"scn(# One projective-line chart paired with a placeholder projection; used to
# exercise constant-curvature fitting, not the submersion checks.
total {
  dim 2
  coords x1 x2
  metric diag(1/(1 + x1^2 + x2^2)^2, 1/(1 + x1^2 + x2^2)^2)
  J rows [
    [0, -1]
    [1, 0]
  ]
  domain x1 in (-0.9, 0.9) x2 in (-0.9, 0.9)
}
base {
  dim 1
  coords y1
  metric diag(1)
  domain y1 in (-0.9, 0.9)
}
map {
  y1 = x1
}
label "projective-line chart for curvature-constant fitting (map is a placeholder)"
)scn";

const char* kScaledFiber = R"scn(# A complex-hyperbolic chart (holomorphic sectional curvature -2) fibered
# over its height function. Fibers curve inside the total space and carry
# both a J-invariant plane and a direction rotated out by J.
total {
  dim 4
  coords x1 x2 x3 x4
  metric rows [
    [2*x4/(x4 - x1^2 - x2^2)^2, 0, -x2/(x4 - x1^2 - x2^2)^2, -x1/(x4 - x1^2 - x2^2)^2]
    [0, 2*x4/(x4 - x1^2 - x2^2)^2, x1/(x4 - x1^2 - x2^2)^2, -x2/(x4 - x1^2 - x2^2)^2]
    [-x2/(x4 - x1^2 - x2^2)^2, x1/(x4 - x1^2 - x2^2)^2, 1/(2*(x4 - x1^2 - x2^2)^2), 0]
    [-x1/(x4 - x1^2 - x2^2)^2, -x2/(x4 - x1^2 - x2^2)^2, 0, 1/(2*(x4 - x1^2 - x2^2)^2)]
  ]
  J rows [
    [0, -1, 0, 0]
    [1, 0, 0, 0]
    [0, 0, 0, -1]
    [0, 0, 1, 0]
  ]
  domain x1 in (-0.2, 0.2) x2 in (-0.2, 0.2) x3 in (-0.5, 0.5) x4 in (1, 2)
}
base {
  dim 1
  coords y1
  metric diag(1/(2*y1^2))
  domain y1 in (0.5, 2.5)
}
map {
  y1 = x4 - x1^2 - x2^2
}
label "complex-hyperbolic total space with curved fibers, submersion onto the height"
)scn";

const char* kUmbilicalWitness = R"scn(# Radius of a round four-space block times a flat factor: fibers are
# three-spheres, curved but umbilical, with mean curvature along the
# J-image of the distinguished fiber direction.
total {
  dim 6
  coords x1 x2 x3 x4 x5 x6
  metric diag(1, 1, 1, 1, 1, 1)
  J rows [
    [0, -1, 0, 0, 0, 0]
    [1, 0, 0, 0, 0, 0]
    [0, 0, 0, -1, 0, 0]
    [0, 0, 1, 0, 0, 0]
    [0, 0, 0, 0, 0, -1]
    [0, 0, 0, 0, 1, 0]
  ]
  domain x1 in (0.5, 1.5) x2 in (0.5, 1.5) x3 in (0.5, 1.5) x4 in (0.5, 1.5) x5 in (-1, 1) x6 in (-1, 1)
}
base {
  dim 3
  coords y1 y2 y3
  metric diag(1, 1, 1)
  domain y1 in (0.5, 3.5) y2 in (-1.5, 1.5) y3 in (-1.5, 1.5)
}
map {
  y1 = sqrt(x1^2 + x2^2 + x3^2 + x4^2)
  y2 = x5
  y3 = x6
}
label "spherical-fiber submersion with umbilical fibers"
)scn";

const char* kShearHorizontal = R"scn(# The quaternionic fibration over a scaled three-space. Fibers are circles
# rotated out of themselves by J; horizontal planes twist and refuse to
# integrate.
total {
  dim 4
  coords x1 x2 x3 x4
  metric diag(1, 1, 1, 1)
  J rows [
    [0, -1, 0, 0]
    [1, 0, 0, 0]
    [0, 0, 0, -1]
    [0, 0, 1, 0]
  ]
  domain x1 in (0.6, 1.1) x2 in (-0.25, 0.25) x3 in (-0.25, 0.25) x4 in (-0.25, 0.25)
}
base {
  dim 3
  coords y1 y2 y3
  metric diag(1/(4*sqrt(y1^2 + y2^2 + y3^2)), 1/(4*sqrt(y1^2 + y2^2 + y3^2)), 1/(4*sqrt(y1^2 + y2^2 + y3^2)))
  domain y1 in (0.15, 1.5) y2 in (-0.8, 0.8) y3 in (-0.8, 0.8)
}
map {
  y1 = x1^2 + x2^2 - x3^2 - x4^2
  y2 = 2*(x1*x3 + x2*x4)
  y3 = 2*(x1*x4 - x2*x3)
}
label "circle-fiber submersion with twisting horizontal planes"
)scn";

const std::map<std::string, const char*>& builtin_registry() {
    static const std::map<std::string, const char*> reg = {
        {"anti_invariant_r2", kAntiInvariantR2},
        {"cp1_spaceform", kCp1Spaceform},
        {"example3", kExample3},
        {"generic_rotated", kGenericRotated},
        {"invariant_r4", kInvariantR4},
        {"product_spheres", kProductSpheres},
        {"scaled_fiber", kScaledFiber},
        {"shear_horizontal", kShearHorizontal},
        {"umbilical_witness", kUmbilicalWitness},
    };
    return reg;
}

}  // namespace

ScenarioSpec builtin(const std::string& name) {
    return load_scenario(builtin_text(name));
}

const std::string& builtin_text(const std::string& name) {
    static std::map<std::string, std::string> cache;
    auto it = builtin_registry().find(name);
    if (it == builtin_registry().end())
        fail(Error::Code::UnknownScenario, "unknown builtin scenario '" + name + "'");
    return cache.emplace(name, it->second).first->second;
}

std::vector<std::string> builtin_names() {
    std::vector<std::string> names;
    for (const auto& [name, text] : builtin_registry()) names.push_back(name);
    return names;
}

}  // namespace oneill
