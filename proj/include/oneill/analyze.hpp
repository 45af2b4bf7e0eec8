#pragma once

// The check catalog and the driver the CLI runs. One scenario in, the full
// battery of reports out, alphabetical by check name so output diffs stay
// stable as the catalog grows.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "oneill/report.hpp"
#include "oneill/scenario.hpp"
#include "oneill/semiinv.hpp"

namespace oneill {

// Chart-level wrappers over the geometry kernels. They run on both charts of
// the scenario (base points drawn with the same seed) and fold the worst
// residual.
CheckReport check_christoffel_symmetry(const ScenarioSpec& s,
                                       const std::vector<std::vector<double>>& pts_total,
                                       const std::vector<std::vector<double>>& pts_base,
                                       double tol_scale = 1.0);
CheckReport check_connection_torsion(const ScenarioSpec& s,
                                     const std::vector<std::vector<double>>& pts_total,
                                     const std::vector<std::vector<double>>& pts_base,
                                     double tol_scale = 1.0);
CheckReport check_connection_metric_compat(const ScenarioSpec& s,
                                           const std::vector<std::vector<double>>& pts_total,
                                           const std::vector<std::vector<double>>& pts_base,
                                           double tol_scale = 1.0);
CheckReport check_curvature_symmetries(const ScenarioSpec& s,
                                       const std::vector<std::vector<double>>& pts_total,
                                       const std::vector<std::vector<double>>& pts_base,
                                       double tol_scale = 1.0);

// Parallel-J test of the total chart: worst |(nabla_x J)y| over seeded pairs.
CheckReport check_kaehler(const ScenarioSpec& s, const std::vector<std::vector<double>>& pts,
                          double tol_scale = 1.0);

// Constant-holomorphic-curvature fit of the total chart. Not applicable when
// the residual says the model does not fit; the fitted constant is reported
// either way in the details.
CheckReport check_space_form_fit(const ScenarioSpec& s,
                                 const std::vector<std::vector<double>>& pts, std::uint64_t seed,
                                 double tol_scale = 1.0);

struct AnalyzeOptions {
    std::optional<int> samples;          // default: the scenario's own count
    std::optional<std::uint64_t> seed;   // default: the scenario's own seed
    double tol_scale = 1.0;
};

struct AnalysisResult {
    std::string name;   // display name: builtin key or file path
    std::string label;
    int total_dim = 0;
    int base_dim = 0;
    int samples = 0;
    std::uint64_t seed = 0;
    Classification classification;
    std::vector<CheckReport> checks;  // full catalog, alphabetical
};

// The catalog names in the order run_analysis emits them.
const std::vector<std::string>& catalog_names();

AnalysisResult run_analysis(const ScenarioSpec& s, const std::string& display_name,
                            const AnalyzeOptions& opts = {});

std::string classification_line(const Classification& c);

// Human-readable table (status words colored when color = true) and
// line-delimited machine records, one JSON object per check.
void render_table(std::ostream& os, const AnalysisResult& r, bool color);
void render_json_lines(std::ostream& os, const AnalysisResult& r);

}  // namespace oneill
