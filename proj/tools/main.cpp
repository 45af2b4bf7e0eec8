// Command-line front end: classify scenarios, run the check catalog, and
// verify the whole built-in registry. Exit codes: 0 all PASS/NOT-APPLICABLE,
// 1 any FAIL or THEOREM-VIOLATION, 2 bad input text, 3 numerical degeneracy.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>

#include <unistd.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "oneill/analyze.hpp"
#include "oneill/errors.hpp"
#include "oneill/geometry.hpp"
#include "oneill/scenario.hpp"

namespace {

using namespace oneill;

int exit_for(Error::Code c) {
    switch (c) {
        case Error::Code::Lex:
        case Error::Code::Parse:
        case Error::Code::Validation:
        case Error::Code::UnknownScenario:
        case Error::Code::MissingJ:
            return 2;
        default:
            return 3;
    }
}

// "builtin:NAME" loads from the registry, anything else is a file path.
std::pair<ScenarioSpec, std::string> load_arg(const std::string& arg) {
    if (arg.rfind("builtin:", 0) == 0) {
        std::string name = arg.substr(8);
        return {builtin(name), name};
    }
    std::ifstream in(arg);
    if (!in)
        throw Error(Error::Code::Validation, "cannot open scenario file '" + arg + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return {load_scenario(ss.str()), arg};
}

bool want_color(bool json) {
    return !json && isatty(STDOUT_FILENO) && std::getenv("NO_COLOR") == nullptr;
}

int aggregate_exit(const AnalysisResult& r) {
    for (const auto& c : r.checks)
        if (c.status == Status::Fail || c.status == Status::TheoremViolation) return 1;
    return 0;
}

struct CommonOpts {
    std::string scenario;
    int samples = 0;          // 0 = use the scenario's own
    std::uint64_t seed = 0;   // only applied when seed_set
    bool seed_set = false;
    double tol_scale = 1.0;
    bool json = false;

    AnalyzeOptions analyze() const {
        AnalyzeOptions a;
        if (samples > 0) a.samples = samples;
        if (seed_set) a.seed = seed;
        a.tol_scale = tol_scale;
        return a;
    }
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_scenario) {
    if (with_scenario)
        cmd->add_option("scenario", o.scenario, "scenario file path or builtin:NAME")
            ->required();
    cmd->add_option("--samples", o.samples, "sample points per chart (default: scenario's own)");
    cmd->add_option("--seed", o.seed, "sampling seed (default: scenario's own)")
        ->trigger_on_parse()
        ->each([&o](const std::string&) { o.seed_set = true; });
    cmd->add_option("--tol-scale", o.tol_scale,
                    "multiply every base tolerance (exploratory use)");
    cmd->add_flag("--json", o.json, "line-delimited machine output, one record per check");
}

int run_classify(const CommonOpts& o) {
    auto [s, name] = load_arg(o.scenario);
    int n = o.samples > 0 ? o.samples : s.samples;
    std::uint64_t seed = o.seed_set ? o.seed : s.seed;
    Classification cls = classify(s, sample_points(s.total, n, seed));
    if (o.json) {
        nlohmann::ordered_json j;
        j["scenario"] = name;
        j["classification"] = to_string(cls.kind);
        j["dimD1"] = cls.dim_d1;
        j["dimD2"] = cls.dim_d2;
        j["dimMu"] = cls.dim_mu;
        j["worst_spectrum_gap"] = cls.worst_spectrum_gap;
        std::cout << j.dump() << "\n";
    } else {
        std::cout << classification_line(cls) << "\n";
    }
    return 0;
}

int run_analyze(const CommonOpts& o) {
    auto [s, name] = load_arg(o.scenario);
    AnalysisResult r = run_analysis(s, name, o.analyze());
    if (o.json) render_json_lines(std::cout, r);
    else render_table(std::cout, r, want_color(o.json));
    return aggregate_exit(r);
}

int run_verify(const CommonOpts& o) {
    int worst = 0;
    int pass = 0, fail = 0, na = 0, tv = 0;
    bool color = want_color(o.json);
    bool first = true;
    for (const auto& name : builtin_names()) {
        AnalysisResult r = run_analysis(builtin(name), name, o.analyze());
        if (o.json) {
            render_json_lines(std::cout, r);
        } else {
            if (!first) std::cout << "\n";
            render_table(std::cout, r, color);
        }
        first = false;
        for (const auto& c : r.checks) {
            switch (c.status) {
                case Status::Pass: ++pass; break;
                case Status::Fail: ++fail; break;
                case Status::NotApplicable: ++na; break;
                case Status::TheoremViolation: ++tv; break;
            }
        }
        worst = std::max(worst, aggregate_exit(r));
    }
    if (!o.json) {
        std::cout << "\nSUITE " << builtin_names().size() << " scenarios, "
                  << (pass + fail + na + tv) << " checks: " << pass << " PASS, " << fail
                  << " FAIL, " << na << " NOT-APPLICABLE, " << tv << " THEOREM-VIOLATION\n";
    }
    return worst;
}

int run_list() {
    for (const auto& name : builtin_names()) {
        ScenarioSpec s = builtin(name);
        std::cout << name << "  (" << s.total.dim << " -> " << s.base.dim << ")  " << s.label
                  << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical analyzer for almost-Hermitian Riemannian submersions"};
    app.require_subcommand(1);

    CommonOpts copts;
    CLI::App* classify_cmd =
        app.add_subcommand("classify", "print the vertical-distribution classification");
    add_common(classify_cmd, copts, true);

    CLI::App* analyze_cmd = app.add_subcommand("analyze", "run the full check catalog");
    add_common(analyze_cmd, copts, true);

    CLI::App* verify_cmd = app.add_subcommand("verify", "run the catalog over the registry");
    bool suite = false;
    verify_cmd->add_flag("--suite", suite, "verify every built-in scenario");
    add_common(verify_cmd, copts, false);

    CLI::App* list_cmd = app.add_subcommand("list", "print the built-in registry");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (classify_cmd->parsed()) return run_classify(copts);
        if (analyze_cmd->parsed()) return run_analyze(copts);
        if (verify_cmd->parsed()) {
            if (!suite) {
                std::cerr << "error: verify requires --suite\n";
                return 2;
            }
            return run_verify(copts);
        }
        if (list_cmd->parsed()) return run_list();
    } catch (const oneill::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_for(e.code);
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
