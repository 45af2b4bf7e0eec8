#pragma once

// Scenario files: a total space (with J), a base space, the map between
// them, and sampling options.
//
//   scenario := total base map option* ;
//   total    := "total" "{" "dim" INT "coords" IDENT+ "metric" matrix
//               "J" matrix ["domain" ranges] "}" ;
//   base     := "base"  "{" "dim" INT "coords" IDENT+ "metric" matrix
//               ["domain" ranges] "}" ;
//   map      := "map" "{" (IDENT "=" EXPR)+ "}" ;
//   matrix   := "diag" "(" EXPR ("," EXPR)* ")" | "rows" "[" row+ "]" ;
//   row      := "[" EXPR ("," EXPR)* "]" ;
//   ranges   := (IDENT "in" "(" NUM "," NUM ")")* ;
//   option   := "seed" INT | "samples" INT | "label" STRING ;
//
// Whitespace-insensitive, '#' comments. Domains default to (-2,2) per
// coordinate. "rows" metrics are validated numerically for symmetry at 8
// probe points (tolerance 1e-10) and stored upper-triangular.

#include <cstdint>
#include <string>
#include <vector>

#include "oneill/geometry.hpp"

namespace oneill {

struct ScenarioSpec {
    ManifoldSpec total;        // always carries J after validation
    ManifoldSpec base;
    std::vector<ExprPtr> map;  // one component per base coordinate, in base.coords order
    std::uint64_t seed = 42;
    int samples = 16;
    std::string label;
};

// Parse + full validation (dimension sanity, name resolution, symmetry
// probing, map completeness). Bad syntax raises Parse/Lex errors; violated
// invariants raise Validation (or MissingJ) errors naming the offender.
ScenarioSpec load_scenario(const std::string& text);

// Canonical reparseable form; load_scenario(print_scenario(s)) equals s.
std::string print_scenario(const ScenarioSpec& s);

bool scenarios_equal(const ScenarioSpec& a, const ScenarioSpec& b);

// Built-in registry. Names, sorted: anti_invariant_r2, cp1_spaceform,
// example3, generic_rotated, invariant_r4, product_spheres, scaled_fiber,
// shear_horizontal, umbilical_witness.
ScenarioSpec builtin(const std::string& name);
std::vector<std::string> builtin_names();
const std::string& builtin_text(const std::string& name);

// The scenario-suite convention: a label containing the word "submersion"
// asserts that the map really is one, and test gates rely on that.
bool label_claims_submersion(const ScenarioSpec& s);

}  // namespace oneill
