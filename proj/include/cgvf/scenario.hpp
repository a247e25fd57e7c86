#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cgvf/sim.hpp"

namespace cgvf::scenario {

// A scenario file after validation. Example:
//
//   {
//     "name": "helicoid_case1",
//     "manifold": "helicoid3",
//     "robots": {"count": 7, "seed": 11, "box": {"x": [-10, 10], "omega": [-2, 2]}},
//     "gains": {"k": 0.7, "c": 20},
//     "radii": {"r": 0.4, "R": 1.6},
//     "integrator": {"dt": 0.001, "t_end": 30, "dt_min": 1e-6},
//     "target": {"omega0": [0, 0, 0]},
//     "breakdowns": [{"robot": 1, "time": 0.2}],
//     "outputs": {"csv": "run.csv", "json": "run.json", "decimation": 1},
//     "tolerances": {"phi": 0.01, "omega_dot": 0.01, "centroid": 0.01}
//   }
//
// "manifold" may instead be {"name": ..., "m": 2, "expressions": ["...", ...]}
// and "robots" may list {"id": 1, "x": [...], "omega": [...]} entries under
// "initial". Every section except "manifold" and "robots" is optional.
struct Scenario {
  std::string name;
  sim::SwarmConfig config;
  sim::Tolerances tolerances;
  std::string csv_path;
  std::string json_path;
  nlohmann::json document;
};

// Parses and validates scenario text. `overrides` are "dotted.path=value"
// assignments applied before validation; bare leaf names such as "t_end"
// resolve to their unique section. Throws ParseError (with line and column
// when the problem can be located in `text`) or ConfigError.
Scenario parse(std::string_view text, const std::string& fallback_name,
               const std::vector<std::string>& overrides = {});

// Reads `path_or_name`; a bare name without a file on disk is looked up as
// <name>.json in $CGVF_SCENARIO_DIR, then in the bundled scenarios folder.
Scenario load(const std::string& path_or_name, const std::vector<std::string>& overrides = {});
std::string resolve_path(const std::string& path_or_name);

// Applies one "a.b.c=value" assignment; value is parsed as JSON when
// possible and kept as a string otherwise.
void apply_override(nlohmann::json& doc, const std::string& assignment);

std::vector<std::string> bundled_names();

}  // namespace cgvf::scenario
