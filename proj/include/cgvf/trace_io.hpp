#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "cgvf/sim.hpp"

namespace cgvf::io {

/// CSV trace layout, one row per recorded sample, all floats printed with
/// %.17g:
///
///   t,
///   for each robot id in configuration order:
///     x<id>_1 .. x<id>_n, w<id>_1 .. w<id>_m, phi<id>,
///   target_1 .. target_m, centroid_error, min_pair_distance,
///   max_neighbor_distance, alive_count, V, V_manifold, V_tracking, V_barrier
///
/// min_pair_distance is "inf" while fewer than two robots are alive.
std::vector<std::string> csv_header(const sim::SimulationTrace& trace);
void write_csv(const sim::SimulationTrace& trace, std::ostream& out);
void write_csv_file(const sim::SimulationTrace& trace, const std::string& path);

// Summary with the condition report, closest approach, final V and the
// final neighbor signature.
nlohmann::json summary_json(const std::string& scenario, const sim::SimulationTrace& trace,
                            const sim::ConditionReport& report, const sim::DescentReport& descent);
void write_json_file(const nlohmann::json& doc, const std::string& path);

std::string format_full(double v);

}  // namespace cgvf::io
