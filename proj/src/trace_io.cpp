#include "cgvf/trace_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>

#include "cgvf/errors.hpp"

namespace cgvf::io {

namespace {

nlohmann::json finite_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

nlohmann::json check_json(const sim::ConditionCheck& c) {
  nlohmann::json j{{"pass", c.pass}, {"witness", finite_or_null(c.witness)}, {"time", c.at_time}};
  if (c.robot_a >= 0) j["robot"] = c.robot_a;
  if (c.robot_b >= 0) j["pair"] = {c.robot_a, c.robot_b};
  return j;
}

std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  return out;
}

}  // namespace

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> csv_header(const sim::SimulationTrace& trace) {
  std::vector<std::string> cols{"t"};
  for (const auto& r : trace.robots) {
    const std::string id = std::to_string(r.id);
    for (std::size_t j = 1; j <= trace.n; ++j) cols.push_back("x" + id + "_" + std::to_string(j));
    for (std::size_t l = 1; l <= trace.m; ++l) cols.push_back("w" + id + "_" + std::to_string(l));
    cols.push_back("phi" + id);
  }
  for (std::size_t l = 1; l <= trace.m; ++l) cols.push_back("target_" + std::to_string(l));
  for (const char* c : {"centroid_error", "min_pair_distance", "max_neighbor_distance", "alive_count", "V",
                        "V_manifold", "V_tracking", "V_barrier"})
    cols.emplace_back(c);
  return cols;
}

void write_csv(const sim::SimulationTrace& trace, std::ostream& out) {
  const auto header = csv_header(trace);
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (std::size_t s = 0; s < trace.samples(); ++s) {
    out << format_full(trace.times[s]);
    for (const auto& r : trace.robots) {
      for (double v : r.x[s]) out << ',' << format_full(v);
      for (double v : r.omega[s]) out << ',' << format_full(v);
      out << ',' << format_full(r.phi_norm[s]);
    }
    for (double v : trace.target[s]) out << ',' << format_full(v);
    out << ',' << format_full(norm(sim::centroid_error(trace, s)));
    out << ',' << format_full(sim::min_pair_distance(trace, s).distance);
    out << ',' << format_full(sim::max_neighbor_distance(trace, s).distance);
    out << ',' << sim::alive_count(trace, s);
    const auto& v = trace.lyapunov[s];
    out << ',' << format_full(v.value) << ',' << format_full(v.manifold_term) << ','
        << format_full(v.tracking_term) << ',' << format_full(v.barrier_term) << '\n';
  }
}

void write_csv_file(const sim::SimulationTrace& trace, const std::string& path) {
  auto out = open_for_write(path);
  write_csv(trace, out);
}

nlohmann::json summary_json(const std::string& scenario, const sim::SimulationTrace& trace,
                            const sim::ConditionReport& report, const sim::DescentReport& descent) {
  const std::size_t last = trace.samples() == 0 ? 0 : trace.samples() - 1;
  double closest = std::numeric_limits<double>::infinity();
  int a = -1, b = -1;
  double closest_t = 0.0;
  for (std::size_t s = 0; s < trace.samples(); ++s) {
    const auto p = sim::min_pair_distance(trace, s);
    if (p.distance < closest) {
      closest = p.distance;
      a = p.a;
      b = p.b;
      closest_t = trace.times[s];
    }
  }
  nlohmann::json signature = nlohmann::json::array();
  std::vector<int> alive;
  if (trace.samples() > 0) {
    for (const auto& [i, k] : sim::neighbor_signature(trace, last)) signature.push_back({i, k});
    for (const auto& r : trace.robots)
      if (r.alive[last]) alive.push_back(r.id);
  }

  nlohmann::json doc;
  doc["scenario"] = scenario;
  doc["manifold"] = trace.manifold;
  doc["n"] = trace.n;
  doc["m"] = trace.m;
  doc["robots"] = trace.robots.size();
  doc["alive"] = alive;
  doc["samples"] = trace.samples();
  doc["t_end"] = trace.samples() ? trace.times[last] : 0.0;
  doc["conditions"] = {{"C1", check_json(report.on_manifold)},
                       {"C2", check_json(report.maneuvering)},
                       {"C3a", check_json(report.centroid)},
                       {"C3b", check_json(report.spacing)}};
  doc["conditions"]["C3b"]["max_neighbor_distance"] = report.max_neighbor_distance;
  doc["all_pass"] = report.all_pass();
  doc["min_pair_distance"] = {{"distance", finite_or_null(closest)}, {"pair", {a, b}}, {"time", closest_t}};
  doc["final_lyapunov"] = trace.samples() ? trace.lyapunov[last].value : 0.0;
  doc["lyapunov_descent"] = {{"monotone", descent.monotone},
                             {"worst_excess", finite_or_null(descent.worst_excess)},
                             {"time", descent.at_time}};
  doc["final_neighbor_signature"] = signature;
  doc["refinements"] = trace.refinements;
  doc["partial_bound_warning"] = trace.partial_bound_warning;
  return doc;
}

void write_json_file(const nlohmann::json& doc, const std::string& path) {
  auto out = open_for_write(path);
  out << doc.dump(2) << '\n';
}

}  // namespace cgvf::io
