// cgvf: simulate coordinated guiding-vector-field swarms on parametric
// manifolds and run the propagation-term verification suites.
//
// Exit codes:
//   0  success (simulate: all conditions met)
//   1  simulate: run finished but a condition failed
//   2  bad arguments, scenario parse or configuration error
//   3  barrier violation during simulation
//   4  numeric failure during simulation
//   5  verify-lemma1: brute force and closed form disagree

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cgvf/errors.hpp"
#include "cgvf/scenario.hpp"
#include "cgvf/sim.hpp"
#include "cgvf/trace_io.hpp"
#include "cgvf/verify.hpp"

namespace {

enum ExitCode : int {
  kOk = 0,
  kConditionsFailed = 1,
  kConfigError = 2,
  kBarrierViolation = 3,
  kNumericFailure = 4,
  kLemmaMismatch = 5,
};

std::string fmt(double v, const char* spec = "%.6g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string vec_str(const cgvf::Vector& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i] + 0.0, "%.6g");
  return s + "]";
}

std::string output_path(const std::string& explicit_path, const std::string& scenario_path,
                        const std::string& name, const char* ext) {
  if (!explicit_path.empty()) return explicit_path;
  if (!scenario_path.empty()) return scenario_path;
  const char* dir = std::getenv("CGVF_OUTPUT_DIR");
  const std::filesystem::path base = dir && *dir ? dir : ".";
  return (base / (name + ext)).string();
}

void print_check(const char* label, const cgvf::sim::ConditionCheck& c, const std::string& detail) {
  std::cout << "  " << label << "  " << (c.pass ? "PASS" : "FAIL") << "  " << detail << '\n';
}

int cmd_simulate(const std::string& file, const std::vector<std::string>& overrides, const std::string& csv,
                 const std::string& json) {
  using namespace cgvf;
  scenario::Scenario sc;
  try {
    sc = scenario::load(file, overrides);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const ConfigError& e) {
    std::cerr << "error: invalid scenario: " << e.what() << '\n';
    return kConfigError;
  }

  sim::SimulationTrace trace;
  try {
    trace = sim::run(sc.config);
  } catch (const BarrierViolation& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBarrierViolation;
  } catch (const NumericFailure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumericFailure;
  }

  const auto report = sim::check_conditions(trace, sc.tolerances);
  const auto descent = sim::check_lyapunov_descent(trace);
  const std::string csv_path = output_path(csv, sc.csv_path, sc.name, ".csv");
  const std::string json_path = output_path(json, sc.json_path, sc.name, ".json");
  try {
    io::write_csv_file(trace, csv_path);
    io::write_json_file(io::summary_json(sc.name, trace, report, descent), json_path);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  }

  const auto last = trace.samples() - 1;
  std::cout << "scenario " << sc.name << ": " << trace.manifold << " (n=" << trace.n << ", m=" << trace.m << "), "
            << sim::alive_count(trace, last) << "/" << trace.robots.size() << " robots alive at t="
            << fmt(trace.times[last]) << '\n';
  print_check("C1 ", report.on_manifold,
              "max |Phi_i| = " + fmt(report.on_manifold.witness) + " (tol " + fmt(sc.tolerances.phi) + ")");
  print_check("C2 ", report.maneuvering,
              "max |dw_i/dt - (-1)^n 1| = " + fmt(report.maneuvering.witness) + " (tol " +
                  fmt(sc.tolerances.omega_dot) + ")");
  print_check("C3a", report.centroid,
              "|mean w - w_*| = " + fmt(report.centroid.witness) + " (tol " + fmt(sc.tolerances.centroid) + ")");
  print_check("C3b", report.spacing,
              "min pair distance = " + fmt(report.spacing.witness) + " (robots " +
                  std::to_string(report.spacing.robot_a) + "," + std::to_string(report.spacing.robot_b) +
                  "), max neighbor distance = " + fmt(report.max_neighbor_distance));
  std::cout << "  V(t_end) = " << fmt(trace.lyapunov[last].value) << ", descent "
            << (descent.monotone ? "monotone" : "VIOLATED at t=" + fmt(descent.at_time)) << '\n';
  if (trace.partial_bound_warning) std::cout << "  warning: manifold partials exceeded 1e6\n";
  std::cout << "  trace: " << csv_path << "\n  summary: " << json_path << '\n';
  return report.all_pass() ? kOk : kConditionsFailed;
}

int cmd_verify_lemma1(std::size_t n_max, std::size_t m_max, std::size_t trials, std::uint64_t seed) {
  using namespace cgvf;
  verify::Lemma1Report report;
  try {
    report = verify::verify_lemma1(n_max, m_max, trials, seed);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  }
  std::cout << "propagation term: brute-force cross product vs closed form, " << trials
            << " trials per cell, partials in [-5, 5]\n\n     ";
  for (std::size_t m = 1; m <= m_max; ++m) std::cout << "  m=" << m << "                  ";
  std::cout << '\n';
  for (std::size_t n = 1; n <= n_max; ++n) {
    std::cout << "n=" << n << "  ";
    for (const auto& cell : report.cells) {
      if (cell.n != n) continue;
      std::cout << "  " << (cell.pass() ? "pass" : "FAIL") << " rel=" << fmt(cell.max_relative_error, "%.1e")
                << " tail=" << fmt(cell.max_tail_deviation, "%.0e");
    }
    std::cout << '\n';
  }
  if (report.first_failure) {
    const auto& f = *report.first_failure;
    nlohmann::json doc;
    doc["n"] = f.n;
    doc["m"] = f.m;
    doc["reason"] = f.reason;
    doc["partials"] = nlohmann::json::array();
    for (std::size_t j = 0; j < f.partials.rows(); ++j) doc["partials"].push_back(f.partials.row(j).raw());
    doc["bruteforce"] = f.bruteforce.raw();
    doc["closed_form"] = f.closed_form.raw();
    std::cout << "\nmismatch: " << doc.dump() << '\n';
    return kLemmaMismatch;
  }
  std::cout << "\nall " << report.cells.size() << " cells pass\n";
  return kOk;
}

int cmd_coupling_demo(std::size_t draws, std::uint64_t seed) {
  using namespace cgvf;
  const auto report = verify::coupling_report(draws, seed);
  std::cout << "n=3, m=3; last three entries of the propagation term\n"
            << "infeasible aux = {[1,1,0,0,0,0], [0,0,0,0,1,1]}, feasible aux = {[0,0,0,-1,1,0], [0,0,0,-1,0,1]}\n"
            << "printed formulas: p4 = f12 - f13 + f22 - f23, p5 = p6 = f11 + f21\n\n";
  auto row = [](const char* label, const verify::CouplingRow& r) {
    std::cout << label << "infeasible " << vec_str(r.infeasible_tail) << "  printed " << vec_str(r.printed_tail)
              << "  feasible " << vec_str(r.feasible_tail) << '\n';
  };
  row("all partials = 1:  ", report.ones);
  row("all partials = 0:  ", report.zeros);
  std::cout << '\n';
  for (std::size_t i = 0; i < report.draws.size(); ++i) row(("draw " + std::to_string(i + 1) + ":  ").c_str(), report.draws[i]);
  if (!report.draws.empty()) {
    std::cout << "\nstd-dev over draws: infeasible " << vec_str(report.infeasible_stddev) << ", feasible "
              << vec_str(report.feasible_stddev) << '\n';
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coordinated guiding-vector-field swarm simulator"};
  app.require_subcommand(1);

  std::string file, csv, json;
  std::vector<std::string> overrides;
  auto* simulate = app.add_subcommand("simulate", "Run a scenario file or bundled scenario name");
  simulate->add_option("scenario", file, "Scenario JSON path or bundled name")->required();
  simulate->add_option("--set,--override", overrides, "Override a scenario value, e.g. integrator.dt=5e-4");
  simulate->add_option("--csv", csv, "Trace CSV path");
  simulate->add_option("--json", json, "Summary JSON path");

  std::size_t n_max = 4, m_max = 3, trials = 50;
  std::uint64_t seed = 1;
  auto* lemma = app.add_subcommand("verify-lemma1", "Check the closed-form propagation term against brute force");
  lemma->add_option("--n-max", n_max, "Largest ambient dimension n")->capture_default_str();
  lemma->add_option("--m-max", m_max, "Largest manifold dimension m")->capture_default_str();
  lemma->add_option("--trials", trials, "Random draws per (n, m)")->capture_default_str();
  lemma->add_option("--seed", seed, "RNG seed")->capture_default_str();

  std::size_t draws = 20;
  std::uint64_t demo_seed = 1;
  auto* demo = app.add_subcommand("coupling-demo", "Show infeasible vs feasible auxiliary vectors");
  demo->add_option("--draws", draws, "Random partial-derivative draws")->capture_default_str();
  demo->add_option("--seed", demo_seed, "RNG seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  if (simulate->parsed()) return cmd_simulate(file, overrides, csv, json);
  if (lemma->parsed()) return cmd_verify_lemma1(n_max, m_max, trials, seed);
  if (demo->parsed()) return cmd_coupling_demo(draws, demo_seed);
  return kConfigError;
}
