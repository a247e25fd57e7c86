#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "cgvf/coordination.hpp"
#include "cgvf/linalg.hpp"
#include "cgvf/manifold.hpp"

namespace cgvf::sim {

struct RobotState {
  int id = 0;
  Vector x;
  Vector omega;
  bool alive = true;

  friend bool operator==(const RobotState&, const RobotState&) = default;
};

struct Breakdown {
  int robot = 0;
  double time = 0.0;
};

// Axis-aligned sampling box for seeded initial conditions.
struct SamplingBox {
  double x_lo = -10.0;
  double x_hi = 10.0;
  double omega_lo = -2.0;
  double omega_hi = 2.0;
};

struct SwarmConfig {
  std::shared_ptr<const ManifoldSpec> manifold;
  std::vector<RobotState> initial;
  // One gain vector (dimension n) and one attraction gain per robot, in
  // the order of `initial`.
  std::vector<Vector> gains;
  std::vector<double> attraction;
  double safe_radius = 0.4;
  double sensing_radius = 1.6;
  double dt = 1e-3;
  double t_end = 30.0;
  double dt_min = 1e-6;
  Vector target_omega0;
  std::vector<Breakdown> breakdowns;
  std::size_t decimation = 1;

  // Throws ConfigError when an invariant fails, including pairwise initial
  // virtual-coordinate separation greater than r.
  void validate() const;
  coord::AlphaPotential potential() const { return {safe_radius, sensing_radius}; }
  std::size_t robot_count() const { return initial.size(); }
  std::size_t step_count() const;
};

// Uniform gains k (replicated n times) and c for every robot.
void set_uniform_gains(SwarmConfig& config, double k, double c);

// Robots 1..count with positions and virtual coordinates drawn uniformly
// from `box`, redrawing virtual coordinates until every pair is farther
// apart than `min_separation`. Throws ConfigError after 10^4 attempts.
std::vector<RobotState> sample_initial_states(const ManifoldSpec& spec, std::size_t count, std::uint64_t seed,
                                              const SamplingBox& box, double min_separation);

// w_*(t) = w_*(0) + (-1)^n t 1_m.
Vector target_omega(const SwarmConfig& config, double t);

struct LyapunovMonitor {
  double value = 0.0;
  double manifold_term = 0.0;  // sum Phi^T K Phi
  double tracking_term = 0.0;  // sum c |w - w_*|^2
  double barrier_term = 0.0;   // sum over ordered neighbor pairs of int_d^R alpha
};

/// Lyapunov candidate over the alive robots:
///
///   V = sum_i Phi_i^T K_i Phi_i + c_i |w_i - w_*|^2
///     + sum_i sum_{k in N_i} int_{|w_i - w_k|}^R alpha(s) ds
///
/// Throws BarrierViolation when a pair sits within the safe radius.
LyapunovMonitor lyapunov(const SwarmConfig& config, const std::vector<RobotState>& states, double t);

// Control outputs for every robot against one snapshot; broken robots get
// zero commands.
std::vector<coord::ControlOutput> controls(const SwarmConfig& config, const std::vector<RobotState>& states,
                                           double t);

struct StepStats {
  std::size_t substeps = 0;
  std::size_t refinements = 0;
};

/// Advances alive robots from t to t + dt with classical RK4. Steps are
/// halved (not below dt_min) when a pair is within r + 0.05 (R - r), when a
/// stage crosses the barrier, or when a pair would close more than 75% of
/// its remaining gap to r in one step. Broken robots are left untouched.
/// Throws BarrierViolation (with time and pair) or NumericFailure.
std::vector<RobotState> step(const SwarmConfig& config, const std::vector<RobotState>& states, double t,
                             StepStats* stats = nullptr);

struct RobotSeries {
  int id = 0;
  std::vector<Vector> x;
  std::vector<Vector> omega;
  std::vector<Vector> omega_dot;
  std::vector<double> phi_norm;
  std::vector<char> alive;
};

struct SimulationTrace {
  std::string manifold;
  std::size_t n = 0;
  std::size_t m = 0;
  double safe_radius = 0.0;
  double sensing_radius = 0.0;
  std::vector<double> times;
  std::vector<RobotSeries> robots;
  std::vector<Vector> target;
  std::vector<LyapunovMonitor> lyapunov;
  std::size_t refinements = 0;
  bool partial_bound_warning = false;

  std::size_t samples() const { return times.size(); }
  double sign() const { return n % 2 == 0 ? 1.0 : -1.0; }
  std::vector<RobotState> states_at(std::size_t sample) const;
};

// Integrates to t_end, recording every `decimation`-th step plus the final
// state. Breakdowns take effect at the first step time >= their schedule.
SimulationTrace run(const SwarmConfig& config);

struct PairDistance {
  double distance = 0.0;
  int a = -1;
  int b = -1;
};

// Aggregates of one recorded sample over alive robots.
PairDistance min_pair_distance(const SimulationTrace& trace, std::size_t sample);
PairDistance max_neighbor_distance(const SimulationTrace& trace, std::size_t sample);
Vector centroid_error(const SimulationTrace& trace, std::size_t sample);
std::size_t alive_count(const SimulationTrace& trace, std::size_t sample);

// Sorted (lower id, higher id) pairs of alive robots within R at a sample.
std::vector<std::pair<int, int>> neighbor_signature(const SimulationTrace& trace, std::size_t sample);

// For each alive robot (in configuration order): its id followed by its
// neighbors' ids ordered by distance. Distances are compared after rounding
// to 1e-4 so numerically tied neighbors fall back to id order. Two runs
// whose robots settle into different arrangements differ here even when
// every robot senses every other.
std::vector<std::vector<int>> ordering_signature(const SimulationTrace& trace, std::size_t sample);

struct Tolerances {
  double phi = 1e-2;
  double omega_dot = 1e-2;
  double centroid = 1e-2;
};

struct ConditionCheck {
  bool pass = false;
  double witness = 0.0;
  int robot_a = -1;
  int robot_b = -1;
  double at_time = 0.0;
};

struct ConditionReport {
  ConditionCheck on_manifold;         // C1: max_i |Phi_i(t_end)|
  ConditionCheck maneuvering;         // C2: max_i |dw_i/dt - (-1)^n 1|
  ConditionCheck centroid;            // C3a: |mean alive w - w_*|
  ConditionCheck spacing;             // C3b: min pair distance over the run
  double max_neighbor_distance = 0.0;  // at t_end, reported with C3b
  bool all_pass() const { return on_manifold.pass && maneuvering.pass && centroid.pass && spacing.pass; }
};

ConditionReport check_conditions(const SimulationTrace& trace, const Tolerances& tol = {});

struct DescentReport {
  bool monotone = true;
  // Largest V(t_{k+1}) - V(t_k) - rel * max(1, V(t_k)) over the trace.
  double worst_excess = 0.0;
  double at_time = 0.0;
};

// Discrete descent of the recorded Lyapunov values with slack
// rel * max(1, V(t_k)) per recorded step.
DescentReport check_lyapunov_descent(const SimulationTrace& trace, double rel = 1e-6);

}  // namespace cgvf::sim
