#include "cgvf/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "cgvf/errors.hpp"
#include "cgvf/gvf.hpp"

namespace cgvf::sim {

namespace {

constexpr std::size_t kMaxSamplingAttempts = 10000;
constexpr double kZoneFraction = 0.05;
constexpr double kMaxGapClosure = 0.75;

struct Slope {
  Vector dx;
  Vector domega;
};

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

bool is_broken_at(const SwarmConfig& config, int id, double t) {
  const double slack = 1e-9 * std::max(1.0, std::abs(t));
  for (const auto& b : config.breakdowns)
    if (b.robot == id && b.time <= t + slack) return true;
  return false;
}

PairDistance closest_alive_pair(const std::vector<RobotState>& states) {
  PairDistance best{std::numeric_limits<double>::infinity(), -1, -1};
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (!states[i].alive) continue;
    for (std::size_t k = i + 1; k < states.size(); ++k) {
      if (!states[k].alive) continue;
      const double d = distance(states[i].omega, states[k].omega);
      if (d < best.distance) best = {d, states[i].id, states[k].id};
    }
  }
  return best;
}

std::vector<Slope> slopes(const SwarmConfig& config, const std::vector<RobotState>& states, double t) {
  const auto u = controls(config, states, t);
  std::vector<Slope> out;
  out.reserve(u.size());
  for (const auto& c : u) out.push_back({c.u_x, c.u_omega});
  return out;
}

std::vector<RobotState> extrapolate(const std::vector<RobotState>& base, const std::vector<Slope>& slope,
                                    double h) {
  std::vector<RobotState> out = base;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!out[i].alive) continue;
    for (std::size_t j = 0; j < out[i].x.size(); ++j) out[i].x[j] += h * slope[i].dx[j];
    for (std::size_t l = 0; l < out[i].omega.size(); ++l) out[i].omega[l] += h * slope[i].domega[l];
  }
  return out;
}

std::vector<RobotState> rk4(const SwarmConfig& config, const std::vector<RobotState>& s, double t, double h) {
  const auto k1 = slopes(config, s, t);
  const auto k2 = slopes(config, extrapolate(s, k1, 0.5 * h), t + 0.5 * h);
  const auto k3 = slopes(config, extrapolate(s, k2, 0.5 * h), t + 0.5 * h);
  const auto k4 = slopes(config, extrapolate(s, k3, h), t + h);
  std::vector<RobotState> out = s;
  const double w = h / 6.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!out[i].alive) continue;
    for (std::size_t j = 0; j < out[i].x.size(); ++j)
      out[i].x[j] += w * (k1[i].dx[j] + 2.0 * k2[i].dx[j] + 2.0 * k3[i].dx[j] + k4[i].dx[j]);
    for (std::size_t l = 0; l < out[i].omega.size(); ++l)
      out[i].omega[l] +=
          w * (k1[i].domega[l] + 2.0 * k2[i].domega[l] + 2.0 * k3[i].domega[l] + k4[i].domega[l]);
  }
  return out;
}

bool finite_states(const std::vector<RobotState>& states) {
  return std::all_of(states.begin(), states.end(),
                     [](const RobotState& s) { return s.x.all_finite() && s.omega.all_finite(); });
}

// Returns the offending pair when the proposed states cross the barrier or
// close too much of a pair's remaining gap.
std::optional<PairDistance> unsafe_transition(const std::vector<RobotState>& before,
                                              const std::vector<RobotState>& after, double r) {
  for (std::size_t i = 0; i < after.size(); ++i) {
    if (!after[i].alive) continue;
    for (std::size_t k = i + 1; k < after.size(); ++k) {
      if (!after[k].alive) continue;
      const double d_new = distance(after[i].omega, after[k].omega);
      const double gap_old = distance(before[i].omega, before[k].omega) - r;
      const double gap_new = d_new - r;
      if (gap_new <= 0.0 || gap_new < (1.0 - kMaxGapClosure) * gap_old) {
        return PairDistance{d_new, after[i].id, after[k].id};
      }
    }
  }
  return std::nullopt;
}

class Integrator {
 public:
  Integrator(const SwarmConfig& config, StepStats* stats) : config_(config), stats_(stats) {
    const double r = config.safe_radius;
    zone_ = r + kZoneFraction * (config.sensing_radius - r);
  }

  std::vector<RobotState> advance(const std::vector<RobotState>& s, double t, double h, bool zone_check) {
    const bool can_halve = 0.5 * h >= config_.dt_min;
    if (zone_check && can_halve && closest_alive_pair(s).distance < zone_) return halves(s, t, h);

    std::vector<RobotState> next;
    std::optional<PairDistance> unsafe;
    try {
      next = rk4(config_, s, t, h);
    } catch (const BarrierViolation& e) {
      unsafe = PairDistance{e.distance(), e.robot_a(), e.robot_b()};
    }
    if (!unsafe) {
      if (!finite_states(next)) {
        if (can_halve) return halves(s, t, h);
        throw NumericFailure("non-finite state produced by the integration step at t = " + format_double(t));
      }
      unsafe = unsafe_transition(s, next, config_.safe_radius);
      if (!unsafe) {
        if (stats_) ++stats_->substeps;
        return next;
      }
      // Near-miss without crossing: accept once the step cannot shrink.
      if (!can_halve && unsafe->distance > config_.safe_radius) {
        if (stats_) ++stats_->substeps;
        return next;
      }
    }
    if (can_halve) return halves(s, t, h);
    throw BarrierViolation("barrier violated at t = " + format_double(t) + " between robots " +
                               std::to_string(unsafe->a) + " and " + std::to_string(unsafe->b) +
                               ": virtual-coordinate distance " + format_double(unsafe->distance) +
                               " <= safe radius " + format_double(config_.safe_radius),
                           unsafe->a, unsafe->b, unsafe->distance);
  }

 private:
  std::vector<RobotState> halves(const std::vector<RobotState>& s, double t, double h) {
    if (stats_) ++stats_->refinements;
    const double half = 0.5 * h;
    auto mid = advance(s, t, half, false);
    return advance(mid, t + half, half, false);
  }

  const SwarmConfig& config_;
  StepStats* stats_;
  double zone_ = 0.0;
};

}  // namespace

void SwarmConfig::validate() const {
  if (!manifold) throw ConfigError("no manifold configured");
  const std::size_t n = manifold->n();
  const std::size_t m = manifold->m();
  if (initial.empty()) throw ConfigError("at least one robot is required");
  std::set<int> ids;
  for (const auto& s : initial) {
    if (!ids.insert(s.id).second) throw ConfigError("duplicate robot id " + std::to_string(s.id));
    if (s.x.size() != n || s.omega.size() != m) {
      throw ConfigError("robot " + std::to_string(s.id) + ": expected position of dimension " + std::to_string(n) +
                        " and " + std::to_string(m) + " virtual coordinates");
    }
    if (!s.x.all_finite() || !s.omega.all_finite())
      throw ConfigError("robot " + std::to_string(s.id) + ": non-finite initial state");
  }
  if (gains.size() != initial.size() || attraction.size() != initial.size())
    throw ConfigError("gains must be given for every robot");
  for (std::size_t i = 0; i < initial.size(); ++i) {
    if (gains[i].size() != n) throw ConfigError("gain vector must have dimension " + std::to_string(n));
    for (double k : gains[i])
      if (!(k > 0.0) || !std::isfinite(k)) throw ConfigError("gains k must be strictly positive");
    if (!(attraction[i] > 0.0) || !std::isfinite(attraction[i]))
      throw ConfigError("attraction gain c must be strictly positive");
  }
  potential();
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("integrator dt must be positive");
  if (!(dt_min > 0.0) || dt_min > dt) throw ConfigError("integrator dt_min must satisfy 0 < dt_min <= dt");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw ConfigError("integrator t_end must be non-negative");
  if (target_omega0.size() != m)
    throw ConfigError("target omega0 must have dimension " + std::to_string(m));
  if (decimation == 0) throw ConfigError("output decimation must be at least 1");
  for (const auto& b : breakdowns) {
    if (!ids.count(b.robot)) throw ConfigError("breakdown refers to unknown robot " + std::to_string(b.robot));
    if (!(b.time >= 0.0)) throw ConfigError("breakdown time must be non-negative");
  }
  for (std::size_t i = 0; i < initial.size(); ++i) {
    for (std::size_t k = i + 1; k < initial.size(); ++k) {
      if (!initial[i].alive || !initial[k].alive) continue;
      const double d = distance(initial[i].omega, initial[k].omega);
      if (!(d > safe_radius)) {
        throw ConfigError("initial virtual coordinates of robots " + std::to_string(initial[i].id) + " and " +
                          std::to_string(initial[k].id) + " are " + format_double(d) +
                          " apart; initial separation must exceed the safe radius r = " +
                          format_double(safe_radius));
      }
    }
  }
}

std::size_t SwarmConfig::step_count() const {
  const double steps = t_end / dt;
  return static_cast<std::size_t>(std::ceil(steps - 1e-9 * std::max(1.0, steps)));
}

void set_uniform_gains(SwarmConfig& config, double k, double c) {
  const std::size_t n = config.manifold ? config.manifold->n() : 0;
  config.gains.assign(config.initial.size(), Vector(n, k));
  config.attraction.assign(config.initial.size(), c);
}

std::vector<RobotState> sample_initial_states(const ManifoldSpec& spec, std::size_t count, std::uint64_t seed,
                                              const SamplingBox& box, double min_separation) {
  if (!(box.x_hi > box.x_lo) || !(box.omega_hi > box.omega_lo)) throw ConfigError("sampling box is empty");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> xs(box.x_lo, box.x_hi);
  std::uniform_real_distribution<double> ws(box.omega_lo, box.omega_hi);

  std::vector<RobotState> out;
  for (std::size_t i = 0; i < count; ++i) {
    RobotState s;
    s.id = static_cast<int>(i + 1);
    s.x = Vector(spec.n());
    for (double& v : s.x) v = xs(rng);
    bool placed = false;
    for (std::size_t attempt = 0; attempt < kMaxSamplingAttempts && !placed; ++attempt) {
      s.omega = Vector(spec.m());
      for (double& v : s.omega) v = ws(rng);
      placed = std::all_of(out.begin(), out.end(),
                           [&](const RobotState& o) { return distance(o.omega, s.omega) > min_separation; });
    }
    if (!placed) {
      throw ConfigError("could not place robot " + std::to_string(s.id) + " with virtual-coordinate separation > " +
                        format_double(min_separation) + " after " + std::to_string(kMaxSamplingAttempts) +
                        " attempts; enlarge the sampling box");
    }
    out.push_back(std::move(s));
  }
  return out;
}

Vector target_omega(const SwarmConfig& config, double t) {
  const double sign = gvf::orientation_sign(config.manifold->n());
  Vector out = config.target_omega0;
  for (double& v : out) v += sign * t;
  return out;
}

std::vector<coord::ControlOutput> controls(const SwarmConfig& config, const std::vector<RobotState>& states,
                                           double t) {
  const ManifoldSpec& spec = *config.manifold;
  const auto pot = config.potential();
  const Vector target = target_omega(config, t);
  std::vector<coord::AgentOmega> agents;
  agents.reserve(states.size());
  for (const auto& s : states) agents.push_back({s.id, s.omega, s.alive});

  std::vector<coord::ControlOutput> out;
  out.reserve(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    const auto& s = states[i];
    if (!s.alive) {
      out.push_back({Vector(spec.n()), Vector(spec.m())});
      continue;
    }
    const auto view = coord::neighbor_set(agents, s.id, pot, target);
    try {
      out.push_back(coord::cgvf_control(spec, s.x, s.omega, view, config.gains[i], config.attraction[i], pot));
    } catch (const BarrierViolation& e) {
      throw BarrierViolation("robots " + std::to_string(s.id) + " and " + std::to_string(e.robot_b()) +
                                 " within safe radius at t = " + format_double(t) + " (distance " +
                                 format_double(e.distance()) + ")",
                             s.id, e.robot_b(), e.distance());
    }
  }
  return out;
}

LyapunovMonitor lyapunov(const SwarmConfig& config, const std::vector<RobotState>& states, double t) {
  const ManifoldSpec& spec = *config.manifold;
  const auto pot = config.potential();
  const Vector target = target_omega(config, t);
  LyapunovMonitor mon;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const auto& s = states[i];
    if (!s.alive) continue;
    const Vector err = phi(spec, s.x, s.omega);
    for (std::size_t j = 0; j < err.size(); ++j) mon.manifold_term += config.gains[i][j] * err[j] * err[j];
    const Vector track = s.omega - target;
    mon.tracking_term += config.attraction[i] * dot(track, track);
    for (std::size_t k = 0; k < states.size(); ++k) {
      if (k == i || !states[k].alive) continue;
      const double d = distance(s.omega, states[k].omega);
      if (!(d > pot.safe_radius())) {
        throw BarrierViolation("robots " + std::to_string(s.id) + " and " + std::to_string(states[k].id) +
                                   " within safe radius while evaluating the Lyapunov function",
                               s.id, states[k].id, d);
      }
      if (d <= pot.sensing_radius()) mon.barrier_term += pot.integral_to_sensing(d);
    }
  }
  mon.value = mon.manifold_term + mon.tracking_term + mon.barrier_term;
  return mon;
}

std::vector<RobotState> step(const SwarmConfig& config, const std::vector<RobotState>& states, double t,
                             StepStats* stats) {
  Integrator integrator(config, stats);
  return integrator.advance(states, t, config.dt, true);
}

std::vector<RobotState> SimulationTrace::states_at(std::size_t sample) const {
  std::vector<RobotState> out;
  out.reserve(robots.size());
  for (const auto& r : robots) out.push_back({r.id, r.x[sample], r.omega[sample], r.alive[sample] != 0});
  return out;
}

SimulationTrace run(const SwarmConfig& config) {
  config.validate();
  const ManifoldSpec& spec = *config.manifold;

  SimulationTrace trace;
  trace.manifold = spec.name();
  trace.n = spec.n();
  trace.m = spec.m();
  trace.safe_radius = config.safe_radius;
  trace.sensing_radius = config.sensing_radius;
  for (const auto& s : config.initial) trace.robots.push_back(RobotSeries{s.id, {}, {}, {}, {}, {}});

  auto record = [&](const std::vector<RobotState>& states, double t) {
    const auto u = controls(config, states, t);
    trace.times.push_back(t);
    trace.target.push_back(target_omega(config, t));
    trace.lyapunov.push_back(lyapunov(config, states, t));
    for (std::size_t i = 0; i < states.size(); ++i) {
      auto& series = trace.robots[i];
      series.x.push_back(states[i].x);
      series.omega.push_back(states[i].omega);
      series.omega_dot.push_back(u[i].u_omega);
      series.phi_norm.push_back(norm(phi(spec, states[i].x, states[i].omega)));
      series.alive.push_back(states[i].alive ? 1 : 0);
      if (states[i].alive && exceeds_partial_bound(spec.jacobian(states[i].omega)))
        trace.partial_bound_warning = true;
    }
  };

  StepStats stats;
  std::vector<RobotState> states = config.initial;
  const std::size_t steps = config.step_count();
  for (std::size_t k = 0;; ++k) {
    const double t = std::min(static_cast<double>(k) * config.dt, config.t_end);
    for (auto& s : states)
      if (s.alive && is_broken_at(config, s.id, t)) s.alive = false;
    if (k % config.decimation == 0 || k == steps) record(states, t);
    if (k == steps) break;
    const double t_next = std::min(static_cast<double>(k + 1) * config.dt, config.t_end);
    Integrator integrator(config, &stats);
    states = integrator.advance(states, t, t_next - t, true);
  }
  trace.refinements = stats.refinements;
  return trace;
}

PairDistance min_pair_distance(const SimulationTrace& trace, std::size_t sample) {
  PairDistance best{std::numeric_limits<double>::infinity(), -1, -1};
  for (std::size_t i = 0; i < trace.robots.size(); ++i) {
    if (!trace.robots[i].alive[sample]) continue;
    for (std::size_t k = i + 1; k < trace.robots.size(); ++k) {
      if (!trace.robots[k].alive[sample]) continue;
      const double d = distance(trace.robots[i].omega[sample], trace.robots[k].omega[sample]);
      if (d < best.distance) best = {d, trace.robots[i].id, trace.robots[k].id};
    }
  }
  return best;
}

PairDistance max_neighbor_distance(const SimulationTrace& trace, std::size_t sample) {
  PairDistance best{0.0, -1, -1};
  for (std::size_t i = 0; i < trace.robots.size(); ++i) {
    if (!trace.robots[i].alive[sample]) continue;
    for (std::size_t k = i + 1; k < trace.robots.size(); ++k) {
      if (!trace.robots[k].alive[sample]) continue;
      const double d = distance(trace.robots[i].omega[sample], trace.robots[k].omega[sample]);
      if (d <= trace.sensing_radius && d > best.distance) best = {d, trace.robots[i].id, trace.robots[k].id};
    }
  }
  return best;
}

std::size_t alive_count(const SimulationTrace& trace, std::size_t sample) {
  std::size_t count = 0;
  for (const auto& r : trace.robots) count += r.alive[sample] ? 1 : 0;
  return count;
}

Vector centroid_error(const SimulationTrace& trace, std::size_t sample) {
  Vector mean(trace.m);
  const std::size_t count = alive_count(trace, sample);
  if (count == 0) return mean;
  for (const auto& r : trace.robots)
    if (r.alive[sample]) mean += r.omega[sample];
  mean *= 1.0 / static_cast<double>(count);
  return mean - trace.target[sample];
}

std::vector<std::pair<int, int>> neighbor_signature(const SimulationTrace& trace, std::size_t sample) {
  std::vector<std::pair<int, int>> edges;
  for (std::size_t i = 0; i < trace.robots.size(); ++i) {
    if (!trace.robots[i].alive[sample]) continue;
    for (std::size_t k = i + 1; k < trace.robots.size(); ++k) {
      if (!trace.robots[k].alive[sample]) continue;
      if (distance(trace.robots[i].omega[sample], trace.robots[k].omega[sample]) <= trace.sensing_radius) {
        const int a = trace.robots[i].id, b = trace.robots[k].id;
        edges.emplace_back(std::min(a, b), std::max(a, b));
      }
    }
  }
  std::sort(edges.begin(), edges.end());
  return edges;
}

std::vector<std::vector<int>> ordering_signature(const SimulationTrace& trace, std::size_t sample) {
  std::vector<std::vector<int>> out;
  for (const auto& self : trace.robots) {
    if (!self.alive[sample]) continue;
    std::vector<std::pair<long long, int>> ranked;
    for (const auto& other : trace.robots) {
      if (other.id == self.id || !other.alive[sample]) continue;
      const double d = distance(self.omega[sample], other.omega[sample]);
      if (d <= trace.sensing_radius) ranked.emplace_back(std::llround(d * 1e4), other.id);
    }
    std::sort(ranked.begin(), ranked.end());
    std::vector<int> row{self.id};
    for (const auto& [_, id] : ranked) row.push_back(id);
    out.push_back(std::move(row));
  }
  return out;
}

ConditionReport check_conditions(const SimulationTrace& trace, const Tolerances& tol) {
  ConditionReport report;
  if (trace.samples() == 0) return report;
  const std::size_t last = trace.samples() - 1;
  const double t_end = trace.times[last];
  const Vector drift(trace.m, trace.sign());

  report.on_manifold = {true, 0.0, -1, -1, t_end};
  report.maneuvering = {true, 0.0, -1, -1, t_end};
  for (const auto& r : trace.robots) {
    if (!r.alive[last]) continue;
    if (r.phi_norm[last] >= report.on_manifold.witness) {
      report.on_manifold.witness = r.phi_norm[last];
      report.on_manifold.robot_a = r.id;
    }
    const double dev = norm(r.omega_dot[last] - drift);
    if (dev >= report.maneuvering.witness) {
      report.maneuvering.witness = dev;
      report.maneuvering.robot_a = r.id;
    }
  }
  report.on_manifold.pass = report.on_manifold.witness <= tol.phi;
  report.maneuvering.pass = report.maneuvering.witness <= tol.omega_dot;

  const double centroid = norm(centroid_error(trace, last));
  report.centroid = {centroid <= tol.centroid, centroid, -1, -1, t_end};

  ConditionCheck spacing{true, std::numeric_limits<double>::infinity(), -1, -1, 0.0};
  for (std::size_t s = 0; s < trace.samples(); ++s) {
    const PairDistance p = min_pair_distance(trace, s);
    if (p.distance < spacing.witness) spacing = {true, p.distance, p.a, p.b, trace.times[s]};
  }
  const PairDistance widest = max_neighbor_distance(trace, last);
  report.max_neighbor_distance = widest.distance;
  spacing.pass = spacing.witness > trace.safe_radius && widest.distance < trace.sensing_radius;
  report.spacing = spacing;
  return report;
}

DescentReport check_lyapunov_descent(const SimulationTrace& trace, double rel) {
  DescentReport report;
  report.worst_excess = -std::numeric_limits<double>::infinity();
  for (std::size_t s = 1; s < trace.samples(); ++s) {
    const double prev = trace.lyapunov[s - 1].value;
    const double excess = trace.lyapunov[s].value - prev - rel * std::max(1.0, prev);
    if (excess > report.worst_excess) {
      report.worst_excess = excess;
      report.at_time = trace.times[s];
    }
  }
  if (trace.samples() < 2) report.worst_excess = 0.0;
  report.monotone = !(report.worst_excess > 0.0);
  return report;
}

}  // namespace cgvf::sim
