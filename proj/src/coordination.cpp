#include "cgvf/coordination.hpp"

#include <cmath>
#include <string>

#include "cgvf/errors.hpp"
#include "cgvf/gvf.hpp"

namespace cgvf::coord {

namespace {

constexpr int kUnknownRobot = -1;

[[noreturn]] void barrier_failure(double s, double r, int other_id) {
  throw BarrierViolation("virtual-coordinate distance " + std::to_string(s) + " is within the safe radius " +
                             std::to_string(r) + (other_id == kUnknownRobot
                                                      ? std::string()
                                                      : " (neighbor " + std::to_string(other_id) + ")"),
                         kUnknownRobot, other_id, s);
}

}  // namespace

AlphaPotential::AlphaPotential(double safe_radius, double sensing_radius) : r_(safe_radius), R_(sensing_radius) {
  if (!(r_ > 0.0) || !(R_ > r_) || !std::isfinite(R_)) {
    throw ConfigError("radii must satisfy 0 < r < R (got r = " + std::to_string(r_) +
                      ", R = " + std::to_string(R_) + ")");
  }
}

double AlphaPotential::value(double s) const {
  if (!(s > r_)) barrier_failure(s, r_, kUnknownRobot);
  if (s > R_) return 0.0;
  const double ratio = (s - R_) / (s - r_);
  return ratio * ratio;
}

double AlphaPotential::derivative(double s) const {
  if (!(s > r_)) barrier_failure(s, r_, kUnknownRobot);
  if (s > R_) return 0.0;
  const double gap = s - r_;
  return 2.0 * (s - R_) * (R_ - r_) / (gap * gap * gap);
}

double AlphaPotential::antiderivative(double s) const {
  const double w = r_ - R_;
  return s + 2.0 * w * std::log(s - r_) - w * w / (s - r_);
}

double AlphaPotential::integral_to_sensing(double s) const {
  if (!(s > r_)) barrier_failure(s, r_, kUnknownRobot);
  if (s >= R_) return 0.0;
  return antiderivative(R_) - antiderivative(s);
}

NeighborView neighbor_set(std::span<const AgentOmega> agents, int self_id, const AlphaPotential& pot,
                          const Vector& target_omega) {
  const AgentOmega* self = nullptr;
  for (const auto& a : agents) {
    if (a.id == self_id) {
      self = &a;
      break;
    }
  }
  if (self == nullptr) throw ConfigError("neighbor_set: robot " + std::to_string(self_id) + " is not in the swarm");

  NeighborView view;
  view.target_omega = target_omega;
  for (const auto& a : agents) {
    if (a.id == self_id || !a.alive) continue;
    if (distance(self->omega, a.omega) <= pot.sensing_radius()) view.neighbors.push_back({a.id, a.omega});
  }
  return view;
}

Vector repulsion(const Vector& self_omega, const Vector& other_omega, const AlphaPotential& pot, int other_id) {
  Vector diff = self_omega - other_omega;
  const double s = norm(diff);
  if (!(s > pot.safe_radius())) barrier_failure(s, pot.safe_radius(), other_id);
  return (pot.value(s) / s) * diff;
}

Vector delta(const Vector& self_omega, const NeighborView& view, double c, const AlphaPotential& pot) {
  if (self_omega.size() != view.target_omega.size()) {
    throw DimensionError("delta: robot and target virtual coordinates differ in dimension");
  }
  Vector out = -c * (self_omega - view.target_omega);
  for (const auto& nb : view.neighbors) out += repulsion(self_omega, nb.omega, pot, nb.id);
  return out;
}

ControlOutput cgvf_control(const ManifoldSpec& spec, const Vector& x, const Vector& omega,
                           const NeighborView& view, const Vector& gains, double c, const AlphaPotential& pot) {
  const std::size_t n = spec.n();
  const std::size_t m = spec.m();
  if (gains.size() != n) throw DimensionError("cgvf_control: expected " + std::to_string(n) + " gains");
  const double sign = gvf::orientation_sign(n);
  const Vector err = phi(spec, x, omega);
  const Matrix partials = spec.jacobian(omega);
  const Vector d = delta(omega, view, c, pot);

  ControlOutput out{Vector(n), Vector(m)};
  for (std::size_t j = 0; j < n; ++j) {
    double sum = 0.0;
    for (std::size_t l = 0; l < m; ++l) sum += partials(j, l);
    out.u_x[j] = sign * sum - gains[j] * err[j];
  }
  for (std::size_t l = 0; l < m; ++l) {
    double coupling = 0.0;
    for (std::size_t j = 0; j < n; ++j) coupling += gains[j] * err[j] * partials(j, l);
    out.u_omega[l] = sign + coupling + d[l];
  }
  return out;
}

}  // namespace cgvf::coord
