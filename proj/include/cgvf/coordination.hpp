#pragma once

#include <span>
#include <vector>

#include "cgvf/linalg.hpp"
#include "cgvf/manifold.hpp"

namespace cgvf::coord {

/// Barrier potential on virtual-coordinate distances:
///
///   alpha(s) = (s - R)^2 / (s - r)^2   for s in (r, R]
///   alpha(s) = 0                       for s > R
///
/// Strictly decreasing on (r, R), unbounded as s -> r+, and C^1 at R.
class AlphaPotential {
 public:
  // Throws ConfigError unless 0 < r < R.
  AlphaPotential(double safe_radius, double sensing_radius);

  double safe_radius() const { return r_; }
  double sensing_radius() const { return R_; }

  // Both throw BarrierViolation for s <= r.
  double value(double s) const;
  double derivative(double s) const;

  // Integral of alpha from s to R (zero for s >= R), via the antiderivative
  // s + 2 (r - R) ln(s - r) - (r - R)^2 / (s - r).
  double integral_to_sensing(double s) const;

 private:
  double antiderivative(double s) const;

  double r_;
  double R_;
};

struct AgentOmega {
  int id;
  Vector omega;
  bool alive = true;
};

struct Neighbor {
  int id;
  Vector omega;
};

struct NeighborView {
  std::vector<Neighbor> neighbors;
  Vector target_omega;
};

struct ControlOutput {
  Vector u_x;
  Vector u_omega;
};

// Alive robots k != self with ||w_self - w_k|| <= R. Throws ConfigError
// when self_id is absent.
NeighborView neighbor_set(std::span<const AgentOmega> agents, int self_id, const AlphaPotential& pot,
                          const Vector& target_omega);

// Repulsion that neighbor k exerts on robot i:
//   alpha(||w_i - w_k||) (w_i - w_k) / ||w_i - w_k||
Vector repulsion(const Vector& self_omega, const Vector& other_omega, const AlphaPotential& pot, int other_id);

// delta_i = -c (w_i - w_*) + sum_k repulsion(w_i, w_k). Throws
// BarrierViolation when any neighbor sits at distance <= r.
Vector delta(const Vector& self_omega, const NeighborView& view, double c, const AlphaPotential& pot);

/// Coordinated GVF control law, evaluated entry by entry:
///
///   u_j     = (-1)^n sum_l df_j/dw_l - k_j phi_j
///   u^w_l   = (-1)^n + sum_j k_j phi_j df_j/dw_l + delta_l
ControlOutput cgvf_control(const ManifoldSpec& spec, const Vector& x, const Vector& omega,
                           const NeighborView& view, const Vector& gains, double c, const AlphaPotential& pot);

}  // namespace cgvf::coord
