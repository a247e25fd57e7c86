#pragma once

#include <span>
#include <vector>

#include "cgvf/linalg.hpp"
#include "cgvf/manifold.hpp"

namespace cgvf::gvf {

// (-1)^n, the constant every virtual-coordinate entry of the propagation
// term takes under the feasible auxiliary vectors.
inline double orientation_sign(std::size_t n) { return n % 2 == 0 ? 1.0 : -1.0; }

/// The m-1 auxiliary vectors in R^{n+m} that decouple the propagation term.
/// Vector k (0-based) is zero in its first n entries, -1 at entry n and +1
/// at entry n+k+1. Empty when m == 1.
std::vector<Vector> feasible_aux_vectors(std::size_t n, std::size_t m);

// Generalized cross product of the n gradients of phi followed by `aux`,
// computed from minors. Only used as a test oracle and for coupling demos.
Vector propagation_bruteforce(const ManifoldSpec& spec, const Vector& omega, std::span<const Vector> aux);

/// Propagation term under the feasible auxiliary vectors:
///   entry j < n        : (-1)^n * sum_l d f_j / d w_l
///   entries n..n+m-1   : (-1)^n
Vector propagation_closed_form(const ManifoldSpec& spec, const Vector& omega);
Vector propagation_closed_form(const Matrix& partials);

// Brute-force propagation term for an n x m partial-derivative matrix and
// arbitrary (possibly infeasible) auxiliary vectors.
Vector coupling_demo(const Matrix& partials, std::span<const Vector> aux);

struct GvfField {
  Vector propagation;
  Vector convergence;
  Vector total;
  Vector gains;
};

// Replicates a scalar gain across all n ambient coordinates.
Vector uniform_gains(std::size_t n, double k);

// Higher-dimensional field at (x, w): closed-form propagation plus the
// convergence term -sum_j k_j phi_j grad(phi_j). Throws ConfigError on a
// non-positive gain.
GvfField hgvf(const ManifoldSpec& spec, const Vector& x, const Vector& omega, const Vector& gains);

}  // namespace cgvf::gvf
