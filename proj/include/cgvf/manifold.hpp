#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "cgvf/linalg.hpp"

namespace cgvf {

// Desired m-dimensional manifold in R^n given by a parametrization
// f: R^m -> R^n. The implicit errors are phi_j(x, w) = x_j - f_j(w).
//
// Instances are immutable and shared between robots and threads.
class ManifoldSpec {
 public:
  using EvalFn = std::function<Vector(const Vector&)>;
  // Returns the n x m Jacobian; entry (j, l) is d f_j / d w_l.
  using JacobianFn = std::function<Matrix(const Vector&)>;

  // Analytic partials are cross-checked against central differences on
  // sampled points; a mismatch throws ConfigError.
  static ManifoldSpec analytic(std::string name, std::size_t n, std::size_t m, EvalFn eval,
                               JacobianFn jacobian);
  // Partials come from central differences with step 1e-6 * max(1, |w_l|).
  static ManifoldSpec finite_difference(std::string name, std::size_t n, std::size_t m, EvalFn eval);
  // One formula per ambient coordinate, in the variables w1..wm.
  // Differentiated symbolically.
  static ManifoldSpec from_expressions(std::string name, std::size_t m,
                                       const std::vector<std::string>& formulas);

  const std::string& name() const { return name_; }
  std::size_t n() const { return n_; }
  std::size_t m() const { return m_; }
  bool has_analytic_partials() const { return analytic_; }

  Vector eval(const Vector& omega) const;
  Matrix jacobian(const Vector& omega) const;
  // d f_j / d w_l, 0-based indices.
  double partial(const Vector& omega, std::size_t j, std::size_t l) const;

 private:
  ManifoldSpec(std::string name, std::size_t n, std::size_t m, EvalFn eval, JacobianFn jacobian,
               bool analytic);
  void check_omega(const Vector& omega) const;

  std::string name_;
  std::size_t n_ = 0;
  std::size_t m_ = 0;
  EvalFn eval_;
  JacobianFn jacobian_;
  bool analytic_ = false;
};

// Partials larger than this are reported as a suspected violation of the
// bounded-derivative assumption.
inline constexpr double kPartialBoundGuard = 1e6;

Matrix central_difference_jacobian(const ManifoldSpec::EvalFn& eval, std::size_t n, const Vector& omega,
                                   double step_scale = 1e-6);

// Largest |analytic - central difference| over `samples` random points in
// [-pi, pi]^m, using a fixed step h.
double max_partial_discrepancy(const ManifoldSpec& spec, std::size_t samples, double h, unsigned seed);

// x - f(w). Throws DimensionError on mismatched inputs.
Vector phi(const ManifoldSpec& spec, const Vector& x, const Vector& omega);

// Gradient of phi_j in R^{n+m}: e_j in the first n entries followed by
// -d f_j / d w_1 .. -d f_j / d w_m. `j` is 0-based; throws IndexError.
Vector gradient_phi(const ManifoldSpec& spec, const Vector& omega, std::size_t j);

bool exceeds_partial_bound(const Matrix& jacobian);

// Built-in manifolds: helicoid3 (n=3, m=3), torus3in4 (n=4, m=3),
// circle2 (n=2, m=1). Throws NotFoundError listing the available names.
std::shared_ptr<const ManifoldSpec> builtin(const std::string& name);
std::vector<std::string> builtin_names();

}  // namespace cgvf
