#include "cgvf/gvf.hpp"

#include <string>

#include "cgvf/errors.hpp"

namespace cgvf::gvf {

namespace {

std::vector<Vector> gradient_rows(const Matrix& partials) {
  const std::size_t n = partials.rows();
  const std::size_t m = partials.cols();
  std::vector<Vector> rows;
  rows.reserve(n + m - 1);
  for (std::size_t j = 0; j < n; ++j) {
    Vector grad(n + m);
    grad[j] = 1.0;
    for (std::size_t l = 0; l < m; ++l) grad[n + l] = -partials(j, l);
    rows.push_back(std::move(grad));
  }
  return rows;
}

void check_gains(const Vector& gains, std::size_t n) {
  if (gains.size() != n) {
    throw DimensionError("hgvf: expected " + std::to_string(n) + " gains, got " + std::to_string(gains.size()));
  }
  for (double k : gains) {
    if (!(k > 0.0)) throw ConfigError("hgvf: gains must be strictly positive, got " + std::to_string(k));
  }
}

}  // namespace

std::vector<Vector> feasible_aux_vectors(std::size_t n, std::size_t m) {
  if (n == 0 || m == 0) throw ConfigError("feasible_aux_vectors: n and m must be positive");
  std::vector<Vector> aux;
  for (std::size_t k = 0; k + 1 < m; ++k) {
    Vector v(n + m);
    v[n] = -1.0;
    v[n + k + 1] = 1.0;
    aux.push_back(std::move(v));
  }
  return aux;
}

Vector coupling_demo(const Matrix& partials, std::span<const Vector> aux) {
  const std::size_t n = partials.rows();
  const std::size_t m = partials.cols();
  if (n == 0 || m == 0) throw DimensionError("coupling_demo: empty partial-derivative matrix");
  if (aux.size() != m - 1) {
    throw DimensionError("coupling_demo: expected " + std::to_string(m - 1) + " auxiliary vectors, got " +
                         std::to_string(aux.size()));
  }
  std::vector<Vector> rows = gradient_rows(partials);
  for (const Vector& v : aux) {
    if (v.size() != n + m) {
      throw DimensionError("coupling_demo: auxiliary vectors must have dimension " + std::to_string(n + m));
    }
    rows.push_back(v);
  }
  return generalized_cross(rows);
}

Vector propagation_bruteforce(const ManifoldSpec& spec, const Vector& omega, std::span<const Vector> aux) {
  return coupling_demo(spec.jacobian(omega), aux);
}

Vector propagation_closed_form(const Matrix& partials) {
  const std::size_t n = partials.rows();
  const std::size_t m = partials.cols();
  const double sign = orientation_sign(n);
  Vector out(n + m, sign);
  for (std::size_t j = 0; j < n; ++j) {
    double sum = 0.0;
    for (std::size_t l = 0; l < m; ++l) sum += partials(j, l);
    out[j] = sign * sum;
  }
  return out;
}

Vector propagation_closed_form(const ManifoldSpec& spec, const Vector& omega) {
  return propagation_closed_form(spec.jacobian(omega));
}

Vector uniform_gains(std::size_t n, double k) { return Vector(n, k); }

GvfField hgvf(const ManifoldSpec& spec, const Vector& x, const Vector& omega, const Vector& gains) {
  const std::size_t n = spec.n();
  const std::size_t m = spec.m();
  check_gains(gains, n);
  const Vector err = phi(spec, x, omega);
  const Matrix partials = spec.jacobian(omega);

  Vector convergence(n + m);
  for (std::size_t j = 0; j < n; ++j) {
    const double weighted = gains[j] * err[j];
    convergence[j] = -weighted;
    for (std::size_t l = 0; l < m; ++l) convergence[n + l] += weighted * partials(j, l);
  }
  Vector propagation = propagation_closed_form(partials);
  Vector total = propagation + convergence;
  return GvfField{std::move(propagation), std::move(convergence), std::move(total), gains};
}

}  // namespace cgvf::gvf
