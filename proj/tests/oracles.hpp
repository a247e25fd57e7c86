#pragma once

// Independent reference computations used only by tests. None of these
// share code paths with the library implementations they check.

#include <cmath>
#include <random>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "cgvf/linalg.hpp"

namespace oracle {

using Rows = std::vector<std::vector<double>>;

// Laplace expansion along the first row.
inline double laplace_det(const Rows& a) {
  const std::size_t n = a.size();
  if (n == 1) return a[0][0];
  double sum = 0.0;
  for (std::size_t c = 0; c < n; ++c) {
    Rows minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<double> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != c) row.push_back(a[r][k]);
      minor.push_back(row);
    }
    const double sign = (c % 2 == 0) ? 1.0 : -1.0;
    sum += sign * a[0][c] * laplace_det(minor);
  }
  return sum;
}

// Cross product via cofactors of the d x d matrix whose first row is the
// formal basis: component j is the cofactor C_{0j}.
inline std::vector<double> cofactor_cross(const Rows& vectors) {
  const std::size_t d = vectors.size() + 1;
  std::vector<double> out(d);
  for (std::size_t j = 0; j < d; ++j) {
    Rows minor;
    for (const auto& v : vectors) {
      std::vector<double> row;
      for (std::size_t k = 0; k < d; ++k)
        if (k != j) row.push_back(v[k]);
      minor.push_back(row);
    }
    out[j] = ((j % 2 == 0) ? 1.0 : -1.0) * (minor.empty() ? 1.0 : laplace_det(minor));
  }
  return out;
}

inline Rows to_rows(const std::vector<cgvf::Vector>& vs) {
  Rows out;
  for (const auto& v : vs) out.push_back(v.raw());
  return out;
}

// Integral of (s - R)^2 / (s - r)^2 over [a, b] by adaptive Gauss-Kronrod.
inline double alpha_quadrature(double a, double b, double r, double R) {
  auto f = [=](double s) {
    const double q = (s - R) / (s - r);
    return q * q;
  };
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 20, 1e-14);
}

inline double central_difference(const auto& f, double x, double h) { return (f(x + h) - f(x - h)) / (2.0 * h); }

inline cgvf::Vector random_vector(std::size_t d, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  cgvf::Vector v(d);
  for (double& x : v) x = dist(rng);
  return v;
}

inline cgvf::Matrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng, double lo = -1.0,
                                  double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  cgvf::Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = dist(rng);
  return m;
}

}  // namespace oracle
