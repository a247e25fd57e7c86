#include "cgvf/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "cgvf/errors.hpp"
#include "cgvf/expr.hpp"

namespace cgvf {

namespace {

constexpr std::size_t kValidationSamples = 16;
constexpr unsigned kValidationSeed = 0x5eed;

ManifoldSpec make_helicoid() {
  auto eval = [](const Vector& w) {
    const double radius = 4.0 + 3.0 * std::cos(w[0]);
    return Vector{radius * std::cos(w[1]), radius * std::sin(w[1]), w[0] + std::sin(w[1] + w[2])};
  };
  auto jacobian = [](const Vector& w) {
    const double radius = 4.0 + 3.0 * std::cos(w[0]);
    const double s1 = std::sin(w[0]);
    const double c2 = std::cos(w[1]);
    const double s2 = std::sin(w[1]);
    const double c23 = std::cos(w[1] + w[2]);
    return Matrix{{-3.0 * s1 * c2, -radius * s2, 0.0},
                  {-3.0 * s1 * s2, radius * c2, 0.0},
                  {1.0, c23, c23}};
  };
  return ManifoldSpec::analytic("helicoid3", 3, 3, eval, jacobian);
}

ManifoldSpec make_torus3in4() {
  auto eval = [](const Vector& w) {
    const double radius = 6.0 + 3.0 * std::cos(w[0]);
    return Vector{radius * std::cos(w[1]), radius * std::sin(w[1]), 3.0 * std::sin(w[1]) * std::cos(w[2]),
                  3.0 * std::sin(w[1]) * std::sin(w[2])};
  };
  auto jacobian = [](const Vector& w) {
    const double radius = 6.0 + 3.0 * std::cos(w[0]);
    const double s1 = std::sin(w[0]);
    const double c2 = std::cos(w[1]), s2 = std::sin(w[1]);
    const double c3 = std::cos(w[2]), s3 = std::sin(w[2]);
    return Matrix{{-3.0 * s1 * c2, -radius * s2, 0.0},
                  {-3.0 * s1 * s2, radius * c2, 0.0},
                  {0.0, 3.0 * c2 * c3, -3.0 * s2 * s3},
                  {0.0, 3.0 * c2 * s3, 3.0 * s2 * c3}};
  };
  return ManifoldSpec::analytic("torus3in4", 4, 3, eval, jacobian);
}

ManifoldSpec make_circle() {
  auto eval = [](const Vector& w) { return Vector{std::cos(w[0]), std::sin(w[0])}; };
  auto jacobian = [](const Vector& w) { return Matrix{{-std::sin(w[0])}, {std::cos(w[0])}}; };
  return ManifoldSpec::analytic("circle2", 2, 1, eval, jacobian);
}

}  // namespace

ManifoldSpec::ManifoldSpec(std::string name, std::size_t n, std::size_t m, EvalFn eval, JacobianFn jacobian,
                           bool analytic)
    : name_(std::move(name)), n_(n), m_(m), eval_(std::move(eval)), jacobian_(std::move(jacobian)),
      analytic_(analytic) {
  if (n_ == 0 || m_ == 0) throw ConfigError("manifold '" + name_ + "': n and m must be positive");
}

ManifoldSpec ManifoldSpec::analytic(std::string name, std::size_t n, std::size_t m, EvalFn eval,
                                    JacobianFn jacobian) {
  ManifoldSpec spec(std::move(name), n, m, std::move(eval), std::move(jacobian), true);
  std::mt19937_64 rng(kValidationSeed);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  for (std::size_t s = 0; s < kValidationSamples; ++s) {
    Vector w(m);
    for (double& v : w) v = angle(rng);
    const Vector value = spec.eval(w);
    const Matrix exact = spec.jacobian(w);
    if (value.size() != n || exact.rows() != n || exact.cols() != m) {
      throw ConfigError("manifold '" + spec.name_ + "': evaluation returned wrong dimensions");
    }
    if (!value.all_finite()) throw ConfigError("manifold '" + spec.name_ + "': non-finite evaluation");
    const Matrix approx = central_difference_jacobian(spec.eval_, n, w, 1e-5);
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t l = 0; l < m; ++l) {
        const double tol = 1e-5 * std::max(1.0, std::abs(exact(j, l)));
        if (!std::isfinite(exact(j, l)) || std::abs(exact(j, l) - approx(j, l)) > tol) {
          throw ConfigError("manifold '" + spec.name_ + "': analytic partial d f_" + std::to_string(j + 1) +
                            "/d w_" + std::to_string(l + 1) + " disagrees with finite differences (" +
                            std::to_string(exact(j, l)) + " vs " + std::to_string(approx(j, l)) + ")");
        }
      }
    }
  }
  return spec;
}

ManifoldSpec ManifoldSpec::finite_difference(std::string name, std::size_t n, std::size_t m, EvalFn eval) {
  auto jacobian = [eval, n](const Vector& w) { return central_difference_jacobian(eval, n, w); };
  return ManifoldSpec(std::move(name), n, m, eval, jacobian, false);
}

ManifoldSpec ManifoldSpec::from_expressions(std::string name, std::size_t m,
                                            const std::vector<std::string>& formulas) {
  if (formulas.empty()) throw ConfigError("manifold '" + name + "': no formulas given");
  std::vector<expr::Expr> f;
  for (const auto& text : formulas) {
    expr::Expr e = expr::parse(text);
    if (e.arity() > m) {
      throw ConfigError("manifold '" + name + "': formula \"" + text + "\" uses w" + std::to_string(e.arity()) +
                        " but m = " + std::to_string(m));
    }
    f.push_back(std::move(e));
  }
  std::vector<expr::Expr> df;
  for (const auto& e : f)
    for (std::size_t l = 0; l < m; ++l) df.push_back(e.derivative(l));

  const std::size_t n = f.size();
  auto eval = [f](const Vector& w) {
    Vector out(f.size());
    for (std::size_t j = 0; j < f.size(); ++j) out[j] = f[j].evaluate(w.values());
    return out;
  };
  auto jacobian = [df, n, m](const Vector& w) {
    Matrix out(n, m);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t l = 0; l < m; ++l) out(j, l) = df[j * m + l].evaluate(w.values());
    return out;
  };
  return analytic(std::move(name), n, m, eval, jacobian);
}

void ManifoldSpec::check_omega(const Vector& omega) const {
  if (omega.size() != m_) {
    throw DimensionError("manifold '" + name_ + "': expected " + std::to_string(m_) +
                         " virtual coordinates, got " + std::to_string(omega.size()));
  }
}

Vector ManifoldSpec::eval(const Vector& omega) const {
  check_omega(omega);
  return eval_(omega);
}

Matrix ManifoldSpec::jacobian(const Vector& omega) const {
  check_omega(omega);
  return jacobian_(omega);
}

double ManifoldSpec::partial(const Vector& omega, std::size_t j, std::size_t l) const {
  if (j >= n_ || l >= m_) throw IndexError("partial: index out of range");
  return jacobian(omega)(j, l);
}

Matrix central_difference_jacobian(const ManifoldSpec::EvalFn& eval, std::size_t n, const Vector& omega,
                                   double step_scale) {
  Matrix out(n, omega.size());
  Vector probe = omega;
  for (std::size_t l = 0; l < omega.size(); ++l) {
    const double h = step_scale * std::max(1.0, std::abs(omega[l]));
    probe[l] = omega[l] + h;
    const Vector plus = eval(probe);
    probe[l] = omega[l] - h;
    const Vector minus = eval(probe);
    probe[l] = omega[l];
    for (std::size_t j = 0; j < n; ++j) out(j, l) = (plus[j] - minus[j]) / (2.0 * h);
  }
  return out;
}

double max_partial_discrepancy(const ManifoldSpec& spec, std::size_t samples, double h, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  auto eval = [&spec](const Vector& w) { return spec.eval(w); };
  double worst = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    Vector w(spec.m());
    for (double& v : w) v = angle(rng);
    const Matrix exact = spec.jacobian(w);
    Matrix approx(spec.n(), spec.m());
    Vector probe = w;
    for (std::size_t l = 0; l < spec.m(); ++l) {
      probe[l] = w[l] + h;
      const Vector plus = eval(probe);
      probe[l] = w[l] - h;
      const Vector minus = eval(probe);
      probe[l] = w[l];
      for (std::size_t j = 0; j < spec.n(); ++j) approx(j, l) = (plus[j] - minus[j]) / (2.0 * h);
    }
    for (std::size_t j = 0; j < spec.n(); ++j)
      for (std::size_t l = 0; l < spec.m(); ++l) worst = std::max(worst, std::abs(exact(j, l) - approx(j, l)));
  }
  return worst;
}

Vector phi(const ManifoldSpec& spec, const Vector& x, const Vector& omega) {
  if (x.size() != spec.n()) {
    throw DimensionError("phi: expected position of dimension " + std::to_string(spec.n()) + ", got " +
                         std::to_string(x.size()));
  }
  return x - spec.eval(omega);
}

Vector gradient_phi(const ManifoldSpec& spec, const Vector& omega, std::size_t j) {
  if (j >= spec.n()) {
    throw IndexError("gradient_phi: index " + std::to_string(j) + " out of range for n = " +
                     std::to_string(spec.n()));
  }
  const Matrix jac = spec.jacobian(omega);
  Vector grad(spec.n() + spec.m());
  grad[j] = 1.0;
  for (std::size_t l = 0; l < spec.m(); ++l) grad[spec.n() + l] = -jac(j, l);
  return grad;
}

bool exceeds_partial_bound(const Matrix& jacobian) {
  for (std::size_t j = 0; j < jacobian.rows(); ++j)
    for (std::size_t l = 0; l < jacobian.cols(); ++l)
      if (!(std::abs(jacobian(j, l)) <= kPartialBoundGuard)) return true;
  return false;
}

std::vector<std::string> builtin_names() { return {"circle2", "helicoid3", "torus3in4"}; }

std::shared_ptr<const ManifoldSpec> builtin(const std::string& name) {
  static const auto helicoid = std::make_shared<const ManifoldSpec>(make_helicoid());
  static const auto torus = std::make_shared<const ManifoldSpec>(make_torus3in4());
  static const auto circle = std::make_shared<const ManifoldSpec>(make_circle());
  if (name == "helicoid3") return helicoid;
  if (name == "torus3in4") return torus;
  if (name == "circle2") return circle;
  std::string available;
  for (const auto& n : builtin_names()) available += (available.empty() ? "" : ", ") + n;
  throw NotFoundError("unknown manifold '" + name + "' (available: " + available + ")");
}

}  // namespace cgvf
