#include <doctest.h>

#include <random>

#include "cgvf/errors.hpp"
#include "cgvf/gvf.hpp"
#include "cgvf/verify.hpp"
#include "oracles.hpp"

using namespace cgvf;

namespace {

Vector tail(const Vector& v, std::size_t count) {
  return Vector(std::vector<double>(v.end() - static_cast<std::ptrdiff_t>(count), v.end()));
}

ManifoldSpec random_polynomial_manifold(std::size_t n, std::size_t m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  std::vector<std::string> formulas;
  for (std::size_t j = 0; j < n; ++j) {
    std::string f = std::to_string(coef(rng));
    for (std::size_t l = 1; l <= m; ++l) {
      f += " + " + std::to_string(coef(rng)) + "*sin(w" + std::to_string(l) + ")";
      f += " + " + std::to_string(coef(rng)) + "*w" + std::to_string(l) + "^2";
    }
    formulas.push_back(f);
  }
  return ManifoldSpec::from_expressions("poly", m, formulas);
}

}  // namespace

TEST_CASE("feasible auxiliary vectors follow the decoupling pattern") {
  const auto aux = gvf::feasible_aux_vectors(3, 3);
  REQUIRE(aux.size() == 2);
  CHECK(aux[0] == Vector{0, 0, 0, -1, 1, 0});
  CHECK(aux[1] == Vector{0, 0, 0, -1, 0, 1});
  CHECK(gvf::feasible_aux_vectors(5, 1).empty());
  CHECK(gvf::feasible_aux_vectors(1, 2) == std::vector<Vector>{Vector{0, -1, 1}});
  CHECK_THROWS_AS(gvf::feasible_aux_vectors(0, 2), ConfigError);
}

TEST_CASE("propagation on the unit circle") {
  const auto circle = builtin("circle2");
  const Vector brute = gvf::propagation_bruteforce(*circle, Vector{0.0}, {});
  const Vector closed = gvf::propagation_closed_form(*circle, Vector{0.0});
  CHECK(brute == Vector{0, 1, 1});
  CHECK(closed == Vector{0, 1, 1});
}

TEST_CASE("closed form on fixed partials") {
  CHECK(gvf::propagation_closed_form(Matrix(2, 2, 1.0)) == Vector{2, 2, 1, 1});
  CHECK(gvf::coupling_demo(Matrix(2, 2, 1.0), gvf::feasible_aux_vectors(2, 2)) == Vector{2, 2, 1, 1});
  CHECK(gvf::propagation_closed_form(Matrix(3, 2, 0.0)) == Vector{0, 0, 0, -1, -1});

  const auto helicoid = builtin("helicoid3");
  const Vector at_origin = gvf::propagation_closed_form(*helicoid, Vector{0, 0, 0});
  CHECK(at_origin[2] == -3.0);
  CHECK(tail(at_origin, 3) == Vector{-1, -1, -1});
  const Vector brute = gvf::propagation_bruteforce(*helicoid, Vector{0, 0, 0}, gvf::feasible_aux_vectors(3, 3));
  CHECK(max_abs(brute - at_origin) <= 1e-12);
}

TEST_CASE("constant manifolds propagate purely along the virtual coordinates") {
  for (std::size_t n = 1; n <= 4; ++n) {
    for (std::size_t m = 1; m <= 3; ++m) {
      const Vector brute = gvf::coupling_demo(Matrix(n, m, 0.0), gvf::feasible_aux_vectors(n, m));
      Vector expected(n + m, 0.0);
      for (std::size_t l = 0; l < m; ++l) expected[n + l] = gvf::orientation_sign(n);
      CHECK(brute == expected);
    }
  }
}

TEST_CASE("brute force equals closed form on random manifolds") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<std::size_t> dim(1, 5);
  int checked = 0;
  while (checked < 200) {
    const std::size_t n = dim(rng), m = dim(rng);
    if (n + m > 8) continue;
    const auto spec = random_polynomial_manifold(n, m, rng);
    const Vector w = oracle::random_vector(m, rng, -2.0, 2.0);
    const auto aux = gvf::feasible_aux_vectors(n, m);
    const Vector brute = gvf::propagation_bruteforce(spec, w, aux);
    const Vector closed = gvf::propagation_closed_form(spec, w);
    CHECK(max_abs(brute - closed) <= 1e-9 * std::max(1.0, max_abs(closed)));

    // Independent oracle: Laplace-expansion cross product.
    std::vector<Vector> rows;
    for (std::size_t j = 0; j < n; ++j) rows.push_back(gradient_phi(spec, w, j));
    rows.insert(rows.end(), aux.begin(), aux.end());
    const auto laplace = oracle::cofactor_cross(oracle::to_rows(rows));
    for (std::size_t i = 0; i < n + m; ++i) CHECK(closed[i] == doctest::Approx(laplace[i]).epsilon(1e-9).scale(1.0));

    // Propagation is never zero: each virtual entry is exactly +-1.
    for (std::size_t l = 0; l < m; ++l) CHECK(std::abs(closed[n + l]) == 1.0);

    // Orthogonal to every gradient and auxiliary vector.
    double scale = 1.0;
    for (const auto& r : rows) scale *= norm(r);
    for (const auto& r : rows) CHECK(std::abs(dot(brute, r)) <= 1e-9 * scale);

    // Swapping two gradients flips the sign.
    if (n >= 2) {
      std::swap(rows[0], rows[1]);
      CHECK(max_abs(generalized_cross(rows) + brute) <= 1e-10 * std::max(1.0, max_abs(brute)));
    }
    ++checked;
  }
}

TEST_CASE("infeasible auxiliary vectors couple the virtual entries to the partials") {
  // Brute-force tail for the coupled example, derived symbolically from the
  // 5x5 minors:
  //   p4 = -(f12 - f13 + f22 - f23),  p5 = f11 + f21,  p6 = -(f11 + f21)
  auto expected_tail = [](const Matrix& f) {
    const double a = f(0, 1) - f(0, 2) + f(1, 1) - f(1, 2);
    const double b = f(0, 0) + f(1, 0);
    return Vector{-a, b, -b};
  };
  const auto aux = verify::coupled_example_aux();

  const Vector ones = gvf::coupling_demo(Matrix(3, 3, 1.0), aux);
  CHECK(max_abs(tail(ones, 3) - Vector{0, 2, -2}) == 0.0);

  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix f = oracle::random_matrix(3, 3, rng, -5.0, 5.0);
    const Vector got = tail(gvf::coupling_demo(f, aux), 3);
    CHECK(max_abs(got - expected_tail(f)) <= 1e-12);
    // The printed formulas agree up to sign entry by entry.
    const Vector printed = verify::printed_coupled_tail(f);
    for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(got[i]) == doctest::Approx(std::abs(printed[i])));
    // Feasible vectors restore the constant tail.
    const Vector feasible = gvf::coupling_demo(f, gvf::feasible_aux_vectors(3, 3));
    CHECK(max_abs(tail(feasible, 3) - Vector{-1, -1, -1}) <= 1e-12);
    CHECK(max_abs(feasible - gvf::propagation_closed_form(f)) <= 1e-12);
  }
  CHECK_THROWS_AS(gvf::coupling_demo(Matrix(3, 3, 1.0), std::vector<Vector>{Vector{1, 1, 0, 0, 0, 0}}),
                  DimensionError);
  CHECK_THROWS_AS(gvf::coupling_demo(Matrix(3, 3, 1.0), std::vector<Vector>{Vector(6), Vector(5)}), DimensionError);
}

TEST_CASE("hgvf assembly") {
  const auto helicoid = builtin("helicoid3");
  const Vector gains = gvf::uniform_gains(3, 0.7);

  SUBCASE("on the manifold the convergence term vanishes") {
    const Vector w{0.3, -1.1, 2.0};
    const auto field = gvf::hgvf(*helicoid, helicoid->eval(w), w, gains);
    CHECK(max_abs(field.convergence) == 0.0);
    CHECK(field.total == field.propagation);
  }

  SUBCASE("single error on a constant manifold") {
    const auto flat = ManifoldSpec::from_expressions("flat", 2, {"1", "2", "3"});
    const Vector w{0.5, 0.5};
    const auto field = gvf::hgvf(flat, flat.eval(w) + Vector{1, 0, 0}, w, gvf::uniform_gains(3, 1.0));
    CHECK(field.convergence == Vector{-1, 0, 0, 0, 0});
  }

  SUBCASE("propagation is orthogonal to every gradient off the manifold") {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 50; ++trial) {
      const Vector w = oracle::random_vector(3, rng, -3.0, 3.0);
      const Vector x = oracle::random_vector(3, rng, -10.0, 10.0);
      const auto field = gvf::hgvf(*helicoid, x, w, gains);
      CHECK(field.total == field.propagation + field.convergence);
      for (std::size_t j = 0; j < 3; ++j) {
        const Vector g = gradient_phi(*helicoid, w, j);
        CHECK(std::abs(dot(field.propagation, g)) <= 1e-9 * norm(field.propagation) * norm(g));
      }
      // Convergence term equals -sum_j k_j phi_j grad(phi_j).
      Vector expected(6);
      const Vector err = phi(*helicoid, x, w);
      for (std::size_t j = 0; j < 3; ++j) expected -= (0.7 * err[j]) * gradient_phi(*helicoid, w, j);
      CHECK(max_abs(field.convergence - expected) <= 1e-12 * std::max(1.0, max_abs(expected)));
    }
  }

  CHECK_THROWS_AS(gvf::hgvf(*helicoid, Vector{0, 0, 0}, Vector{0, 0, 0}, Vector{0.7, 0.0, 0.7}), ConfigError);
  CHECK_THROWS_AS(gvf::hgvf(*helicoid, Vector{0, 0, 0}, Vector{0, 0, 0}, Vector{0.7, 0.7}), DimensionError);
}
