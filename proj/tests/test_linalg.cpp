#include <doctest.h>

#include <random>

#include "cgvf/errors.hpp"
#include "cgvf/linalg.hpp"
#include "oracles.hpp"

using namespace cgvf;

TEST_CASE("determinant of small fixed matrices") {
  CHECK(determinant(Matrix::identity(4)) == 1.0);
  CHECK(determinant(Matrix{{0, 1}, {1, 0}}) == -1.0);
  CHECK(determinant(Matrix{{2}}) == 2.0);
  CHECK(determinant(Matrix{{1, 2, 3}, {4, 5, 6}, {7, 8, 10}}) == doctest::Approx(-3.0).epsilon(1e-15));
}

TEST_CASE("determinant of rank-deficient 6x6 is zero") {
  std::mt19937_64 rng(7);
  Matrix m = oracle::random_matrix(6, 6, rng);
  for (std::size_t c = 0; c < 6; ++c) m(4, c) = m(1, c);
  CHECK(std::abs(determinant(m)) <= 1e-12);
}

TEST_CASE("determinant rejects non-square and empty input") {
  CHECK_THROWS_AS(determinant(Matrix(2, 3)), DimensionError);
  CHECK_THROWS_AS(determinant(Matrix()), DimensionError);
}

TEST_CASE("determinant agrees with Laplace expansion up to 7x7") {
  std::mt19937_64 rng(11);
  for (std::size_t d = 1; d <= 7; ++d) {
    for (int trial = 0; trial < 10; ++trial) {
      const Matrix m = oracle::random_matrix(d, d, rng, -3.0, 3.0);
      oracle::Rows rows;
      for (std::size_t r = 0; r < d; ++r) rows.push_back(m.row(r).raw());
      const double expected = oracle::laplace_det(rows);
      CHECK(determinant(m) == doctest::Approx(expected).epsilon(1e-10).scale(1.0));
    }
  }
}

TEST_CASE("determinant is multiplicative on random 5x5 pairs") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix a = oracle::random_matrix(5, 5, rng);
    const Matrix b = oracle::random_matrix(5, 5, rng);
    const double lhs = determinant(a) * determinant(b);
    const double rhs = determinant(a * b);
    CHECK(std::abs(lhs - rhs) <= 1e-9 * std::max(1.0, std::abs(lhs)));
  }
}

TEST_CASE("delete_column") {
  CHECK(delete_column(Matrix{{1, 2, 3}}, 1) == Matrix{{1, 3}});
  CHECK(delete_column(Matrix{{1, 2}, {3, 4}}, 0) == Matrix{{2}, {4}});
  CHECK_THROWS_AS(delete_column(Matrix{{1, 2}}, 2), IndexError);

  const Matrix id = Matrix::identity(3);
  for (std::size_t j = 0; j < 3; ++j) {
    const Matrix sub = delete_column(id, j);
    CHECK(sub.rows() == 3);
    CHECK(sub.cols() == 2);
    // Row j becomes zero; the other two rows are the distinct unit rows.
    CHECK(sub.row(j) == Vector{0, 0});
    std::vector<Vector> nonzero;
    for (std::size_t r = 0; r < 3; ++r)
      if (r != j) nonzero.push_back(sub.row(r));
    CHECK(nonzero[0] != nonzero[1]);
    CHECK(norm(nonzero[0]) == 1.0);
    CHECK(norm(nonzero[1]) == 1.0);
  }
}

TEST_CASE("generalized cross product fixed cases") {
  const std::vector<Vector> e12{Vector{1, 0, 0}, Vector{0, 1, 0}};
  CHECK(generalized_cross(e12) == Vector{0, 0, 1});

  const std::vector<Vector> one{Vector{2.5, -4.0}};
  CHECK(generalized_cross(one) == Vector{-4.0, -2.5});

  const std::vector<Vector> dependent{Vector{1, 0, 0, 0}, Vector{2, 0, 0, 0}, Vector{0, 0, 1, 0}};
  CHECK(max_abs(generalized_cross(dependent)) == 0.0);
}

TEST_CASE("generalized cross product rejects bad shapes") {
  const std::vector<Vector> none;
  CHECK_THROWS_AS(generalized_cross(none), DimensionError);
  const std::vector<Vector> too_few{Vector{1, 0, 0, 0}, Vector{0, 1, 0, 0}};
  CHECK_THROWS_AS(generalized_cross(too_few), DimensionError);
  const std::vector<Vector> mixed{Vector{1, 0, 0}, Vector{0, 1}};
  CHECK_THROWS_AS(generalized_cross(mixed), DimensionError);
}

TEST_CASE("generalized cross product matches cofactor oracle in d = 4") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Vector> vs;
    for (int i = 0; i < 3; ++i) vs.push_back(oracle::random_vector(4, rng));
    const Vector got = generalized_cross(vs);
    const auto expected = oracle::cofactor_cross(oracle::to_rows(vs));
    for (std::size_t j = 0; j < 4; ++j) CHECK(got[j] == doctest::Approx(expected[j]).epsilon(1e-12));
    for (const auto& v : vs) CHECK(std::abs(dot(got, v)) <= 1e-12);
  }
}

TEST_CASE("generalized cross product properties over random dimensions") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::size_t> dims(2, 9);
  std::uniform_real_distribution<double> scales(-4.0, 4.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d = dims(rng);
    std::vector<Vector> vs;
    double scale = 1.0;
    for (std::size_t i = 0; i + 1 < d; ++i) {
      vs.push_back(oracle::random_vector(d, rng, -2.0, 2.0));
      scale *= norm(vs.back());
    }
    const Vector x = generalized_cross(vs);

    // Orthogonality.
    for (const auto& v : vs) CHECK(std::abs(dot(x, v)) <= 1e-9 * scale);

    // Multilinearity in one slot.
    const double c = scales(rng);
    auto scaled = vs;
    scaled[0] *= c;
    const Vector xs = generalized_cross(scaled);
    CHECK(max_abs(xs - c * x) <= 1e-9 * std::max(1.0, max_abs(c * x)));

    // Antisymmetry under an adjacent swap.
    if (vs.size() >= 2) {
      auto swapped = vs;
      std::swap(swapped[0], swapped[1]);
      const Vector xw = generalized_cross(swapped);
      CHECK(max_abs(xw + x) <= 1e-12 * std::max(1.0, max_abs(x)));
    }
  }
}
