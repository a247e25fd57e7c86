#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cgvf/linalg.hpp"

namespace cgvf::verify {

inline constexpr double kLemma1RelativeTolerance = 1e-9;

struct Lemma1Cell {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t trials = 0;
  std::size_t failures = 0;
  double max_relative_error = 0.0;
  // Largest |brute-force tail entry - (-1)^n| seen.
  double max_tail_deviation = 0.0;
  bool pass() const { return failures == 0; }
};

struct Lemma1Failure {
  std::size_t n = 0;
  std::size_t m = 0;
  Matrix partials;
  Vector bruteforce;
  Vector closed_form;
  std::string reason;
};

struct Lemma1Report {
  std::vector<Lemma1Cell> cells;
  std::optional<Lemma1Failure> first_failure;
  bool all_pass() const { return !first_failure.has_value(); }
};

// Compares the brute-force propagation term under the feasible auxiliary
// vectors with the closed form for every n <= n_max, m <= m_max, using
// random partials in [-5, 5]. Throws ConfigError unless n_max, m_max >= 1
// and n_max + m_max <= 10.
Lemma1Report verify_lemma1(std::size_t n_max, std::size_t m_max, std::size_t trials, std::uint64_t seed);

// Auxiliary vectors of the coupled 3-D example: [1,1,0,0,0,0], [0,0,0,0,1,1].
std::vector<Vector> coupled_example_aux();

// Closed-form tail [p4, p5, p6] as printed for the coupled example:
//   p4 = f12 - f13 + f22 - f23,  p5 = p6 = f11 + f21
Vector printed_coupled_tail(const Matrix& partials);

struct CouplingRow {
  Matrix partials;
  Vector infeasible_tail;
  Vector printed_tail;
  Vector feasible_tail;
};

CouplingRow coupling_row(const Matrix& partials);

struct CouplingReport {
  CouplingRow ones;
  CouplingRow zeros;
  std::vector<CouplingRow> draws;
  Vector infeasible_stddev;
  Vector feasible_stddev;
};

CouplingReport coupling_report(std::size_t draws, std::uint64_t seed);

}  // namespace cgvf::verify
