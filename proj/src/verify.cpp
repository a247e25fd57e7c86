#include "cgvf/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "cgvf/errors.hpp"
#include "cgvf/gvf.hpp"

namespace cgvf::verify {

namespace {

Matrix random_partials(std::size_t n, std::size_t m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-5.0, 5.0);
  Matrix p(n, m);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t l = 0; l < m; ++l) p(j, l) = dist(rng);
  return p;
}

Vector tail(const Vector& v, std::size_t count) {
  return Vector(std::vector<double>(v.end() - static_cast<std::ptrdiff_t>(count), v.end()));
}

Vector stddev(const std::vector<Vector>& samples) {
  if (samples.empty()) return {};
  const std::size_t d = samples.front().size();
  Vector mean(d), var(d);
  for (const auto& s : samples) mean += s;
  mean *= 1.0 / static_cast<double>(samples.size());
  for (const auto& s : samples)
    for (std::size_t i = 0; i < d; ++i) var[i] += (s[i] - mean[i]) * (s[i] - mean[i]);
  for (double& v : var) v = std::sqrt(v / static_cast<double>(samples.size()));
  return var;
}

}  // namespace

Lemma1Report verify_lemma1(std::size_t n_max, std::size_t m_max, std::size_t trials, std::uint64_t seed) {
  if (n_max < 1 || m_max < 1) throw ConfigError("verify-lemma1: n_max and m_max must be at least 1");
  if (n_max + m_max > 10) throw ConfigError("verify-lemma1: n_max + m_max must not exceed 10");

  std::mt19937_64 rng(seed);
  Lemma1Report report;
  for (std::size_t n = 1; n <= n_max; ++n) {
    for (std::size_t m = 1; m <= m_max; ++m) {
      Lemma1Cell cell{n, m, trials, 0, 0.0, 0.0};
      const auto aux = gvf::feasible_aux_vectors(n, m);
      const double sign = gvf::orientation_sign(n);
      for (std::size_t t = 0; t < trials; ++t) {
        const Matrix partials = random_partials(n, m, rng);
        const Vector brute = gvf::coupling_demo(partials, aux);
        const Vector closed = gvf::propagation_closed_form(partials);
        const double rel = max_abs(brute - closed) / std::max(1.0, max_abs(closed));
        cell.max_relative_error = std::max(cell.max_relative_error, rel);

        std::string reason;
        if (!(rel <= kLemma1RelativeTolerance)) reason = "brute force and closed form differ";
        for (std::size_t l = 0; l < m; ++l) {
          cell.max_tail_deviation = std::max(cell.max_tail_deviation, std::abs(brute[n + l] - sign));
          if (closed[n + l] != sign && reason.empty()) reason = "closed-form tail entry differs from (-1)^n";
        }
        if (!reason.empty()) {
          ++cell.failures;
          if (!report.first_failure) report.first_failure = Lemma1Failure{n, m, partials, brute, closed, reason};
        }
      }
      report.cells.push_back(cell);
    }
  }
  return report;
}

std::vector<Vector> coupled_example_aux() { return {Vector{1, 1, 0, 0, 0, 0}, Vector{0, 0, 0, 0, 1, 1}}; }

Vector printed_coupled_tail(const Matrix& f) {
  const double p4 = f(0, 1) - f(0, 2) + f(1, 1) - f(1, 2);
  const double p5 = f(0, 0) + f(1, 0);
  return Vector{p4, p5, p5};
}

CouplingRow coupling_row(const Matrix& partials) {
  if (partials.rows() != 3 || partials.cols() != 3) throw DimensionError("coupling_row: expects 3x3 partials");
  const Vector infeasible = gvf::coupling_demo(partials, coupled_example_aux());
  const Vector feasible = gvf::coupling_demo(partials, gvf::feasible_aux_vectors(3, 3));
  return CouplingRow{partials, tail(infeasible, 3), printed_coupled_tail(partials), tail(feasible, 3)};
}

CouplingReport coupling_report(std::size_t draws, std::uint64_t seed) {
  CouplingReport report{coupling_row(Matrix(3, 3, 1.0)), coupling_row(Matrix(3, 3, 0.0)), {}, {}, {}};
  std::mt19937_64 rng(seed);
  std::vector<Vector> infeasible, feasible;
  for (std::size_t i = 0; i < draws; ++i) {
    report.draws.push_back(coupling_row(random_partials(3, 3, rng)));
    infeasible.push_back(report.draws.back().infeasible_tail);
    feasible.push_back(report.draws.back().feasible_tail);
  }
  report.infeasible_stddev = stddev(infeasible);
  report.feasible_stddev = stddev(feasible);
  return report;
}

}  // namespace cgvf::verify
