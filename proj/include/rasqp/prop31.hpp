#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>

#include "rasqp/rng.hpp"

namespace rasqp {

/// Monte Carlo estimate of the expected number of infeasible indexes after a
/// full exchange in the two-variable problem, starting from I = Im = {1,2}
/// (case 1, N1) or from A = Am = {1,2} (case 2, N2).
///
/// The main estimates follow the sign-stratified decomposition
///   E(N) = sum over s in {Q12 < 0, Q12 = 0, Q12 > 0} of P(s) E(N | precondition, s),
/// with P(s) the unconditional stratum frequency. The plain conditional means
/// E(N | precondition) are reported alongside; for a symmetric Q12 law and
/// rotation-invariant g those two coincide in expectation.
struct ExchangeAsymmetryEstimate {
  double mean_from_inactive = 0.0;  // E(N1), stratified
  double mean_from_active = 0.0;    // E(N2), stratified
  double stderr_difference = std::numeric_limits<double>::infinity();
  double conditional_from_inactive = 0.0;  // E(N1 | case-1 precondition)
  double conditional_from_active = 0.0;    // E(N2 | case-2 precondition)
  std::size_t inactive_hits = 0;  // samples meeting the case-1 precondition
  std::size_t active_hits = 0;    // samples meeting the case-2 precondition
};

struct ExchangeAsymmetryOptions {
  /// Force Q12 = 0.
  bool diagonal_only = false;
};

/// Q has standard normal entries (Q12 symmetric about zero), rejection-sampled
/// until positive definite; g is an independent standard bivariate normal.
/// Each sample is scored under both preconditions that it satisfies.
inline ExchangeAsymmetryEstimate prop31_montecarlo(std::size_t samples, Rng& rng,
                                                   const ExchangeAsymmetryOptions& options = {}) {
  // Per stratum (Q12 < 0, = 0, > 0): sample count, then hits / sum / sum of squares per case.
  struct Moments {
    std::size_t hits = 0;
    double sum = 0.0;
    double sq = 0.0;
    void add(double v) {
      ++hits;
      sum += v;
      sq += v * v;
    }
  };
  std::array<std::size_t, 3> stratum_size{};
  std::array<Moments, 3> case1{}, case2{};

  for (std::size_t k = 0; k < samples; ++k) {
    double q11, q22, q12;
    do {
      q11 = rng.normal();
      q22 = rng.normal();
      q12 = options.diagonal_only ? 0.0 : rng.normal();
    } while (!(q11 > 0.0 && q22 > 0.0 && q11 * q22 - q12 * q12 > 0.0));
    const double g1 = rng.normal();
    const double g2 = rng.normal();
    const std::size_t s = q12 < 0.0 ? 0 : (q12 == 0.0 ? 1 : 2);
    ++stratum_size[s];

    // Unconstrained solution x = -Q^{-1} g, up to the positive factor 1/det Q.
    const double x1 = -q22 * g1 + q12 * g2;
    const double x2 = q12 * g1 - q11 * g2;

    if (x1 <= 0.0 && x2 <= 0.0) {
      // Both leave I; next step has A = {1,2} and s = g.
      case1[s].add((g1 < 0.0 ? 1.0 : 0.0) + (g2 < 0.0 ? 1.0 : 0.0));
    }
    if (g1 < 0.0 && g2 < 0.0) {
      // Both leave A; next step has I = {1,2}.
      case2[s].add((x1 <= 0.0 ? 1.0 : 0.0) + (x2 <= 0.0 ? 1.0 : 0.0));
    }
  }

  ExchangeAsymmetryEstimate est;
  const auto total = static_cast<double>(samples);
  bool finite = samples > 0;
  double var_diff = 0.0;
  auto fold = [&](const std::array<Moments, 3>& m, double& stratified, double& conditional, std::size_t& hits) {
    double sum = 0.0;
    for (std::size_t s = 0; s < 3; ++s) {
      hits += m[s].hits;
      sum += m[s].sum;
      if (stratum_size[s] == 0) continue;
      if (m[s].hits == 0) {
        finite = false;
        continue;
      }
      const auto h = static_cast<double>(m[s].hits);
      const double weight = static_cast<double>(stratum_size[s]) / total;
      const double mean = m[s].sum / h;
      stratified += weight * mean;
      if (m[s].hits < 2) {
        finite = false;
        continue;
      }
      const double var = std::max(0.0, (m[s].sq - h * mean * mean) / (h - 1.0));
      var_diff += weight * weight * var / h;
    }
    if (hits > 0) conditional = sum / static_cast<double>(hits);
  };
  fold(case1, est.mean_from_inactive, est.conditional_from_inactive, est.inactive_hits);
  fold(case2, est.mean_from_active, est.conditional_from_active, est.active_hits);
  if (finite) est.stderr_difference = std::sqrt(var_diff);
  return est;
}

}  // namespace rasqp
