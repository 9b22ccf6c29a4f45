#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "rasqp/solvers/common.hpp"

namespace rasqp {

inline constexpr Index kBruteForceMaxDimension = 20;

/// Enumerates all 2^n inactive sets and returns the lowest-objective point
/// with x_I >= 0 and s_A >= -tol. Correctness oracle for small problems.
inline KktPoint brute_force_solve(const QpProblem& problem, double tol) {
  const Index n = problem.n();
  if (n > kBruteForceMaxDimension) {
    throw QpError(ErrorCode::DimensionTooLarge, "brute force needs n <= 20, got " + std::to_string(n));
  }
  std::optional<KktPoint> best;
  double best_value = std::numeric_limits<double>::infinity();
  const std::uint64_t subsets = std::uint64_t{1} << n;
  for (std::uint64_t mask = 0; mask < subsets; ++mask) {
    std::vector<Index> in, out;
    for (Index i = 0; i < n; ++i) (((mask >> i) & 1U) ? in : out).push_back(i);
    const IndexSet inactive = IndexSet::from_sorted(std::move(in));
    const IndexSet active = IndexSet::from_sorted(std::move(out));
    const SubsystemSolution sol = solve_subsystem(problem, inactive, active);
    if (sol.x_inactive.size() > 0 && sol.x_inactive.minCoeff() < 0.0) continue;
    if (sol.s_active.size() > 0 && sol.s_active.minCoeff() < -tol) continue;
    const double value = subsystem_objective(problem, inactive, sol.x_inactive);
    if (value < best_value) {
      best_value = value;
      best = embed_point(n, inactive, active, sol);
    }
  }
  if (!best) throw QpError(ErrorCode::NoKktPoint, "no subset satisfies the KKT conditions");
  return *best;
}

}  // namespace rasqp
