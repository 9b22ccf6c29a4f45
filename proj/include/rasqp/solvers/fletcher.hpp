#pragma once

#include <algorithm>
#include <limits>
#include <optional>
#include <vector>

#include "rasqp/solvers/common.hpp"

namespace rasqp {

struct FletcherConfig {
  double tol = 1e-8;
  std::optional<IndexSet> initial_active;
  /// 0 selects max(10 n^2, 100).
  std::size_t max_solves = 0;
  SpdSolveOptions spd;
  RecordingOptions recording;
};

/// Feasible active set method changing one index at a time, starting from x = 0.
///
/// Inner loop: step from the current x_I toward the subspace minimizer
/// -Q_II^{-1} g_I, stopping at the first bound hit; the blocking index (smallest
/// ratio, lowest index on ties) moves to A. Outer loop: once the minimizer is
/// reached, the index with the most negative multiplier s_a < -tol moves to I.
/// Every iterate is exactly nonnegative and the objective never increases.
inline SolveResult fletcher_solve(const QpProblem& problem, const FletcherConfig& cfg) {
  const Index n = problem.n();
  const std::size_t cap = cfg.max_solves ? cfg.max_solves : std::max<std::size_t>(10 * static_cast<std::size_t>(n * n), 100);
  SolveRecorder rec(problem, cfg.recording);
  auto [inactive, active] = initial_partition(n, cfg.initial_active);
  Vector x = Vector::Zero(n);
  KktPoint last{x, Vector::Zero(n)};

  while (true) {
    // Inner loop: drive x_I to the subspace minimizer while staying feasible.
    SubsystemStep step;
    while (true) {
      if (rec.solves() >= cap) return rec.finish(std::move(last), SolveStatus::IterationCapReached);
      try {
        step = subsystem_step(problem, inactive, active, cfg.tol, cfg.spd);
      } catch (const QpError& e) {
        if (e.code() != ErrorCode::FactorizationFailure) throw;
        return rec.finish(std::move(last), SolveStatus::NumericalFailure);
      }
      const Vector& target = step.solution.x_inactive;

      double alpha = std::numeric_limits<double>::infinity();
      std::optional<std::size_t> blocking;
      std::vector<double> ratio(inactive.size(), std::numeric_limits<double>::infinity());
      for (std::size_t k = 0; k < inactive.size(); ++k) {
        const auto ik = static_cast<Index>(k);
        if (target[ik] < 0.0) {
          const double xk = x[inactive[k]];
          ratio[k] = xk / (xk - target[ik]);
          if (ratio[k] < alpha) {
            alpha = ratio[k];
            blocking = k;
          }
        }
      }

      if (!blocking) {
        x(inactive.values()) = target;
        last = step.point;
        rec.record(step.partition, x, objective(problem, x));
        break;
      }

      for (std::size_t k = 0; k < inactive.size(); ++k) {
        const Index i = inactive[k];
        const double moved = x[i] + alpha * (target[static_cast<Index>(k)] - x[i]);
        x[i] = (ratio[k] == alpha || moved < 0.0) ? 0.0 : moved;
      }
      const Index leaving = inactive[*blocking];
      inactive = set_difference(inactive, IndexSet{leaving});
      active = set_union(active, IndexSet{leaving});
      last = KktPoint{x, Vector::Zero(n)};
      rec.record(step.partition, x, objective(problem, x));
    }

    // Outer loop: x_I is the subspace minimizer and s_A comes from the same solve.
    std::optional<std::size_t> entering;
    double most_negative = -cfg.tol;
    for (std::size_t k = 0; k < active.size(); ++k) {
      const double s = step.solution.s_active[static_cast<Index>(k)];
      if (s < most_negative) {
        most_negative = s;
        entering = k;
      }
    }
    if (!entering) return rec.finish(std::move(last), SolveStatus::Optimal);
    const Index a = active[*entering];
    active = set_difference(active, IndexSet{a});
    inactive = set_union(inactive, IndexSet{a});
  }
}

}  // namespace rasqp
