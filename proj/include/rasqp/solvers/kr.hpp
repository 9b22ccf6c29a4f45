#pragma once

#include <optional>
#include <set>
#include <vector>

#include "rasqp/solvers/common.hpp"

namespace rasqp {

struct KrConfig {
  double tol = 1e-8;
  std::optional<IndexSet> initial_active;
  std::size_t max_iterations = 200;
  /// Stop as soon as an inactive set repeats instead of running to the cap.
  bool detect_repeats = true;
  SpdSolveOptions spd;
  RecordingOptions recording;
};

/// Kunisch-Rendl primal-dual active set method: every infeasible index of
/// both I and A is exchanged at each iteration.
inline SolveResult kr_solve(const QpProblem& problem, const KrConfig& cfg) {
  if (cfg.max_iterations < 1) throw QpError(ErrorCode::InvalidArgument, "max_iterations must be at least 1");
  SolveRecorder rec(problem, cfg.recording);
  auto [inactive, active] = initial_partition(problem.n(), cfg.initial_active);
  std::set<std::vector<Index>> visited{inactive.values()};
  KktPoint last;

  while (rec.solves() < cfg.max_iterations) {
    SubsystemStep step;
    try {
      step = subsystem_step(problem, inactive, active, cfg.tol, cfg.spd);
    } catch (const QpError& e) {
      if (e.code() != ErrorCode::FactorizationFailure) throw;
      return rec.finish(std::move(last), SolveStatus::NumericalFailure);
    }
    rec.record(step.partition, step.point.x, subsystem_objective(problem, inactive, step.solution.x_inactive));
    last = std::move(step.point);
    if (step.partition.is_optimal()) return rec.finish(std::move(last), SolveStatus::Optimal);

    std::tie(inactive, active) = next_sets(step.partition, full_exchange(step.partition));
    if (!visited.insert(inactive.values()).second && cfg.detect_repeats) {
      return rec.finish(std::move(last), SolveStatus::CycleDetected);
    }
  }
  return rec.finish(std::move(last), SolveStatus::CycleDetected);
}

}  // namespace rasqp
