#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "rasqp/active_set.hpp"
#include "rasqp/model.hpp"
#include "rasqp/spd_solve.hpp"

namespace rasqp {

/// Optional per-solve recording on top of the always-on trace.
struct RecordingOptions {
  bool inactive_sets = false;
  bool iterates = false;
};

/// Starting partition: the complement of `initial_active`, or I = {} (A = {1..n})
/// when no initial active set is given.
inline std::pair<IndexSet, IndexSet> initial_partition(Index n, const std::optional<IndexSet>& initial_active) {
  IndexSet active = initial_active ? *initial_active : IndexSet::range(n);
  if (!active.empty() && (active.values().front() < 0 || active.values().back() >= n)) {
    throw QpError(ErrorCode::InvalidPartition, "initial active set has indexes outside {1..n}");
  }
  IndexSet inactive = complement(n, active);
  return {std::move(inactive), std::move(active)};
}

/// Objective 1/2 x'Qx + g'x at a subsystem point (x_A = 0, Q_II x_I = -g_I),
/// which reduces to 1/2 g_I' x_I.
inline double subsystem_objective(const QpProblem& problem, const IndexSet& inactive, const Vector& x_inactive) {
  if (inactive.empty()) return 0.0;
  return 0.5 * problem.g()(inactive.values()).dot(x_inactive);
}

/// Counts subsystem solves and builds the trace shared by all solvers.
class SolveRecorder {
 public:
  SolveRecorder(const QpProblem& problem, RecordingOptions options) : problem_(problem), options_(options) {}

  std::size_t solves() const { return result_.solves; }

  void record(const Partition& part, const Vector& x, double objective_value) {
    ++result_.solves;
    size_sum_ += static_cast<double>(part.inactive.size());
    IterationRecord row;
    row.iteration = result_.solves;
    row.infeasible_inactive = part.infeasible_inactive.size();
    row.infeasible_active = part.infeasible_active.size();
    row.inactive_size = part.inactive.size();
    row.elapsed_s = clock_.seconds();
    row.objective = objective_value;
    result_.trace.push_back(row);
    if (options_.inactive_sets) result_.inactive_sets.push_back(part.inactive);
    if (options_.iterates) result_.iterates.push_back(x);
  }

  void add_resample() { ++result_.resamples; }

  SolveResult finish(KktPoint point, SolveStatus status) {
    result_.status = status;
    result_.avg_subsystem_size = result_.solves ? size_sum_ / static_cast<double>(result_.solves) : 0.0;
    if (point.x.size() == problem_.n()) result_.objective = objective(problem_, point.x);
    result_.point = std::move(point);
    return std::move(result_);
  }

 private:
  const QpProblem& problem_;
  RecordingOptions options_;
  Stopwatch clock_;
  double size_sum_ = 0.0;
  SolveResult result_;
};

/// Subsystem solve for (I, A) and the classification of the resulting point.
struct SubsystemStep {
  SubsystemSolution solution;
  KktPoint point;
  Partition partition;
};

inline SubsystemStep subsystem_step(const QpProblem& problem, const IndexSet& inactive, const IndexSet& active,
                                    double tol, const SpdSolveOptions& spd) {
  SubsystemStep step;
  step.solution = solve_subsystem(problem, inactive, active, spd);
  step.point = embed_point(problem.n(), inactive, active, step.solution);
  step.partition = classify(step.point, inactive, active, tol);
  return step;
}

}  // namespace rasqp
