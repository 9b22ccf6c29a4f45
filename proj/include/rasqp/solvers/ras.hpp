#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "rasqp/solvers/common.hpp"

namespace rasqp {

/// Per-index exchange probabilities for Im and Am (in ascending index order).
struct ExchangeProbabilities {
  std::vector<double> inactive;
  std::vector<double> active;
};

using ProbabilityRule = std::function<ExchangeProbabilities(const Partition&)>;

struct GenericRasConfig {
  double sigma = 0.5;
  /// Empty rule means every probability is 0.5.
  ProbabilityRule probability_rule;
  double tol = 1e-8;
  std::optional<IndexSet> initial_active;
  std::size_t max_solves = 10000;
  std::uint64_t seed = 1;
  SpdSolveOptions spd;
  RecordingOptions recording;
};

struct RasConfig {
  ChangeProbabilities probs;
  double tol = 1e-8;
  std::optional<IndexSet> initial_active;
  std::size_t max_solves = 10000;
  std::uint64_t seed = 1;
  SpdSolveOptions spd;
  RecordingOptions recording;
};

/// Random active set framework with caller-chosen probabilities in
/// [sigma, 1 - sigma]. Every pass through the loop re-solves, including passes
/// where the random exchange came out empty.
inline SolveResult generic_ras_solve(const QpProblem& problem, const GenericRasConfig& cfg) {
  if (!(cfg.sigma > 0.0 && cfg.sigma <= 0.5)) throw QpError(ErrorCode::InvalidArgument, "sigma must lie in (0, 0.5]");
  Rng rng(cfg.seed);
  SolveRecorder rec(problem, cfg.recording);
  auto [inactive, active] = initial_partition(problem.n(), cfg.initial_active);
  KktPoint last;

  while (true) {
    if (rec.solves() >= cfg.max_solves) return rec.finish(std::move(last), SolveStatus::IterationCapReached);
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

    ExchangeProbabilities probs;
    if (cfg.probability_rule) {
      probs = cfg.probability_rule(step.partition);
    } else {
      probs.inactive.assign(step.partition.infeasible_inactive.size(), 0.5);
      probs.active.assign(step.partition.infeasible_active.size(), 0.5);
    }
    const Exchange ex = select_exchange_generic(step.partition, probs.inactive, probs.active, cfg.sigma, rng);
    std::tie(inactive, active) = next_sets(step.partition, ex);
  }
}

/// History after an exchange: Ip0 = Ip, Ap0 = Ap and the exchange's four sets.
inline History advance_history(const Partition& part, const Exchange& ex) {
  History h;
  h.feasible_inactive = part.feasible_inactive;
  h.feasible_active = part.feasible_active;
  h.changed_inactive = ex.changed_inactive;
  h.changed_active = ex.changed_active;
  h.frozen_inactive = ex.frozen_inactive;
  h.frozen_active = ex.frozen_active;
  return h;
}

/// Random active set method with six category probabilities.
///
/// When a draw exchanges nothing the partition is unchanged, so the previous
/// solve is reused: the history is advanced as if the empty exchange had been
/// applied (all of Im and Am become frozen) and the draw is repeated. Such
/// redraws are not counted as solves; more than 10 n consecutive redraws end
/// the run with IterationCapReached.
inline SolveResult ras_solve(const QpProblem& problem, const RasConfig& cfg) {
  cfg.probs.validate();
  const Index n = problem.n();
  Rng rng(cfg.seed);
  SolveRecorder rec(problem, cfg.recording);
  auto [inactive, active] = initial_partition(n, cfg.initial_active);
  History history = History::initial(n);
  KktPoint last;
  const auto max_redraws = static_cast<std::size_t>(10 * n);

  while (true) {
    if (rec.solves() >= cfg.max_solves) return rec.finish(std::move(last), SolveStatus::IterationCapReached);
    SubsystemStep step;
    try {
      step = subsystem_step(problem, inactive, active, cfg.tol, cfg.spd);
    } catch (const QpError& e) {
      if (e.code() != ErrorCode::FactorizationFailure) throw;
      return rec.finish(std::move(last), SolveStatus::NumericalFailure);
    }
    rec.record(step.partition, step.point.x, subsystem_objective(problem, inactive, step.solution.x_inactive));
    last = std::move(step.point);
    const Partition& part = step.partition;
    if (part.is_optimal()) return rec.finish(std::move(last), SolveStatus::Optimal);

    Categories cats = categorize(part, history);
    Exchange ex = select_exchange_ras(part, cats, cfg.probs, rng);
    std::size_t redraws = 0;
    while (ex.empty()) {
      rec.add_resample();
      if (++redraws > max_redraws) return rec.finish(std::move(last), SolveStatus::IterationCapReached);
      history = advance_history(part, Exchange{{}, part.infeasible_inactive, {}, part.infeasible_active});
      cats = categorize(part, history);
      ex = select_exchange_ras(part, cats, cfg.probs, rng);
    }
    history = advance_history(part, ex);
    std::tie(inactive, active) = next_sets(part, ex);
  }
}

}  // namespace rasqp
