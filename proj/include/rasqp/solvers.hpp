#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "rasqp/solvers/brute_force.hpp"
#include "rasqp/solvers/fletcher.hpp"
#include "rasqp/solvers/kr.hpp"
#include "rasqp/solvers/ras.hpp"

namespace rasqp {

enum class SolverKind { Ras, GenericRas, Kr, Fletcher, BruteForce };

inline const char* to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::Ras: return "ras";
    case SolverKind::GenericRas: return "generic";
    case SolverKind::Kr: return "kr";
    case SolverKind::Fletcher: return "fletcher";
    case SolverKind::BruteForce: return "brute";
  }
  return "unknown";
}

inline std::optional<SolverKind> parse_solver_kind(std::string_view name) {
  for (SolverKind k : {SolverKind::Ras, SolverKind::GenericRas, SolverKind::Kr, SolverKind::Fletcher,
                       SolverKind::BruteForce}) {
    if (name == to_string(k)) return k;
  }
  return std::nullopt;
}

/// Settings understood by every solver; each solver reads the fields it uses.
struct SolverSettings {
  double tol = 1e-8;
  std::optional<IndexSet> initial_active;
  std::size_t max_solves = 10000;      // ras, generic
  std::size_t kr_max_iterations = 200;  // kr
  bool kr_detect_repeats = true;
  ChangeProbabilities probs;  // ras
  double sigma = 0.5;         // generic, constant probability rule 0.5
  SpdSolveOptions spd;
  RecordingOptions recording;
};

/// Runs one solver. The brute-force oracle reports one solve per subset and
/// no trace; its mean subsystem size over all subsets is n / 2.
inline SolveResult run_solver(SolverKind kind, const QpProblem& problem, const SolverSettings& s,
                              std::uint64_t seed) {
  switch (kind) {
    case SolverKind::Ras: {
      RasConfig cfg;
      cfg.probs = s.probs;
      cfg.tol = s.tol;
      cfg.initial_active = s.initial_active;
      cfg.max_solves = s.max_solves;
      cfg.seed = seed;
      cfg.spd = s.spd;
      cfg.recording = s.recording;
      return ras_solve(problem, cfg);
    }
    case SolverKind::GenericRas: {
      GenericRasConfig cfg;
      cfg.sigma = s.sigma;
      cfg.tol = s.tol;
      cfg.initial_active = s.initial_active;
      cfg.max_solves = s.max_solves;
      cfg.seed = seed;
      cfg.spd = s.spd;
      cfg.recording = s.recording;
      return generic_ras_solve(problem, cfg);
    }
    case SolverKind::Kr: {
      KrConfig cfg;
      cfg.tol = s.tol;
      cfg.initial_active = s.initial_active;
      cfg.max_iterations = s.kr_max_iterations;
      cfg.detect_repeats = s.kr_detect_repeats;
      cfg.spd = s.spd;
      cfg.recording = s.recording;
      return kr_solve(problem, cfg);
    }
    case SolverKind::Fletcher: {
      FletcherConfig cfg;
      cfg.tol = s.tol;
      cfg.initial_active = s.initial_active;
      cfg.spd = s.spd;
      cfg.recording = s.recording;
      return fletcher_solve(problem, cfg);
    }
    case SolverKind::BruteForce: {
      SolveResult r;
      r.point = brute_force_solve(problem, s.tol);
      r.status = SolveStatus::Optimal;
      r.solves = std::size_t{1} << problem.n();
      r.avg_subsystem_size = static_cast<double>(problem.n()) / 2.0;
      r.objective = objective(problem, r.point.x);
      return r;
    }
  }
  throw QpError(ErrorCode::InvalidArgument, "unknown solver");
}

}  // namespace rasqp
