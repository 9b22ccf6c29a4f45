#include <gtest/gtest.h>

#include <numeric>

#include "test_support.hpp"

using namespace rasqp;
using rasqp::testkit::certified;

namespace {

QpProblem one_d(double q, double g) { return QpProblem(DenseMatrix::Constant(1, 1, q), Vector::Constant(1, g)); }

constexpr SolverKind kIterative[] = {SolverKind::Ras, SolverKind::GenericRas, SolverKind::Kr, SolverKind::Fletcher};

}  // namespace

TEST(Solvers, OneDimensionalInterior) {
  for (SolverKind k : kIterative) {
    SCOPED_TRACE(to_string(k));
    const SolveResult r = run_solver(k, one_d(2, -4), {}, 1);
    EXPECT_EQ(r.status, SolveStatus::Optimal);
    EXPECT_DOUBLE_EQ(r.point.x[0], 2.0);
    EXPECT_EQ(r.point.s[0], 0.0);
    EXPECT_DOUBLE_EQ(r.objective, -4.0);
  }
}

TEST(Solvers, OneDimensionalBound) {
  for (SolverKind k : {SolverKind::Ras, SolverKind::GenericRas, SolverKind::Kr}) {
    SCOPED_TRACE(to_string(k));
    const SolveResult r = run_solver(k, one_d(2, 4), {}, 1);
    EXPECT_EQ(r.status, SolveStatus::Optimal);
    EXPECT_EQ(r.solves, 1U);
    EXPECT_EQ(r.point.x[0], 0.0);
    EXPECT_EQ(r.point.s[0], 4.0);
  }
}

TEST(Solvers, InteriorOptimumFromEmptyActiveSet) {
  const QpProblem p(DenseMatrix{{4, 1}, {1, 3}}, Vector{{-1, -2}});
  SolverSettings s;
  s.initial_active = IndexSet{};
  for (SolverKind k : {SolverKind::Ras, SolverKind::GenericRas, SolverKind::Kr}) {
    SCOPED_TRACE(to_string(k));
    const SolveResult r = run_solver(k, p, s, 1);
    EXPECT_EQ(r.status, SolveStatus::Optimal);
    EXPECT_EQ(r.solves, 1U);
    EXPECT_NEAR(r.point.x[0], 1.0 / 11.0, 1e-15);
    EXPECT_NEAR(r.point.x[1], 7.0 / 11.0, 1e-15);
  }
}

TEST(Fletcher, OneDimensionalFromEmptyActiveSet) {
  FletcherConfig cfg;
  cfg.initial_active = IndexSet{};
  const SolveResult r = fletcher_solve(one_d(2, -4), cfg);
  EXPECT_EQ(r.status, SolveStatus::Optimal);
  EXPECT_DOUBLE_EQ(r.point.x[0], 2.0);
  EXPECT_EQ(r.point.s[0], 0.0);
}

TEST(Kr, OneExchangeThenVerify) {
  const QpProblem p(DenseMatrix::Identity(2, 2), Vector{{-1, 1}});
  const SolveResult r = kr_solve(p, {});
  EXPECT_EQ(r.status, SolveStatus::Optimal);
  EXPECT_EQ(r.solves, 2U);
  EXPECT_EQ(r.point.x, (Vector{{1, 0}}));
}

TEST(BruteForce, Examples) {
  KktPoint k = brute_force_solve(one_d(2, -4), 1e-8);
  EXPECT_DOUBLE_EQ(k.x[0], 2.0);
  EXPECT_EQ(k.s[0], 0.0);
  k = brute_force_solve(one_d(2, 4), 1e-8);
  EXPECT_EQ(k.x[0], 0.0);
  EXPECT_EQ(k.s[0], 4.0);
  k = brute_force_solve(QpProblem(DenseMatrix{{4, 1}, {1, 3}}, Vector{{-1, -2}}), 1e-8);
  EXPECT_NEAR(k.x[0], 1.0 / 11.0, 1e-15);
  EXPECT_NEAR(k.x[1], 7.0 / 11.0, 1e-15);
  EXPECT_EQ(k.s, Vector::Zero(2));
}

TEST(BruteForce, DimensionLimit) {
  try {
    brute_force_solve(QpProblem(DenseMatrix::Identity(21, 21), Vector::Zero(21)), 1e-8);
    FAIL();
  } catch (const QpError& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionTooLarge);
  }
}

TEST(Solvers, MatchBruteForceOracle) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const Index n = 2 + static_cast<Index>(seed % 9);
    const QpProblem p = rasqp::testkit::random_dense_problem(n, 500 + seed);
    const KktPoint oracle = brute_force_solve(p, 1e-8);
    for (SolverKind k : kIterative) {
      SCOPED_TRACE(std::string(to_string(k)) + " seed " + std::to_string(seed));
      const SolveResult r = run_solver(k, p, {}, seed);
      if (k == SolverKind::Kr && r.status == SolveStatus::CycleDetected) continue;
      ASSERT_EQ(r.status, SolveStatus::Optimal);
      EXPECT_LE(rasqp::testkit::max_abs_diff(r.point.x, oracle.x), 1e-8);
      EXPECT_TRUE(certified(p, r.point, 1e-8));
    }
  }
}

TEST(Solvers, MetricsAreConsistent) {
  const QpProblem p = gen_hard(60, 1e6, 3);
  SolverSettings s;
  s.tol = 1e-10;
  s.recording.inactive_sets = true;
  for (SolverKind k : kIterative) {
    SCOPED_TRACE(to_string(k));
    const SolveResult r = run_solver(k, p, s, 9);
    ASSERT_EQ(r.status, SolveStatus::Optimal);
    ASSERT_EQ(r.trace.size(), r.solves);
    ASSERT_EQ(r.inactive_sets.size(), r.solves);
    double sum = 0.0;
    for (std::size_t t = 0; t < r.trace.size(); ++t) {
      EXPECT_EQ(r.trace[t].iteration, t + 1);
      EXPECT_EQ(r.trace[t].inactive_size, r.inactive_sets[t].size());
      sum += static_cast<double>(r.trace[t].inactive_size);
    }
    EXPECT_NEAR(r.avg_subsystem_size, sum / static_cast<double>(r.solves), 1e-12);
    EXPECT_EQ(r.trace.back().infeasible(), 0U);
    EXPECT_DOUBLE_EQ(r.objective, objective(p, r.point.x));
    EXPECT_TRUE(certified(p, r.point, s.tol));
  }
}

TEST(Ras, Deterministic) {
  const QpProblem p = gen_hard(80, 1e10, 4);
  RasConfig cfg;
  cfg.tol = 1e-10;
  cfg.seed = 123;
  cfg.recording.inactive_sets = true;
  const SolveResult a = ras_solve(p, cfg);
  const SolveResult b = ras_solve(p, cfg);
  EXPECT_EQ(a.solves, b.solves);
  EXPECT_EQ(a.resamples, b.resamples);
  EXPECT_EQ(a.avg_subsystem_size, b.avg_subsystem_size);
  EXPECT_EQ(a.inactive_sets, b.inactive_sets);
  EXPECT_EQ(a.point.x, b.point.x);
  EXPECT_EQ(a.point.s, b.point.s);
}

TEST(Ras, AllOnesReproducesKr) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const QpProblem p = gen_hard(40, 1e8, seed);
    RasConfig ras;
    ras.probs = ChangeProbabilities::uniform(1.0);
    ras.tol = 1e-10;
    ras.max_solves = 200;
    ras.recording.inactive_sets = true;
    KrConfig kr;
    kr.tol = 1e-10;
    kr.recording.inactive_sets = true;
    const SolveResult a = ras_solve(p, ras);
    const SolveResult b = kr_solve(p, kr);
    ASSERT_GE(a.inactive_sets.size(), b.inactive_sets.size());
    for (std::size_t t = 0; t < b.inactive_sets.size(); ++t) EXPECT_EQ(a.inactive_sets[t], b.inactive_sets[t]);
    if (b.status == SolveStatus::Optimal) EXPECT_EQ(a.solves, b.solves);
  }
}

TEST(Ras, CapReached) {
  RasConfig cfg;
  cfg.max_solves = 1;
  const SolveResult r = ras_solve(one_d(2, -4), cfg);
  EXPECT_EQ(r.status, SolveStatus::IterationCapReached);
  EXPECT_EQ(r.solves, 1U);
}

TEST(Ras, ResamplesAreNotSolves) {
  // With every probability at 0.05, empty draws are common.
  const QpProblem p = gen_hard(50, 1e6, 2);
  RasConfig cfg;
  cfg.tol = 1e-10;
  cfg.probs = ChangeProbabilities::uniform(0.05);
  const SolveResult r = ras_solve(p, cfg);
  ASSERT_EQ(r.status, SolveStatus::Optimal);
  EXPECT_EQ(r.trace.size(), r.solves);
  EXPECT_GT(r.resamples, 0U);
}

TEST(Generic, RejectsSigma) {
  GenericRasConfig cfg;
  cfg.sigma = 0.6;
  EXPECT_THROW(generic_ras_solve(one_d(2, -4), cfg), QpError);
}

TEST(Generic, CustomRule) {
  const QpProblem p = gen_hard(30, 1e4, 5);
  GenericRasConfig cfg;
  cfg.sigma = 0.2;
  cfg.tol = 1e-10;
  cfg.probability_rule = [](const Partition& part) {
    return ExchangeProbabilities{std::vector<double>(part.infeasible_inactive.size(), 0.8),
                                 std::vector<double>(part.infeasible_active.size(), 0.2)};
  };
  const SolveResult r = generic_ras_solve(p, cfg);
  EXPECT_EQ(r.status, SolveStatus::Optimal);
  EXPECT_TRUE(certified(p, r.point, cfg.tol));

  cfg.probability_rule = [](const Partition& part) {
    return ExchangeProbabilities{std::vector<double>(part.infeasible_inactive.size(), 0.9),
                                 std::vector<double>(part.infeasible_active.size(), 0.9)};
  };
  EXPECT_THROW(generic_ras_solve(p, cfg), QpError);
}

TEST(Kr, CyclingInstanceHitsCap) {
  using namespace rasqp::testkit;
  const QpProblem p = gen_hard(kKrCyclingN, kKrCyclingCond, kKrCyclingSeed);
  KrConfig cfg;
  cfg.tol = 1e-10;
  EXPECT_EQ(kr_solve(p, cfg).status, SolveStatus::CycleDetected);

  cfg.detect_repeats = false;
  const SolveResult r = kr_solve(p, cfg);
  EXPECT_EQ(r.status, SolveStatus::CycleDetected);
  EXPECT_EQ(r.trace.size(), cfg.max_iterations);
  EXPECT_GT(r.trace.back().infeasible(), 0U);

  RasConfig ras;
  ras.tol = 1e-10;
  const SolveResult rr = ras_solve(p, ras);
  EXPECT_EQ(rr.status, SolveStatus::Optimal);
  EXPECT_TRUE(certified(p, rr.point, ras.tol));
}

TEST(Kr, NumericalFailureOnIndefiniteBlock) {
  const QpProblem p(DenseMatrix{{1, 2}, {2, 1}}, Vector{{-1, -1}});
  EXPECT_EQ(kr_solve(p, {}).status, SolveStatus::NumericalFailure);
}

TEST(Fletcher, MonotoneAndFeasible) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const QpProblem p = gen_hard(30, 1e6, seed);
    FletcherConfig cfg;
    cfg.tol = 1e-10;
    cfg.recording.iterates = true;
    const SolveResult r = fletcher_solve(p, cfg);
    ASSERT_EQ(r.status, SolveStatus::Optimal);
    ASSERT_EQ(r.iterates.size(), r.trace.size());
    for (std::size_t t = 0; t < r.iterates.size(); ++t) {
      EXPECT_GE(r.iterates[t].minCoeff(), 0.0);
      if (t > 0) EXPECT_LE(r.trace[t].objective, r.trace[t - 1].objective);
    }
    EXPECT_TRUE(certified(p, r.point, cfg.tol));
  }
}

TEST(Solvers, InitialActiveOutOfRange) {
  SolverSettings s;
  s.initial_active = IndexSet{5};
  try {
    run_solver(SolverKind::Ras, one_d(2, -4), s, 1);
    FAIL();
  } catch (const QpError& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidPartition);
  }
}

TEST(Solvers, SparseProblem) {
  const QpProblem p = gen_easy(400, 1.0, 3);
  for (SolverKind k : {SolverKind::Ras, SolverKind::Kr}) {
    SCOPED_TRACE(to_string(k));
    const SolveResult r = run_solver(k, p, {}, 5);
    EXPECT_EQ(r.status, SolveStatus::Optimal);
    EXPECT_TRUE(certified(p, r.point, 1e-8));
  }
}

TEST(SolverKind, Names) {
  for (SolverKind k : {SolverKind::Ras, SolverKind::GenericRas, SolverKind::Kr, SolverKind::Fletcher,
                       SolverKind::BruteForce}) {
    EXPECT_EQ(parse_solver_kind(to_string(k)), k);
  }
  EXPECT_FALSE(parse_solver_kind("simplex").has_value());
}
