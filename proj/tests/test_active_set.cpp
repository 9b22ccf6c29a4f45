#include <gtest/gtest.h>

#include <cmath>

#include "test_support.hpp"

using namespace rasqp;

namespace {

Partition make_partition(Index n, IndexSet ip, IndexSet im, IndexSet ap, IndexSet am) {
  Partition p;
  p.feasible_inactive = std::move(ip);
  p.infeasible_inactive = std::move(im);
  p.feasible_active = std::move(ap);
  p.infeasible_active = std::move(am);
  p.inactive = set_union(p.feasible_inactive, p.infeasible_inactive);
  p.active = set_union(p.feasible_active, p.infeasible_active);
  EXPECT_TRUE(is_partition(n, p.inactive, p.active));
  return p;
}

}  // namespace

TEST(Classify, SignReading) {
  const KktPoint pt{Vector{{2, 0, 0}}, Vector{{0, 0, -5}}};
  const Partition p = classify(pt, IndexSet{0}, IndexSet{1, 2}, 1e-8);
  EXPECT_TRUE(p.infeasible_inactive.empty());
  EXPECT_EQ(p.feasible_inactive, IndexSet{0});
  EXPECT_EQ(p.infeasible_active, IndexSet{2});
  EXPECT_EQ(p.feasible_active, IndexSet{1});
  EXPECT_FALSE(p.is_optimal());
}

TEST(Classify, ZeroIsInfeasibleInInactive) {
  const KktPoint pt{Vector{{0, 1}}, Vector{{0, 0}}};
  const Partition p = classify(pt, IndexSet{0, 1}, IndexSet{}, 1e-8);
  EXPECT_EQ(p.infeasible_inactive, IndexSet{0});
  EXPECT_EQ(p.feasible_inactive, IndexSet{1});
}

TEST(Classify, ToleranceIsStrict) {
  const double tol = 1e-8;
  const KktPoint pt{Vector{{0, 0}}, Vector{{-tol, -2 * tol}}};
  const Partition p = classify(pt, IndexSet{}, IndexSet{0, 1}, tol);
  EXPECT_EQ(p.feasible_active, IndexSet{0});
  EXPECT_EQ(p.infeasible_active, IndexSet{1});
}

TEST(Categorize, FirstIteration) {
  const Partition p = make_partition(6, {0}, {1, 2}, {3}, {4, 5});
  const Categories c = categorize(p, History::initial(6));
  EXPECT_EQ(c.im_was_frozen, (IndexSet{1, 2}));
  EXPECT_EQ(c.am_was_frozen, (IndexSet{4, 5}));
  EXPECT_TRUE(c.im_was_feasible.empty());
  EXPECT_TRUE(c.im_was_changed.empty());
  EXPECT_TRUE(c.am_was_feasible.empty());
  EXPECT_TRUE(c.am_was_changed.empty());
}

TEST(Categorize, EmptyInfeasibleSets) {
  const Partition p = make_partition(3, {0, 1}, {}, {2}, {});
  const Categories c = categorize(p, History::initial(3));
  for (const IndexSet* s : {&c.im_was_feasible, &c.im_was_frozen, &c.im_was_changed, &c.am_was_feasible,
                            &c.am_was_frozen, &c.am_was_changed}) {
    EXPECT_TRUE(s->empty());
  }
}

TEST(Categorize, MovedIndexesFollowTheTable) {
  // Previous step: Ip0 = {0}, Imc = {1} (moved to A), Amc = {2} (moved to I), Ap0 = {3}.
  History h;
  h.feasible_inactive = IndexSet{0};
  h.changed_inactive = IndexSet{1};
  h.changed_active = IndexSet{2};
  h.feasible_active = IndexSet{3};
  // Now 1 is in A with s < -tol, 2 in I with x <= 0, 0 in I with x <= 0, 3 in A with s < -tol.
  const Partition p = make_partition(4, {}, {0, 2}, {}, {1, 3});
  const Categories c = categorize(p, h);
  EXPECT_EQ(c.am_was_changed, IndexSet{1});
  EXPECT_EQ(c.im_was_changed, IndexSet{2});
  EXPECT_EQ(c.im_was_feasible, IndexSet{0});
  EXPECT_EQ(c.am_was_feasible, IndexSet{3});
}

TEST(Categorize, LeakThrows) {
  const Partition p = make_partition(2, {}, {0}, {}, {1});
  try {
    categorize(p, History{});
    FAIL();
  } catch (const QpError& e) {
    EXPECT_EQ(e.code(), ErrorCode::CategoryLeak);
  }
}

TEST(RandSubset, CertainProbabilities) {
  Rng rng(1);
  const IndexSet s = IndexSet::range(50);
  EXPECT_EQ(rand_subset(s, 1.0, rng), s);
  EXPECT_TRUE(rand_subset(s, 0.0, rng).empty());
}

TEST(RandSubset, LawOfLargeNumbers) {
  Rng rng(2024);
  const IndexSet s = IndexSet::range(100000);
  const double frac = static_cast<double>(rand_subset(s, 0.3, rng).size()) / 1e5;
  EXPECT_NEAR(frac, 0.3, 0.01);
}

TEST(RandSubset, PerElementProbabilities) {
  Rng rng(3);
  const std::vector<double> p{1.0, 0.0, 1.0};
  EXPECT_EQ(rand_subset(IndexSet{4, 7, 9}, p, rng), (IndexSet{4, 9}));
}

TEST(RandSubset, Errors) {
  Rng rng(3);
  const std::vector<double> two{0.5, 0.5};
  try {
    rand_subset(IndexSet{1, 2, 3}, two, rng);
    FAIL();
  } catch (const QpError& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
  try {
    rand_subset(IndexSet{1}, 1.5, rng);
    FAIL();
  } catch (const QpError& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidProbability);
  }
}

TEST(RandSubset, Deterministic) {
  Rng a(42), b(42);
  const IndexSet s = IndexSet::range(1000);
  EXPECT_EQ(rand_subset(s, 0.4, a), rand_subset(s, 0.4, b));
}

TEST(SelectExchangeGeneric, EmptyInput) {
  Rng rng(1);
  const Partition p = make_partition(2, {0}, {}, {1}, {});
  const Exchange ex = select_exchange_generic(p, {}, {}, 0.5, rng);
  EXPECT_TRUE(ex.empty());
  EXPECT_TRUE(ex.frozen_inactive.empty());
  EXPECT_TRUE(ex.frozen_active.empty());
}

TEST(SelectExchangeGeneric, ProbabilityBounds) {
  Rng rng(1);
  const Partition p = make_partition(2, {}, {0}, {}, {1});
  const std::vector<double> low{0.05};
  const std::vector<double> ok{0.5};
  EXPECT_THROW(select_exchange_generic(p, low, ok, 0.1, rng), QpError);
  EXPECT_THROW(select_exchange_generic(p, ok, ok, 0.6, rng), QpError);
  EXPECT_THROW(select_exchange_generic(p, ok, ok, 0.0, rng), QpError);
}

TEST(SelectExchangeGeneric, NearFullExchange) {
  Rng rng(6);
  const Index n = 20000;
  std::vector<Index> im, am;
  for (Index i = 0; i < n; ++i) (i % 2 ? am : im).push_back(i);
  const Partition p = make_partition(n, {}, IndexSet(im), {}, IndexSet(am));
  const double sigma = 0.01;
  const std::vector<double> pi(im.size(), 1.0 - sigma);
  const std::vector<double> pa(am.size(), 1.0 - sigma);
  const Exchange ex = select_exchange_generic(p, pi, pa, sigma, rng);
  const double frac =
      static_cast<double>(ex.changed_inactive.size() + ex.changed_active.size()) / static_cast<double>(n);
  EXPECT_NEAR(frac, 1.0 - sigma, 0.005);
  EXPECT_EQ(set_union(ex.changed_inactive, ex.frozen_inactive), p.infeasible_inactive);
  EXPECT_TRUE(set_intersection(ex.changed_inactive, ex.frozen_inactive).empty());
}

TEST(SelectExchangeRas, EmptyCategories) {
  Rng rng(1);
  const Partition p = make_partition(3, {0, 1, 2}, {}, {}, {});
  const Exchange ex = select_exchange_ras(p, Categories{}, ChangeProbabilities::tuned(), rng);
  EXPECT_TRUE(ex.empty());
}

TEST(SelectExchangeRas, AllOnesIsFullExchange) {
  Rng rng(1);
  const Partition p = make_partition(8, {0}, {1, 2, 3}, {4}, {5, 6, 7});
  const Categories c = categorize(p, History::initial(8));
  const Exchange ex = select_exchange_ras(p, c, ChangeProbabilities::uniform(1.0), rng);
  EXPECT_EQ(ex.changed_inactive, p.infeasible_inactive);
  EXPECT_EQ(ex.changed_active, p.infeasible_active);
  EXPECT_TRUE(ex.frozen_inactive.empty());
  EXPECT_TRUE(ex.frozen_active.empty());
}

TEST(SelectExchangeRas, TunedP4BinomialMean) {
  Rng rng(17);
  const Index n = 10000;
  History h;
  h.feasible_active = IndexSet::range(n);
  const Partition p = make_partition(n, {}, {}, {}, IndexSet::range(n));
  const Categories c = categorize(p, h);
  ASSERT_EQ(c.am_was_feasible.size(), static_cast<std::size_t>(n));
  const Exchange ex = select_exchange_ras(p, c, ChangeProbabilities::tuned(), rng);
  // Binomial(1e4, 0.01): mean 100, sd ~ 9.95.
  EXPECT_GE(ex.changed_active.size(), 60U);
  EXPECT_LE(ex.changed_active.size(), 140U);
}

TEST(ChangeProbabilities, TunedValuesAndValidation) {
  const auto t = ChangeProbabilities::tuned();
  EXPECT_EQ(t.p, (std::array<double, 6>{0.5, 0.98, 0.98, 0.01, 0.93, 0.94}));
  EXPECT_NO_THROW(t.validate());
  EXPECT_NO_THROW(ChangeProbabilities::uniform(1.0).validate());
  EXPECT_THROW(ChangeProbabilities::uniform(0.0).validate(), QpError);
  EXPECT_THROW(ChangeProbabilities::uniform(1.1).validate(), QpError);
}

TEST(NextSets, Examples) {
  const Partition p = make_partition(3, {0}, {1}, {}, {2});
  Exchange ex{IndexSet{1}, {}, IndexSet{2}, {}};
  auto [inactive, active] = next_sets(p, ex);
  EXPECT_EQ(inactive, (IndexSet{0, 2}));
  EXPECT_EQ(active, IndexSet{1});

  std::tie(inactive, active) = next_sets(p, full_exchange(p));
  EXPECT_EQ(inactive, set_union(p.feasible_inactive, p.infeasible_active));

  std::tie(inactive, active) = next_sets(p, Exchange{{}, IndexSet{1}, {}, IndexSet{2}});
  EXPECT_EQ(inactive, p.inactive);
  EXPECT_EQ(active, p.active);
}

TEST(NextSets, ExhaustiveSmallN) {
  // Each index takes one of six roles: Ip, Ap, Imc, Imf, Amc, Amf.
  constexpr bool kEndsInactive[6] = {true, false, false, true, true, false};
  for (Index n = 1; n <= 8; ++n) {
    std::size_t states = 1;
    for (Index k = 0; k < n; ++k) states *= 6;
    std::vector<int> role(static_cast<std::size_t>(n));
    for (std::size_t code = 0; code < states; ++code) {
      std::vector<Index> groups[6];
      std::size_t c = code;
      for (Index i = 0; i < n; ++i, c /= 6) {
        role[static_cast<std::size_t>(i)] = static_cast<int>(c % 6);
        groups[c % 6].push_back(i);
      }
      auto set = [&](int r) { return IndexSet::from_sorted(groups[r]); };
      Partition p;
      p.feasible_inactive = set(0);
      p.feasible_active = set(1);
      p.infeasible_inactive = set_union(set(2), set(3));
      p.infeasible_active = set_union(set(4), set(5));
      p.inactive = set_union(p.feasible_inactive, p.infeasible_inactive);
      p.active = set_union(p.feasible_active, p.infeasible_active);
      const Exchange ex{set(2), set(3), set(4), set(5)};
      const auto [inactive, active] = next_sets(p, ex);
      ASSERT_TRUE(is_partition(n, inactive, active));
      for (Index i = 0; i < n; ++i) {
        ASSERT_EQ(inactive.contains(i), kEndsInactive[role[static_cast<std::size_t>(i)]]) << "n=" << n << " code=" << code;
      }
    }
  }
}

TEST(Prop31, DiagonalGivesZero) {
  Rng rng(5);
  const auto est = prop31_montecarlo(100000, rng, {.diagonal_only = true});
  EXPECT_EQ(est.mean_from_inactive, 0.0);
  EXPECT_EQ(est.mean_from_active, 0.0);
  EXPECT_GT(est.inactive_hits, 0U);
  EXPECT_GT(est.active_hits, 0U);
}

TEST(Prop31, SingleSample) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Rng rng(seed);
    const auto est = prop31_montecarlo(1, rng);
    EXPECT_TRUE(std::isinf(est.stderr_difference));
    EXPECT_LE(est.inactive_hits + est.active_hits, 2U);
    EXPECT_TRUE(est.conditional_from_inactive == 0.0 || est.conditional_from_inactive == 1.0);
    EXPECT_TRUE(est.conditional_from_active == 0.0 || est.conditional_from_active == 1.0);
  }
}

TEST(Prop31, ModerateSampleOrdering) {
  Rng rng(11);
  const auto est = prop31_montecarlo(200000, rng);
  EXPECT_LT(est.mean_from_inactive, est.mean_from_active);
  EXPECT_TRUE(std::isfinite(est.stderr_difference));
  // Without stratification the two conditional means agree up to noise.
  EXPECT_NEAR(est.conditional_from_inactive, est.conditional_from_active, 0.01);
}
