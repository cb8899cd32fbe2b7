#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "csg/exact.hpp"
#include "csg/instances.hpp"
#include "oracles.hpp"

using namespace csg;

namespace {

constexpr Distribution kDists[] = {Distribution::uniform, Distribution::uniform_scaled, Distribution::normal,
                                   Distribution::normal_scaled, Distribution::normally_distributed};

}  // namespace

TEST(BruteForce, SmallCases) {
  const Instance one(1, std::vector<double>{3.0});
  const auto r1 = brute_force_optimal(one);
  EXPECT_EQ(r1.best.to_string(), "1");
  EXPECT_EQ(r1.best_value, 3.0);
  EXPECT_EQ(r1.work, 1u);

  const auto r4 = brute_force_optimal(generate_instance(4, Distribution::uniform, 1));
  EXPECT_EQ(r4.work, 15u);
}

TEST(BruteForce, SuperadditiveGameFormsGrandCoalition) {
  // v(C) = |C|^2 + noise below 0.5 is superadditive: (a+b)^2 - a^2 - b^2 >= 2.
  const int n = 7;
  const auto noise = generate_instance(n, Distribution::uniform, 5);
  std::vector<double> v(full_mask(n));
  for (Mask c = 1; c <= full_mask(n); ++c) v[c - 1] = std::pow(std::popcount(c), 2) + 0.5 * noise.value(c);
  EXPECT_EQ(brute_force_optimal(Instance(n, v)).best, CoalitionStructure::grand(n));
}

TEST(BruteForce, TiesKeepLexicographicallySmallest) {
  const Instance flat(5, std::vector<double>(31, 0.0));
  EXPECT_EQ(brute_force_optimal(flat).best.to_string(), "11111");
  // Additive game: every structure is worth n.
  std::vector<double> v(31);
  for (Mask c = 1; c <= 31; ++c) v[c - 1] = std::popcount(c);
  EXPECT_EQ(brute_force_optimal(Instance(5, v)).best.to_string(), "11111");
}

TEST(BruteForce, RejectsLargeInstances) {
  EXPECT_THROW(brute_force_optimal(generate_instance(14, Distribution::uniform, 1)), std::invalid_argument);
}

TEST(BruteForce, MatchesIndependentSearch) {
  for (int n = 1; n <= 7; ++n) {
    for (auto d : kDists) {
      const auto inst = generate_instance(n, d, 1000 + n);
      const auto r = brute_force_optimal(inst);
      EXPECT_DOUBLE_EQ(r.best_value, oracle::best_value(inst));
      EXPECT_DOUBLE_EQ(r.best_value, cs_value(r.best, inst));
      EXPECT_EQ(r.work, oracle::bell(n));
    }
  }
}

TEST(Dp, TrivialAndSpotCounts) {
  const Instance one(1, std::vector<double>{3.0});
  const auto r = dp_optimal(one);
  EXPECT_EQ(r.best, CoalitionStructure::grand(1));
  EXPECT_EQ(r.best_value, 3.0);
  EXPECT_EQ(r.work, 0u);
  const auto inst = generate_instance(4, Distribution::uniform, 2);
  EXPECT_EQ(dp_optimal(inst).work, 25u);
  EXPECT_EQ(idp_optimal(inst).work, 13u);
}

TEST(Dp, AgreesWithBruteForce) {
  for (int n = 1; n <= 8; ++n) {
    for (auto d : kDists) {
      for (std::uint64_t s = 0; s < 4; ++s) {
        const auto inst = generate_instance(n, d, 31 * n + s);
        const double expected = brute_force_optimal(inst).best_value;
        const auto dp = dp_optimal(inst);
        EXPECT_TRUE(values_equal(dp.best_value, expected));
        EXPECT_TRUE(values_equal(cs_value(dp.best, inst), dp.best_value));
      }
    }
  }
}

TEST(Dp, TableInvariants) {
  const int n = 9;
  const auto inst = generate_instance(n, Distribution::normally_distributed, 3);
  for (auto variant : {DpVariant::full, DpVariant::improved}) {
    const auto t = dp_tables(inst, variant);
    for (Mask c = 1; c <= full_mask(n); ++c) {
      EXPECT_GE(t.t2[c], inst.value(c));
      if (t.t1[c] == 0) {
        EXPECT_EQ(t.t2[c], inst.value(c));
      } else {
        EXPECT_EQ(t.t1[c] & ~c, 0u);
        EXPECT_NE(t.t1[c], c);
        EXPECT_DOUBLE_EQ(t.t2[c], t.t2[t.t1[c]] + t.t2[c ^ t.t1[c]]);
      }
    }
    const auto best = reconstruct(t, n);
    EXPECT_TRUE(values_equal(cs_value(best, inst), t.t2[full_mask(n)]));
  }
}

TEST(Idp, AgreesWithDp) {
  Rng rng(77);
  for (int i = 0; i < 50; ++i) {
    const int n = 2 + static_cast<int>(rng.below(11));
    const auto inst = generate_instance(n, kDists[i % 5], 500 + i);
    const auto dp = dp_optimal(inst);
    const auto idp = idp_optimal(inst);
    EXPECT_TRUE(values_equal(dp.best_value, idp.best_value)) << n;
    EXPECT_TRUE(values_equal(cs_value(idp.best, inst), idp.best_value));
  }
}

TEST(SplitCounts, Formulas) {
  EXPECT_EQ(split_count(2, 2), 3);
  EXPECT_EQ(split_count(1, 3), 4);
  const auto one = splitting_counts(1);
  EXPECT_EQ(one.dp, 0);
  EXPECT_EQ(one.idp, 0);
  const auto four = splitting_counts(4);
  EXPECT_EQ(four.dp, 25);
  EXPECT_EQ(four.idp, 13);
  EXPECT_THROW(splitting_counts(0), std::invalid_argument);
  EXPECT_EQ(splitting_counts(3).idp, splitting_counts(3).dp);
  for (int n = 4; n <= 30; ++n) {
    const auto c = splitting_counts(n);
    EXPECT_LT(c.idp, c.dp) << n;
  }
  // DP visits every unordered bipartition of every coalition: (3^n - 2^(n+1) + 1) / 2.
  for (int n = 1; n <= 30; ++n) {
    BigInt three = 1, two = 1;
    for (int i = 0; i < n; ++i) three *= 3;
    for (int i = 0; i <= n; ++i) two *= 2;
    EXPECT_EQ(splitting_counts(n).dp, (three - two + 1) / 2) << n;
  }
}

TEST(SplitCounts, MatchBruteForceCount) {
  for (int n = 1; n <= 10; ++n) {
    const auto c = splitting_counts(n);
    EXPECT_EQ(c.dp, oracle::split_count(n, false)) << n;
    EXPECT_EQ(c.idp, oracle::split_count(n, true)) << n;
  }
}

TEST(SplitCounts, InstrumentedSolversMatchFormulas) {
  for (int n = 1; n <= 14; ++n) {
    const auto inst = generate_instance(n, Distribution::uniform, n);
    const auto c = splitting_counts(n);
    EXPECT_EQ(BigInt(dp_optimal(inst).work), c.dp) << n;
    EXPECT_EQ(BigInt(idp_optimal(inst).work), c.idp) << n;
  }
}

TEST(Sandholm, PhaseOneVisitsBottomTwoLevels) {
  const auto inst4 = generate_instance(4, Distribution::uniform, 4);
  const auto r = sandholm_anytime(inst4, 8);
  EXPECT_EQ(r.nodes_searched, 8u);
  EXPECT_EQ(r.bound, 4.0);
  EXPECT_EQ(r.phase, AnytimePhase::top_down);

  for (int n = 1; n <= 10; ++n) {
    const auto inst = generate_instance(n, Distribution::normal, n);
    const std::uint64_t nodes = std::uint64_t{1} << (n - 1);
    const auto done = sandholm_anytime(inst, nodes);
    EXPECT_EQ(done.nodes_searched, nodes);
    // Up to two agents the bottom levels are the whole space.
    EXPECT_EQ(done.bound, n <= 2 ? 1.0 : n);
    EXPECT_EQ(done.phase, n <= 2 ? AnytimePhase::complete : AnytimePhase::top_down);
    if (n > 1) {
      const auto early = sandholm_anytime(inst, nodes - 1);
      EXPECT_EQ(early.phase, AnytimePhase::bottom_levels);
      EXPECT_TRUE(std::isinf(early.bound));
    }
  }
}

TEST(Sandholm, FullBudgetIsExact) {
  for (int n = 1; n <= 8; ++n) {
    for (auto d : kDists) {
      const auto inst = generate_instance(n, d, 7 * n);
      const auto r = sandholm_anytime(inst);
      EXPECT_EQ(r.phase, AnytimePhase::complete);
      EXPECT_EQ(r.bound, 1.0);
      EXPECT_EQ(r.nodes_searched, oracle::bell(n));
      EXPECT_DOUBLE_EQ(r.best_value, brute_force_optimal(inst).best_value);
      EXPECT_DOUBLE_EQ(r.best_value, cs_value(r.best, inst));
    }
  }
}

TEST(Sandholm, AnyPrefixBeatsGrandCoalition) {
  const auto inst = generate_instance(7, Distribution::uniform, 3);
  double last = -1.0;
  for (std::uint64_t budget : {1, 2, 10, 64, 100, 500, 877}) {
    const auto r = sandholm_anytime(inst, budget);
    EXPECT_GE(r.best_value, inst.value(full_mask(7)));
    EXPECT_GE(r.best_value, last);
    EXPECT_EQ(r.nodes_searched, budget);
    last = r.best_value;
  }
  EXPECT_EQ(sandholm_anytime(inst, 0).nodes_searched, 0u);
}

TEST(Sandholm, BoundIsSound) {
  Rng rng(12);
  for (int i = 0; i < 200; ++i) {
    const int n = 2 + static_cast<int>(rng.below(7));
    const auto inst = generate_instance(n, kDists[i % 5], 900 + i);
    const auto phase1 = sandholm_anytime(inst, std::uint64_t{1} << (n - 1));
    const double opt = dp_optimal(inst).best_value;
    EXPECT_LE(opt, phase1.bound * phase1.best_value * (1 + 1e-12));
  }
}
