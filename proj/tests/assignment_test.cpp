#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <gtest/gtest.h>

#include "matching_oracle.hpp"
#include "oracles.hpp"
#include "pdef/assignment.hpp"
#include "test_support.hpp"

using namespace pdef;
using pdef::testing::dome_point;
using pdef::testing::ground_point;
using pdef::testing::make_state;

namespace {

using oracle::brute_force;
using oracle::kMasked;
using oracle::random_matrix;

std::vector<int> strong_targets(const MatchResult& m, int nd) {
  std::vector<int> t(nd, -1);
  for (auto [d, a] : m.strong_pairs) t[d] = a;
  return t;
}

void expect_valid(const MatchResult& m) {
  std::vector<int> seen;
  for (const auto& t : m.assignment.target)
    if (t) seen.push_back(*t);
  std::sort(seen.begin(), seen.end());
  EXPECT_EQ(std::adjacent_find(seen.begin(), seen.end()), seen.end());
}

}  // namespace

TEST(Expert, SinglePair) {
  Eigen::MatrixXd v(1, 1);
  v << -0.3;
  const auto m = expert_matching(PayoffMatrix::from_values(v));
  EXPECT_EQ(m.strong_count, 1);
  EXPECT_EQ(m.game_value, -0.3);
  EXPECT_EQ(m.assignment.target[0], 0);
}

TEST(Expert, CardinalityBeatsValue) {
  Eigen::MatrixXd v(2, 2);
  v << -1, -5, -4, kMasked;
  const auto m = expert_matching(PayoffMatrix::from_values(v));
  EXPECT_EQ(m.strong_count, 2);
  EXPECT_EQ(m.game_value, -9.0);
  EXPECT_EQ(m.assignment.target[0], 1);
  EXPECT_EQ(m.assignment.target[1], 0);
}

TEST(Expert, EmptyEdgeSetFallsBack) {
  Eigen::MatrixXd v(2, 2);
  v << 0.5, 0.2, 0.1, kMasked;
  const auto m = expert_matching(PayoffMatrix::from_values(v));
  EXPECT_EQ(m.strong_count, 0);
  EXPECT_EQ(m.game_value, 0.0);
  EXPECT_EQ(m.assignment.target[0], 1);
  EXPECT_EQ(m.assignment.target[1], 0);
  expect_valid(m);
}

TEST(Expert, FallbackTakesCheapestRemaining) {
  Eigen::MatrixXd v(2, 3);
  v << -1, 0.4, 0.3, -2, 0.2, kMasked;
  const auto m = expert_matching(PayoffMatrix::from_values(v));
  EXPECT_EQ(m.strong_count, 1);
  EXPECT_EQ(m.assignment.target[1], 0);
  EXPECT_EQ(m.assignment.target[0], 2);
}

TEST(Expert, TiesResolveLexicographically) {
  const auto m = expert_matching(PayoffMatrix::from_values(Eigen::MatrixXd::Constant(3, 3, -1.0)));
  EXPECT_EQ(strong_targets(m, 3), (std::vector<int>{0, 1, 2}));
  Eigen::MatrixXd v(2, 2);
  v << -1, -2, -2, -1;
  const auto w = expert_matching(PayoffMatrix::from_values(v));
  EXPECT_EQ(strong_targets(w, 2), (std::vector<int>{1, 0}));
}

TEST(Expert, MatchesBruteForce) {
  Rng rng(2024);
  for (int n = 2; n <= 6; ++n) {
    for (int trial = 0; trial < 100; ++trial) {
      const auto p = random_matrix(rng, n, n);
      const auto m = expert_matching(p);
      const auto b = brute_force(p);
      ASSERT_EQ(m.strong_count, b.strong) << "n=" << n << " trial=" << trial;
      ASSERT_EQ(m.game_value, b.value) << "n=" << n << " trial=" << trial;
      ASSERT_EQ(strong_targets(m, n), b.targets);
      expect_valid(m);
    }
  }
}

TEST(Expert, MatchesBruteForceRectangularAndTied) {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const int nd = 1 + static_cast<int>(uniform_index(rng, 5));
    const int na = 1 + static_cast<int>(uniform_index(rng, 5));
    Eigen::MatrixXd v(nd, na);
    for (int i = 0; i < nd; ++i)
      for (int j = 0; j < na; ++j) {
        const double u = uniform01(rng);
        // Coarse values make equal-V ties common.
        v(i, j) = u < 0.2 ? kMasked : static_cast<double>(static_cast<int>(uniform_index(rng, 4)) - 2);
      }
    const auto p = PayoffMatrix::from_values(v);
    const auto m = expert_matching(p);
    const auto b = brute_force(p);
    ASSERT_EQ(m.strong_count, b.strong) << v;
    ASSERT_EQ(m.game_value, b.value) << v;
    ASSERT_EQ(strong_targets(m, nd), b.targets) << v;
    expect_valid(m);
  }
}

TEST(Expert, AddingNegativeEdgeNeverLowersCardinality) {
  Rng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    auto p = random_matrix(rng, 5, 5);
    const int before = expert_matching(p).strong_count;
    std::vector<std::pair<int, int>> open;
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j)
        if (!p.strong(i, j)) open.emplace_back(i, j);
    if (open.empty()) continue;
    const auto [i, j] = open[uniform_index(rng, open.size())];
    p.values(i, j) = -uniform(rng, 0.01, 3.0);
    p.mask(i, j) = true;
    EXPECT_GE(expert_matching(p).strong_count, before);
  }
}

TEST(Expert, ScaleInvariantEdgeSet) {
  Rng rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    auto p = random_matrix(rng, 6, 6);
    const auto a = expert_matching(p);
    p.values *= uniform(rng, 0.01, 100.0);
    const auto b = expert_matching(p);
    EXPECT_EQ(a.strong_pairs, b.strong_pairs);
  }
}

TEST(Payoffs, HeadOnEntry) {
  auto cfg = pdef::testing::unit_config();
  auto s = make_state({dome_point(1.0, 0.0, kPi / 4)}, {ground_point(0.0, 2.0)});
  const auto p = build_payoffs(s, cfg);
  ASSERT_TRUE(p.mask(0, 0));
  EXPECT_NEAR(p.values(0, 0), kPi / 4 - 1.0, 1e-10);
}

TEST(Payoffs, BehindIsMasked) {
  auto cfg = pdef::testing::unit_config();
  auto s = make_state({dome_point(1.0, 0.0, 0.3)}, {ground_point(kPi, 2.0)});
  const auto p = build_payoffs(s, cfg);
  EXPECT_FALSE(p.mask(0, 0));
  EXPECT_EQ(p.nonconverged, 0);
}

TEST(Payoffs, MatchGridOracle) {
  Rng rng(31);
  int checked = 0;
  for (int trial = 0; trial < 10; ++trial) {
    auto cfg = GameConfig::for_team(3, 500 + trial);
    auto s = sample_initial_state(cfg);
    const auto p = build_payoffs(s, cfg);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        EXPECT_EQ(p.mask(i, j), is_visible(s.defenders[i].pos, s.intruders[j].pos, cfg));
        if (!p.mask(i, j)) continue;
        const auto rel = relative_config(from_cartesian(s.defenders[i].pos / cfg.radius),
                                         from_cartesian(s.intruders[j].pos / cfg.radius));
        EXPECT_NEAR(p.values(i, j), oracle::breaching_grid(rel.psi, rel.phi, rel.r).payoff, 1e-5);
        ++checked;
      }
    }
  }
  EXPECT_GT(checked, 10);
}

TEST(Payoffs, DeadPlayersExcluded) {
  auto cfg = GameConfig::for_team(4, 3);
  auto s = sample_initial_state(cfg);
  s.defenders[1].alive = false;
  s.intruders[2].alive = false;
  const auto p = build_payoffs(s, cfg);
  EXPECT_EQ(p.defender_ids, (std::vector<int>{0, 2, 3}));
  EXPECT_EQ(p.intruder_ids, (std::vector<int>{0, 1, 3}));
  const auto m = expert_matching(p);
  ASSERT_EQ(m.assignment.target.size(), 4u);
  EXPECT_FALSE(m.assignment.target[1].has_value());
  for (const auto& t : m.assignment.target) EXPECT_NE(t, std::optional<int>(2));
}

TEST(Greedy, Examples) {
  ExpandedPerception e;
  e.total_defenders = 3;
  e.defender_ids = {0, 1, 2};
  e.sensible = {{4}, {1, 4, 6}, {}};
  e.payoffs = {{0.3}, {0.2, -0.5, -0.1}, {}};
  const auto a = greedy_matching(e);
  EXPECT_EQ(a.target[0], 4);
  EXPECT_EQ(a.target[1], 4);  // collisions are allowed
  EXPECT_FALSE(a.target[2].has_value());
}

TEST(Greedy, MatchesLinearScan) {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    ExpandedPerception e;
    e.total_defenders = 6;
    for (int k = 0; k < 6; ++k) {
      e.defender_ids.push_back(k);
      const int m = static_cast<int>(uniform_index(rng, 5));
      e.sensible.emplace_back();
      e.payoffs.emplace_back();
      for (int s = 0; s < m; ++s) {
        e.sensible.back().push_back(s * 2);
        e.payoffs.back().push_back(uniform(rng, -2, 2));
      }
    }
    const auto a = greedy_matching(e);
    for (int k = 0; k < 6; ++k) {
      int best = -1;
      double bv = std::numeric_limits<double>::infinity();
      for (std::size_t s = 0; s < e.sensible[k].size(); ++s)
        if (e.payoffs[k][s] < bv) {
          bv = e.payoffs[k][s];
          best = e.sensible[k][s];
        }
      if (best < 0)
        EXPECT_FALSE(a.target[k].has_value());
      else
        EXPECT_EQ(a.target[k], best);
    }
  }
}

TEST(RandomMatching, EmptyAndSingleton) {
  ExpandedPerception e;
  e.total_defenders = 2;
  e.defender_ids = {0, 1};
  e.sensible = {{}, {7}};
  e.payoffs = {{}, {}};
  Rng rng(1);
  for (int k = 0; k < 50; ++k) {
    const auto a = random_matching(e, rng);
    EXPECT_FALSE(a.target[0].has_value());
    EXPECT_EQ(a.target[1], 7);
  }
}

TEST(RandomMatching, UniformFrequencies) {
  ExpandedPerception e;
  e.total_defenders = 1;
  e.defender_ids = {0};
  e.sensible = {{2, 3, 5, 8}};
  Rng rng(99);
  std::array<int, 9> counts{};
  const int draws = 100000;
  for (int k = 0; k < draws; ++k) ++counts[*random_matching(e, rng).target[0]];
  double chi2 = 0.0;
  for (int id : {2, 3, 5, 8}) {
    const double f = static_cast<double>(counts[id]) / draws;
    EXPECT_NEAR(f, 0.25, 0.01);
    chi2 += std::pow(counts[id] - draws / 4.0, 2) / (draws / 4.0);
  }
  // 3 degrees of freedom, 99.9th percentile.
  EXPECT_LT(chi2, 16.27);
}

TEST(RandomMatching, DeterministicGivenSeed) {
  ExpandedPerception e;
  e.total_defenders = 3;
  e.defender_ids = {0, 1, 2};
  e.sensible = {{1, 2, 3}, {0, 4}, {2, 5, 6, 7}};
  Rng a(17), b(17);
  for (int k = 0; k < 100; ++k) EXPECT_EQ(random_matching(e, a).target, random_matching(e, b).target);
}
