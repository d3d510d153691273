#include <algorithm>
#include <numeric>

#include <gtest/gtest.h>

#include "pdef/perception.hpp"
#include "test_support.hpp"

using namespace pdef;
using pdef::testing::dome_point;
using pdef::testing::ground_point;
using pdef::testing::make_state;

namespace {

GameConfig cfg10() { return GameConfig::for_team_with_radius(10, 1.0, 1); }

}  // namespace

TEST(Perception, OutwardRadialIsVisible) {
  auto cfg = cfg10();
  const auto d = dome_point(1.0, 0.7, 0.3);
  EXPECT_TRUE(is_visible(d, ground_point(0.7, 2.5), cfg));
}

TEST(Perception, BehindIsMasked) {
  auto cfg = cfg10();
  const auto d = dome_point(1.0, 0.0, 0.3);
  // Straight back toward the dome center and beyond.
  EXPECT_FALSE(is_visible(d, ground_point(kPi, 1.5), cfg));
  EXPECT_FALSE(is_visible(d, Eigen::Vector3d(0.5, 0.0, 0.0), cfg));
}

TEST(Perception, FovBoundaryIncluded) {
  auto cfg = cfg10();
  const auto d = dome_point(1.0, 0.0, 0.0);
  const Eigen::Vector3d side = d + Eigen::Vector3d(0.0, 0.8, 0.0);
  EXPECT_TRUE(is_visible(d, side, cfg));
  EXPECT_FALSE(is_visible(d, side + Eigen::Vector3d(-1e-6, 0.0, 0.0), cfg));
}

TEST(Perception, SensingRangeOverride) {
  auto cfg = cfg10();
  cfg.sensing_range = 1.0;
  const auto d = dome_point(1.0, 0.0, 0.0);
  EXPECT_TRUE(is_visible(d, ground_point(0.0, 1.9), cfg));
  EXPECT_FALSE(is_visible(d, ground_point(0.0, 2.1), cfg));
}

TEST(Perception, CapKeepsTenNearestClockwise) {
  auto cfg = cfg10();
  std::vector<Eigen::Vector3d> intr;
  for (int k = 0; k < 12; ++k) intr.push_back(ground_point(-0.6 + 0.1 * k, 1.3 + 0.2 * k));
  auto s = make_state({dome_point(1.0, 0.0, 0.0)}, intr);
  const auto ids = visible_intruders(s.defenders[0], s.intruders, cfg);
  ASSERT_EQ(ids.size(), 10u);
  // The two farthest (ids 10, 11) are dropped.
  EXPECT_EQ(std::count(ids.begin(), ids.end(), 10), 0);
  EXPECT_EQ(std::count(ids.begin(), ids.end(), 11), 0);
  // Clockwise: decreasing azimuth, which here is decreasing id.
  for (std::size_t s2 = 0; s2 < ids.size(); ++s2) EXPECT_EQ(ids[s2], 9 - static_cast<int>(s2));
}

TEST(Perception, FeatureLayout) {
  auto cfg = cfg10();
  auto s = make_state({dome_point(1.0, 0.2, 0.4), dome_point(1.0, 0.5, 0.4)}, {ground_point(0.3, 2.0)});
  const auto p = perceive(s, 0, cfg);
  ASSERT_EQ(p.features.size(), 39);
  EXPECT_NEAR(p.features(0), 0.1, 1e-12);
  EXPECT_NEAR(p.features(1), 0.4, 1e-12);
  EXPECT_NEAR(p.features(2), 2.0, 1e-12);
  for (int k = 3; k < 30; ++k) EXPECT_EQ(p.features(k), 0.0);
  EXPECT_NEAR(p.features(30), 0.3, 1e-12);
  EXPECT_NEAR(p.features(31), 0.4, 1e-12);
  EXPECT_NEAR(p.features(32), (s.defenders[1].pos - s.defenders[0].pos).norm(), 1e-12);
  for (int k = 33; k < 39; ++k) EXPECT_EQ(p.features(k), 0.0);
  EXPECT_EQ(p.slot_of(0), 0);
}

TEST(Perception, LoneDefender) {
  auto cfg = cfg10();
  auto s = make_state({dome_point(1.0, 0.0, 0.5)}, {ground_point(0.0, 2.0)});
  const auto t = encode_perception(s, cfg);
  ASSERT_EQ(t.rows(), 1);
  EXPECT_TRUE(t.features.row(0).tail(9).isZero());
  EXPECT_TRUE(t.graph.adjacency.isZero());
}

TEST(Perception, TwoDefendersSwapGso) {
  auto cfg = cfg10();
  // Chord 0.5 on the unit rim.
  const double dpsi = 2.0 * std::asin(0.25);
  auto s = make_state({dome_point(1.0, 0.0, 0.0), dome_point(1.0, dpsi, 0.0)}, {ground_point(0.0, 2.0)});
  const auto t = encode_perception(s, cfg);
  Eigen::Matrix2d expected;
  expected << 0, 1, 1, 0;
  EXPECT_TRUE(t.graph.adjacency.isApprox(expected));
  EXPECT_TRUE(t.graph.gso.isApprox(expected));
}

TEST(Perception, DeadDefendersDropOut) {
  auto cfg = cfg10();
  auto s = make_state({dome_point(1.0, 0.0, 0.2), dome_point(1.0, 0.3, 0.2), dome_point(1.0, 0.6, 0.2)},
                      {ground_point(0.0, 2.0)});
  s.defenders[1].alive = false;
  const auto t = encode_perception(s, cfg);
  EXPECT_EQ(t.defender_ids, (std::vector<int>{0, 2}));
  EXPECT_EQ(t.features.rows(), 2);
}

TEST(Perception, GsoNormalizations) {
  Eigen::Matrix3d a;
  a << 0, 1, 1, 1, 0, 0, 1, 0, 0;
  const auto row = normalize_gso(a, GsoNormalization::kRow);
  EXPECT_NEAR(row(0, 1), 0.5, 1e-15);
  EXPECT_NEAR(row(1, 0), 1.0, 1e-15);
  const auto sym = normalize_gso(a, GsoNormalization::kSymmetric);
  EXPECT_NEAR(sym(0, 1), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_TRUE(normalize_gso(a, GsoNormalization::kRaw).isApprox(a));
}

TEST(Perception, GraphShiftExamples) {
  EXPECT_TRUE(graph_shift(Eigen::MatrixXd::Zero(3, 3), Eigen::MatrixXd::Random(3, 4)).isZero());
  Eigen::MatrixXd s(2, 2), x(2, 2), y(2, 2);
  s << 0, 1, 1, 0;
  x << 1, 2, 3, 4;
  y << 3, 4, 1, 2;
  EXPECT_EQ(graph_shift(s, x), y);
  EXPECT_THROW(graph_shift(s, Eigen::MatrixXd::Zero(3, 2)), std::invalid_argument);
  EXPECT_THROW(graph_shift(Eigen::MatrixXd::Zero(2, 3), Eigen::MatrixXd::Zero(3, 2)), std::invalid_argument);
}

TEST(Perception, GraphShiftMatchesNeighborSum) {
  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Eigen::Vector3d> pos;
    for (int i = 0; i < 5; ++i) pos.push_back(dome_point(1.0, uniform(rng, -kPi, kPi), std::asin(uniform01(rng))));
    const auto g = build_comm_graph(pos, 1.0, GsoNormalization::kRow);
    Eigen::MatrixXd x(5, 7);
    for (int i = 0; i < 5; ++i)
      for (int f = 0; f < 7; ++f) x(i, f) = uniform(rng, -1, 1);
    const auto y = graph_shift(g.gso, x);
    for (int i = 0; i < 5; ++i) {
      std::vector<int> nbrs;
      for (int j = 0; j < 5; ++j)
        if (j != i && (pos[i] - pos[j]).norm() <= 1.0) nbrs.push_back(j);
      for (int f = 0; f < 7; ++f) {
        double acc = 0.0;
        for (int j : nbrs) acc += x(j, f) / nbrs.size();
        EXPECT_NEAR(y(i, f), acc, 1e-12);
      }
    }
  }
}

TEST(Perception, GsoRowSumsAndSpectralBound) {
  Rng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Eigen::Vector3d> pos;
    for (int i = 0; i < 12; ++i) pos.push_back(dome_point(1.0, uniform(rng, -kPi, kPi), std::asin(uniform01(rng))));
    const auto g = build_comm_graph(pos, 0.8, GsoNormalization::kRow);
    EXPECT_TRUE(g.adjacency.isApprox(g.adjacency.transpose()));
    for (int i = 0; i < 12; ++i) {
      EXPECT_EQ(g.adjacency(i, i), 0.0);
      const double rs = g.gso.row(i).sum();
      EXPECT_TRUE(std::abs(rs) < 1e-15 || std::abs(rs - 1.0) < 1e-12);
      for (int j = 0; j < 12; ++j) EXPECT_EQ(g.gso(i, j) != 0.0, g.adjacency(i, j) != 0.0);
    }
    Eigen::MatrixXd x = Eigen::MatrixXd::Random(12, 4);
    const double bound = x.cwiseAbs().maxCoeff();
    for (int k = 0; k < 5; ++k) {
      x = graph_shift(g.gso, x);
      EXPECT_LE(x.cwiseAbs().maxCoeff(), bound + 1e-12);
    }
  }
}

TEST(Perception, PermutationEquivariance) {
  auto cfg = GameConfig::for_team(10, 77);
  auto s = sample_initial_state(cfg);
  std::vector<int> perm(10);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(3);
  std::shuffle(perm.begin(), perm.end(), rng);
  // Relabel: new defender k is old defender perm[k].
  GameState q = s;
  for (int k = 0; k < 10; ++k) {
    q.defenders[k] = s.defenders[perm[k]];
    q.defenders[k].id = k;
  }
  const auto t = encode_perception(s, cfg);
  const auto u = encode_perception(q, cfg);
  const auto y = graph_shift(t.graph.gso, t.features);
  const auto z = graph_shift(u.graph.gso, u.features);
  for (int k = 0; k < 10; ++k) {
    EXPECT_EQ(u.features.row(k), t.features.row(perm[k]));
    EXPECT_LE((z.row(k) - y.row(perm[k])).cwiseAbs().maxCoeff(), 1e-12);
    for (int l = 0; l < 10; ++l) EXPECT_EQ(u.graph.gso(k, l), t.graph.gso(perm[k], perm[l]));
  }
}

TEST(Perception, ReencodingIsIdentical) {
  auto cfg = GameConfig::for_team(10, 4);
  auto s = sample_initial_state(cfg);
  const auto a = encode_perception(s, cfg);
  const auto b = encode_perception(s, cfg);
  EXPECT_EQ(a.features, b.features);
  for (int k = 0; k < a.rows(); ++k) {
    EXPECT_EQ(a.local[k].visible_ids, b.local[k].visible_ids);
    // Real intruder triples are never all-zero.
    for (std::size_t sl = 0; sl < a.local[k].visible_ids.size(); ++sl) EXPECT_GE(a.features(k, 3 * sl + 2), 1.0);
  }
}

TEST(Perception, ExpandedSensibleSet) {
  auto cfg = cfg10();
  auto s = make_state({dome_point(1.0, 0.0, 0.1), dome_point(1.0, 0.4, 0.1), dome_point(1.0, kPi, 0.1)},
                      {ground_point(0.0, 2.0), ground_point(0.9, 1.6), ground_point(kPi, 2.0)});
  const auto t = encode_perception(s, cfg);
  const auto e0 = expanded_sensible_set(t, 0);
  const auto e2 = expanded_sensible_set(t, 2);
  EXPECT_EQ(e2, std::vector<int>{2});
  for (int id : t.local[1].visible_ids) EXPECT_TRUE(std::binary_search(e0.begin(), e0.end(), id));
  for (int id : t.local[0].visible_ids) EXPECT_TRUE(std::binary_search(e0.begin(), e0.end(), id));
  EXPECT_TRUE(std::is_sorted(e0.begin(), e0.end()));
}
