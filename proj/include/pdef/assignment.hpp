#pragma once

// Defender-to-intruder assignment: the centralized expert (max-cardinality
// strong matching with minimum game value) and the decentralized greedy and
// random baselines.

#include <utility>
#include <vector>

#include <Eigen/Core>

#include "pdef/game.hpp"
#include "pdef/perception.hpp"
#include "pdef/random.hpp"

namespace pdef {

/// Payoffs between live defenders (rows) and live intruders (columns).
/// Entries where `mask` is false carry no payoff.
struct PayoffMatrix {
  std::vector<int> defender_ids;
  std::vector<int> intruder_ids;
  Eigen::MatrixXd values;
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> mask;
  int total_defenders = 0;  ///< size of the AssignmentMap built from this matrix
  int nonconverged = 0;     ///< entries masked because the solver failed

  int rows() const { return static_cast<int>(defender_ids.size()); }
  int cols() const { return static_cast<int>(intruder_ids.size()); }
  bool strong(int i, int j) const { return mask(i, j) && values(i, j) < 0.0; }

  /// Matrix with ids 0..n-1; masked entries are given as NaN.
  static PayoffMatrix from_values(const Eigen::MatrixXd& values);
};

PayoffMatrix build_payoffs(const GameState& state, const GameConfig& cfg);

struct MatchResult {
  AssignmentMap assignment;
  int strong_count = 0;
  double game_value = 0.0;
  std::vector<std::pair<int, int>> strong_pairs;  ///< (defender id, intruder id)
};

/// Maximum number of strong pairs (p < 0); among those, minimum sum of their
/// payoffs; remaining ties broken toward the lexicographically smallest
/// per-defender target list. Defenders left without a strong pair then take,
/// in id order, their cheapest sensible intruder not yet taken.
MatchResult expert_matching(const PayoffMatrix& payoffs);

/// Per-defender sensible sets with payoffs, as seen through the expanded
/// (1-hop) perception.
struct ExpandedPerception {
  int total_defenders = 0;
  std::vector<int> defender_ids;
  std::vector<std::vector<int>> sensible;
  std::vector<std::vector<double>> payoffs;
};

ExpandedPerception expand_perception(const GameState& state, const GameConfig& cfg,
                                     const TeamPerception& team, bool with_payoffs);

/// Each defender independently takes its minimum-payoff sensible intruder.
AssignmentMap greedy_matching(const ExpandedPerception& perception);

/// Each defender takes a uniformly random sensible intruder.
AssignmentMap random_matching(const ExpandedPerception& perception, Rng& rng);

}  // namespace pdef
