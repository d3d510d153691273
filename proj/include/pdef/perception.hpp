#pragma once

// Decentralized perception: FOV filtering, clockwise slot ordering, padded
// feature blocks, the communication graph and the graph shift operator.

#include <vector>

#include <Eigen/Core>

#include "pdef/game.hpp"

namespace pdef {

struct LocalPerception {
  int defender = -1;
  /// Slot -> intruder id, clockwise; at most intruder_feats entries.
  std::vector<int> visible_ids;
  /// Communicated teammates, nearest first; at most defender_feats entries.
  std::vector<int> neighbor_ids;
  /// 3*intruder_feats intruder triples then 3*defender_feats defender
  /// triples; missing slots are zero.
  Eigen::VectorXd features;

  /// Slot holding `intruder`, or -1.
  int slot_of(int intruder) const;
};

struct CommGraph {
  Eigen::MatrixXd adjacency;  ///< symmetric 0/1, zero diagonal
  Eigen::MatrixXd gso;
};

/// Perception of the live defender team; row k describes defender_ids[k].
struct TeamPerception {
  std::vector<int> defender_ids;
  std::vector<LocalPerception> local;
  Eigen::MatrixXd features;
  CommGraph graph;

  int rows() const { return static_cast<int>(defender_ids.size()); }
};

inline int raw_feature_dim(int intruder_feats, int defender_feats) {
  return 3 * intruder_feats + 3 * defender_feats;
}
inline int raw_feature_dim(const GameConfig& cfg) {
  return raw_feature_dim(cfg.intruder_feats, cfg.defender_feats);
}

/// FOV rule: the ground bearing from the defender's footprint to the intruder
/// lies within +-fov/2 of the outward radial direction (boundary included),
/// and the intruder is within the sensing range.
bool is_visible(const Eigen::Vector3d& defender, const Eigen::Vector3d& intruder, const GameConfig& cfg);

/// The intruder_feats nearest visible live intruders, ordered clockwise
/// (decreasing relative azimuth; ties by range, then id).
std::vector<int> visible_intruders(const PlayerState& defender, const std::vector<PlayerState>& intruders,
                                   const GameConfig& cfg);

LocalPerception perceive(const GameState& state, int defender, const GameConfig& cfg);

CommGraph build_comm_graph(const std::vector<Eigen::Vector3d>& positions, double comm_range,
                           GsoNormalization norm);

Eigen::MatrixXd normalize_gso(const Eigen::MatrixXd& adjacency, GsoNormalization norm);

TeamPerception encode_perception(const GameState& state, const GameConfig& cfg);

/// S X. Throws std::invalid_argument on a dimension mismatch.
Eigen::MatrixXd graph_shift(const Eigen::MatrixXd& gso, const Eigen::MatrixXd& features);

/// Own visible set unioned with the visible sets of 1-hop neighbours in the
/// communication graph; sorted intruder ids.
std::vector<int> expanded_sensible_set(const TeamPerception& team, int row);

}  // namespace pdef
