#pragma once

#include <string>
#include <utility>
#include <vector>

#include "pdef/game.hpp"

namespace pdef::testing {

/// Defender i chases intruder i while both are alive.
class PairwisePolicy : public AssignmentPolicy {
 public:
  AssignmentMap assign(const GameState& state, const GameConfig&) override {
    AssignmentMap a(state.defenders.size());
    for (std::size_t i = 0; i < state.defenders.size() && i < state.intruders.size(); ++i) {
      if (state.defenders[i].alive && state.intruders[i].alive) a.target[i] = static_cast<int>(i);
    }
    return a;
  }
  std::string name() const override { return "pairwise"; }
};

inline Eigen::Vector3d dome_point(double radius, double psi, double phi) {
  return radius * to_cartesian({psi, phi, 1.0});
}

inline Eigen::Vector3d ground_point(double psi, double r) { return to_cartesian({psi, 0.0, r}); }

inline GameState make_state(std::vector<Eigen::Vector3d> defenders, std::vector<Eigen::Vector3d> intruders) {
  GameState s;
  for (std::size_t i = 0; i < defenders.size(); ++i) s.defenders.push_back({static_cast<int>(i), defenders[i], true});
  for (std::size_t j = 0; j < intruders.size(); ++j) s.intruders.push_back({static_cast<int>(j), intruders[j], true});
  return s;
}

/// Unit-radius config for hand-built 1-vs-1 scenarios.
inline GameConfig unit_config(int team_size = 1) {
  auto cfg = GameConfig::for_team_with_radius(team_size, 1.0, 1);
  return cfg;
}

}  // namespace pdef::testing
