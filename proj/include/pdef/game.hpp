#pragma once

// N-vs-N hemisphere engagement: world state, Nash-optimal kinematic motion,
// capture and intrusion rules, and the simulation loop.
//
// Positions here are Cartesian in meters. Defenders live on the dome of
// radius R, intruders on the ground plane z = 0. Both move at unit speed.

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "pdef/geometry.hpp"
#include "pdef/random.hpp"

namespace pdef {

enum class GsoNormalization { kRaw, kRow, kSymmetric };

inline constexpr int kDefaultTeamSize = 10;

/// R = sqrt(N / N_def).
double scaled_radius(int team_size, int default_team_size = kDefaultTeamSize);

struct GameConfig {
  int team_size = kDefaultTeamSize;
  double radius = 1.0;
  double capture_radius = 0.02;
  double dt = 0.005;
  double fov = kPi;
  double comm_range = 1.0;
  SpeedRatio nu{};
  std::uint64_t rng_seed = 0;
  double arena_radius = 5.0;
  int reassign_every = 1;
  int intruder_feats = 10;
  int defender_feats = 3;
  double sensing_range = std::numeric_limits<double>::infinity();
  GsoNormalization gso = GsoNormalization::kRow;
  std::int64_t max_steps = 1'000'000;

  /// Config for team size N with R = sqrt(N/10) and arena radius 5R.
  static GameConfig for_team(int team_size, std::uint64_t seed = 0);
  /// Same, with an explicit perimeter radius.
  static GameConfig for_team_with_radius(int team_size, double radius, std::uint64_t seed = 0);

  void validate() const;
};

struct PlayerState {
  int id = 0;
  Eigen::Vector3d pos = Eigen::Vector3d::Zero();
  bool alive = true;
};

struct CaptureEvent {
  int defender = 0;
  int intruder = 0;
  Eigen::Vector3d pos = Eigen::Vector3d::Zero();
  double time = 0.0;
};

struct IntrusionEvent {
  int intruder = 0;
  Eigen::Vector3d pos = Eigen::Vector3d::Zero();
  double time = 0.0;
};

struct GameState {
  double time = 0.0;
  std::vector<PlayerState> defenders;
  std::vector<PlayerState> intruders;
  std::vector<CaptureEvent> captures;
  std::vector<IntrusionEvent> intrusions;

  int live_defenders() const;
  int live_intruders() const;
};

/// Per-defender target intruder id, indexed by defender id.
struct AssignmentMap {
  std::vector<std::optional<int>> target;

  AssignmentMap() = default;
  explicit AssignmentMap(std::size_t defenders) : target(defenders) {}
  int assigned_count() const;
};

/// Normalized pair geometry for a defender and an intruder in meters.
struct PairEngagement {
  RelativeConfig rel;
  BreachingSolution solution;
  double defender_azimuth = 0.0;

  /// Breaching point in meters: R * (cos, sin, 0) at defender_azimuth + theta*.
  Eigen::Vector3d breaching_point(double radius) const;
};

PairEngagement engage(const Eigen::Vector3d& defender, const Eigen::Vector3d& intruder,
                      const GameConfig& cfg);

/// Area-uniform defenders on the dome, intruders with uniform azimuth and
/// ground radius uniform in [1.2R, arena_radius].
GameState sample_initial_state(const GameConfig& cfg, Rng& rng);
GameState sample_initial_state(const GameConfig& cfg);

/// Index of the nearest live defender to `pos`, or -1.
int nearest_live_defender(const GameState& state, const Eigen::Vector3d& pos);

/// Great-circle move of a point on the dome toward a target on the dome.
Eigen::Vector3d move_on_dome(const Eigen::Vector3d& from, const Eigen::Vector3d& to, double radius,
                             double distance);

/// One simultaneous move of every live player, then capture checks, then
/// intrusion checks, then the clock advances.
GameState step(GameState state, const GameConfig& cfg, const AssignmentMap& assignment);

class AssignmentPolicy {
 public:
  virtual ~AssignmentPolicy() = default;
  virtual AssignmentMap assign(const GameState& state, const GameConfig& cfg) = 0;
  virtual std::string name() const = 0;
};

class StepBudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Line-delimited trajectory records: `time id role x y z event`, role D|A,
/// event move|capture|intrusion. Lines starting with '#' are comments.
class TrajectoryLog {
 public:
  explicit TrajectoryLog(std::ostream& out, int stride = 1);
  void header(const GameConfig& cfg);
  void record(const GameState& before, const GameState& after, std::int64_t step_index);

 private:
  std::ostream& out_;
  int stride_;
};

struct GameResult {
  int captures = 0;
  int intrusions = 0;
  double terminal_time = 0.0;
  std::int64_t steps = 0;
  GameState final_state;
};

GameResult run_game(const GameConfig& cfg, AssignmentPolicy& policy, TrajectoryLog* log = nullptr);
GameResult run_game(const GameConfig& cfg, AssignmentPolicy& policy, GameState initial,
                    TrajectoryLog* log = nullptr);

}  // namespace pdef
