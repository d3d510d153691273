#include "pdef/game.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace pdef {

double scaled_radius(int team_size, int default_team_size) {
  return std::sqrt(static_cast<double>(team_size) / static_cast<double>(default_team_size));
}

GameConfig GameConfig::for_team(int team_size, std::uint64_t seed) {
  return for_team_with_radius(team_size, scaled_radius(team_size), seed);
}

GameConfig GameConfig::for_team_with_radius(int team_size, double radius, std::uint64_t seed) {
  GameConfig cfg;
  cfg.team_size = team_size;
  cfg.radius = radius;
  cfg.arena_radius = 5.0 * radius;
  cfg.rng_seed = seed;
  return cfg;
}

void GameConfig::validate() const {
  if (team_size < 0) throw std::invalid_argument("team_size must be non-negative");
  if (!(radius > 0.0)) throw std::invalid_argument("radius must be positive");
  if (!(capture_radius > 0.0)) throw std::invalid_argument("capture radius must be positive");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (arena_radius < 1.2 * radius) throw std::invalid_argument("arena radius below 1.2R");
  if (reassign_every < 1) throw std::invalid_argument("reassign_every must be >= 1");
  if (intruder_feats < 1 || defender_feats < 0) throw std::invalid_argument("bad feature counts");
}

int GameState::live_defenders() const {
  return static_cast<int>(std::count_if(defenders.begin(), defenders.end(), [](auto& p) { return p.alive; }));
}

int GameState::live_intruders() const {
  return static_cast<int>(std::count_if(intruders.begin(), intruders.end(), [](auto& p) { return p.alive; }));
}

int AssignmentMap::assigned_count() const {
  return static_cast<int>(std::count_if(target.begin(), target.end(), [](auto& t) { return t.has_value(); }));
}

Eigen::Vector3d PairEngagement::breaching_point(double radius) const {
  const double az = defender_azimuth + solution.theta_star;
  return {radius * std::cos(az), radius * std::sin(az), 0.0};
}

PairEngagement engage(const Eigen::Vector3d& defender, const Eigen::Vector3d& intruder,
                      const GameConfig& cfg) {
  const SphericalPos d = from_cartesian(defender / cfg.radius);
  SphericalPos a = from_cartesian(intruder / cfg.radius);
  a.phi = 0.0;
  a.r = std::max(1.0, a.r);
  PairEngagement e;
  e.rel = relative_config(d, a);
  e.rel.phi = std::clamp(e.rel.phi, 0.0, kPi / 2);
  e.solution = solve_breaching(e.rel, cfg.nu);
  e.defender_azimuth = d.psi;
  return e;
}

GameState sample_initial_state(const GameConfig& cfg, Rng& rng) {
  GameState s;
  s.defenders.reserve(cfg.team_size);
  s.intruders.reserve(cfg.team_size);
  for (int i = 0; i < cfg.team_size; ++i) {
    const double psi = uniform(rng, -kPi, kPi);
    const double phi = std::asin(uniform01(rng));
    s.defenders.push_back({i, cfg.radius * to_cartesian({psi, phi, 1.0}), true});
  }
  for (int j = 0; j < cfg.team_size; ++j) {
    const double psi = uniform(rng, -kPi, kPi);
    const double r = uniform(rng, 1.2 * cfg.radius, cfg.arena_radius);
    s.intruders.push_back({j, to_cartesian({psi, 0.0, r}), true});
  }
  return s;
}

GameState sample_initial_state(const GameConfig& cfg) {
  Rng rng(cfg.rng_seed);
  return sample_initial_state(cfg, rng);
}

int nearest_live_defender(const GameState& state, const Eigen::Vector3d& pos) {
  int best = -1;
  double best_d = std::numeric_limits<double>::infinity();
  for (const auto& d : state.defenders) {
    if (!d.alive) continue;
    const double dist = (d.pos - pos).squaredNorm();
    if (dist < best_d) {
      best_d = dist;
      best = d.id;
    }
  }
  return best;
}

Eigen::Vector3d move_on_dome(const Eigen::Vector3d& from, const Eigen::Vector3d& to, double radius,
                             double distance) {
  const Eigen::Vector3d u = from.normalized();
  const Eigen::Vector3d b = to.normalized();
  const double c = std::clamp(u.dot(b), -1.0, 1.0);
  const double angle = std::acos(c);
  const double travel = distance / radius;
  if (angle <= travel) return radius * b;
  Eigen::Vector3d axis = b - c * u;
  if (axis.norm() < 1e-14) {
    // Antipodal rim points: go over the apex.
    axis = Eigen::Vector3d::UnitZ() - u.z() * u;
  }
  axis.normalize();
  Eigen::Vector3d next = std::cos(travel) * u + std::sin(travel) * axis;
  next.z() = std::max(0.0, next.z());
  return radius * next.normalized();
}

GameState step(GameState state, const GameConfig& cfg, const AssignmentMap& assignment) {
  const GameState& before = state;
  std::vector<Eigen::Vector3d> def_next(before.defenders.size());
  std::vector<Eigen::Vector3d> int_next(before.intruders.size());

  for (std::size_t i = 0; i < before.defenders.size(); ++i) {
    const auto& d = before.defenders[i];
    def_next[i] = d.pos;
    if (!d.alive || i >= assignment.target.size() || !assignment.target[i]) continue;
    const int j = *assignment.target[i];
    if (j < 0 || j >= static_cast<int>(before.intruders.size()) || !before.intruders[j].alive) continue;
    const auto e = engage(d.pos, before.intruders[j].pos, cfg);
    def_next[i] = move_on_dome(d.pos, e.breaching_point(cfg.radius), cfg.radius, cfg.dt);
  }

  for (std::size_t j = 0; j < before.intruders.size(); ++j) {
    const auto& a = before.intruders[j];
    int_next[j] = a.pos;
    if (!a.alive) continue;
    Eigen::Vector3d target;
    const int k = nearest_live_defender(before, a.pos);
    if (k >= 0) {
      target = engage(before.defenders[k].pos, a.pos, cfg).breaching_point(cfg.radius);
    } else {
      target = cfg.radius * Eigen::Vector3d(a.pos.x(), a.pos.y(), 0.0).normalized();
    }
    const Eigen::Vector3d delta = target - a.pos;
    const double len = delta.norm();
    int_next[j] = len <= cfg.dt ? target : Eigen::Vector3d(a.pos + delta * (cfg.dt / len));
  }

  for (std::size_t i = 0; i < state.defenders.size(); ++i) state.defenders[i].pos = def_next[i];
  for (std::size_t j = 0; j < state.intruders.size(); ++j) state.intruders[j].pos = int_next[j];

  const double t_next = state.time + cfg.dt;
  for (auto& a : state.intruders) {
    if (!a.alive) continue;
    int hit = -1;
    double hit_d = std::numeric_limits<double>::infinity();
    for (const auto& d : state.defenders) {
      if (!d.alive) continue;
      const double dist = (d.pos - a.pos).norm();
      if (dist <= cfg.capture_radius && dist < hit_d) {
        hit_d = dist;
        hit = d.id;
      }
    }
    if (hit >= 0) {
      a.alive = false;
      state.defenders[hit].alive = false;
      state.captures.push_back({hit, a.id, a.pos, t_next});
    }
  }
  for (auto& a : state.intruders) {
    if (!a.alive) continue;
    if (std::hypot(a.pos.x(), a.pos.y()) <= cfg.radius * (1.0 + 1e-12)) {
      a.alive = false;
      state.intrusions.push_back({a.id, a.pos, t_next});
    }
  }
  state.time = t_next;
  return state;
}

TrajectoryLog::TrajectoryLog(std::ostream& out, int stride) : out_(out), stride_(std::max(1, stride)) {}

void TrajectoryLog::header(const GameConfig& cfg) {
  out_ << "# pdef-trajectory v1\n";
  out_ << "# N=" << cfg.team_size << " R=" << cfg.radius << " dt=" << cfg.dt << " eps=" << cfg.capture_radius
       << "\n";
  out_ << "# time id role x y z event\n";
}

namespace {

void write_line(std::ostream& out, double t, int id, char role, const Eigen::Vector3d& p, const char* event) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%.6f %d %c %.9f %.9f %.9f %s\n", t, id, role, p.x(), p.y(), p.z(), event);
  out << buf;
}

}  // namespace

void TrajectoryLog::record(const GameState& before, const GameState& after, std::int64_t step_index) {
  if (step_index == 0) {
    for (const auto& d : before.defenders) write_line(out_, before.time, d.id, 'D', d.pos, "move");
    for (const auto& a : before.intruders) write_line(out_, before.time, a.id, 'A', a.pos, "move");
  }
  for (std::size_t k = before.captures.size(); k < after.captures.size(); ++k) {
    const auto& c = after.captures[k];
    write_line(out_, c.time, c.defender, 'D', after.defenders[c.defender].pos, "capture");
    write_line(out_, c.time, c.intruder, 'A', c.pos, "capture");
  }
  for (std::size_t k = before.intrusions.size(); k < after.intrusions.size(); ++k) {
    const auto& e = after.intrusions[k];
    write_line(out_, e.time, e.intruder, 'A', e.pos, "intrusion");
  }
  if ((step_index + 1) % stride_ != 0) return;
  for (const auto& d : after.defenders) {
    if (d.alive) write_line(out_, after.time, d.id, 'D', d.pos, "move");
  }
  for (const auto& a : after.intruders) {
    if (a.alive) write_line(out_, after.time, a.id, 'A', a.pos, "move");
  }
}

GameResult run_game(const GameConfig& cfg, AssignmentPolicy& policy, TrajectoryLog* log) {
  return run_game(cfg, policy, sample_initial_state(cfg), log);
}

GameResult run_game(const GameConfig& cfg, AssignmentPolicy& policy, GameState initial, TrajectoryLog* log) {
  cfg.validate();
  GameState state = std::move(initial);
  if (log) log->header(cfg);
  AssignmentMap assignment(state.defenders.size());
  std::int64_t k = 0;
  while (state.live_intruders() > 0) {
    if (k >= cfg.max_steps) throw StepBudgetExceeded("game exceeded the step budget");
    if (k % cfg.reassign_every == 0) assignment = policy.assign(state, cfg);
    GameState next = step(state, cfg, assignment);
    if (log) log->record(state, next, k);
    state = std::move(next);
    ++k;
  }
  GameResult r;
  r.captures = static_cast<int>(state.captures.size());
  r.intrusions = static_cast<int>(state.intrusions.size());
  r.terminal_time = state.time;
  r.steps = k;
  r.final_state = std::move(state);
  return r;
}

}  // namespace pdef
