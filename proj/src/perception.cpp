#include "pdef/perception.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pdef {

int LocalPerception::slot_of(int intruder) const {
  auto it = std::find(visible_ids.begin(), visible_ids.end(), intruder);
  return it == visible_ids.end() ? -1 : static_cast<int>(it - visible_ids.begin());
}

bool is_visible(const Eigen::Vector3d& defender, const Eigen::Vector3d& intruder, const GameConfig& cfg) {
  if ((intruder - defender).norm() > cfg.sensing_range) return false;
  if (cfg.fov >= 2.0 * kPi) return true;
  const double psi_d = std::atan2(defender.y(), defender.x());
  const Eigen::Vector2d outward(std::cos(psi_d), std::sin(psi_d));
  const Eigen::Vector2d bearing(intruder.x() - defender.x(), intruder.y() - defender.y());
  const double len = bearing.norm();
  if (len == 0.0) return true;
  return outward.dot(bearing) >= len * (std::cos(cfg.fov / 2.0) - 1e-12);
}

std::vector<int> visible_intruders(const PlayerState& defender, const std::vector<PlayerState>& intruders,
                                   const GameConfig& cfg) {
  struct Candidate {
    int id;
    double range;
    double rel_psi;
  };
  const double psi_d = std::atan2(defender.pos.y(), defender.pos.x());
  std::vector<Candidate> seen;
  for (const auto& a : intruders) {
    if (!a.alive || !is_visible(defender.pos, a.pos, cfg)) continue;
    seen.push_back({a.id, (a.pos - defender.pos).norm(),
                    wrap_angle(std::atan2(a.pos.y(), a.pos.x()) - psi_d)});
  }
  std::sort(seen.begin(), seen.end(), [](const Candidate& x, const Candidate& y) {
    return x.range != y.range ? x.range < y.range : x.id < y.id;
  });
  if (static_cast<int>(seen.size()) > cfg.intruder_feats) seen.resize(cfg.intruder_feats);
  std::sort(seen.begin(), seen.end(), [](const Candidate& x, const Candidate& y) {
    if (x.rel_psi != y.rel_psi) return x.rel_psi > y.rel_psi;
    if (x.range != y.range) return x.range < y.range;
    return x.id < y.id;
  });
  std::vector<int> ids;
  ids.reserve(seen.size());
  for (const auto& c : seen) ids.push_back(c.id);
  return ids;
}

LocalPerception perceive(const GameState& state, int defender, const GameConfig& cfg) {
  const auto& d = state.defenders[defender];
  LocalPerception p;
  p.defender = defender;
  p.features = Eigen::VectorXd::Zero(raw_feature_dim(cfg));
  p.visible_ids = visible_intruders(d, state.intruders, cfg);

  const SphericalPos ds = from_cartesian(d.pos / cfg.radius);
  for (std::size_t s = 0; s < p.visible_ids.size(); ++s) {
    const auto& a = state.intruders[p.visible_ids[s]];
    const SphericalPos as = from_cartesian(a.pos / cfg.radius);
    p.features.segment<3>(3 * s) << wrap_angle(as.psi - ds.psi), ds.phi, as.r;
  }

  std::vector<std::pair<double, int>> mates;
  for (const auto& o : state.defenders) {
    if (!o.alive || o.id == defender) continue;
    const double dist = (o.pos - d.pos).norm();
    if (dist <= cfg.comm_range) mates.emplace_back(dist, o.id);
  }
  std::sort(mates.begin(), mates.end());
  if (static_cast<int>(mates.size()) > cfg.defender_feats) mates.resize(cfg.defender_feats);
  const int base = 3 * cfg.intruder_feats;
  for (std::size_t s = 0; s < mates.size(); ++s) {
    const auto& o = state.defenders[mates[s].second];
    const SphericalPos os = from_cartesian(o.pos / cfg.radius);
    p.features.segment<3>(base + 3 * s) << wrap_angle(os.psi - ds.psi), os.phi, mates[s].first / cfg.radius;
    p.neighbor_ids.push_back(o.id);
  }
  return p;
}

Eigen::MatrixXd normalize_gso(const Eigen::MatrixXd& adjacency, GsoNormalization norm) {
  const Eigen::VectorXd deg = adjacency.rowwise().sum();
  Eigen::MatrixXd s = adjacency;
  switch (norm) {
    case GsoNormalization::kRaw:
      break;
    case GsoNormalization::kRow:
      for (Eigen::Index i = 0; i < s.rows(); ++i) {
        if (deg(i) > 0) s.row(i) /= deg(i);
      }
      break;
    case GsoNormalization::kSymmetric:
      for (Eigen::Index i = 0; i < s.rows(); ++i) {
        for (Eigen::Index j = 0; j < s.cols(); ++j) {
          if (s(i, j) != 0.0) s(i, j) /= std::sqrt(deg(i) * deg(j));
        }
      }
      break;
  }
  return s;
}

CommGraph build_comm_graph(const std::vector<Eigen::Vector3d>& positions, double comm_range,
                           GsoNormalization norm) {
  const auto n = static_cast<Eigen::Index>(positions.size());
  CommGraph g;
  g.adjacency = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if ((positions[i] - positions[j]).norm() <= comm_range) {
        g.adjacency(i, j) = 1.0;
        g.adjacency(j, i) = 1.0;
      }
    }
  }
  g.gso = normalize_gso(g.adjacency, norm);
  return g;
}

TeamPerception encode_perception(const GameState& state, const GameConfig& cfg) {
  TeamPerception t;
  std::vector<Eigen::Vector3d> positions;
  for (const auto& d : state.defenders) {
    if (!d.alive) continue;
    t.defender_ids.push_back(d.id);
    positions.push_back(d.pos);
  }
  const int n = t.rows();
  t.features.resize(n, raw_feature_dim(cfg));
  t.local.reserve(n);
  for (int k = 0; k < n; ++k) {
    t.local.push_back(perceive(state, t.defender_ids[k], cfg));
    t.features.row(k) = t.local.back().features.transpose();
  }
  t.graph = build_comm_graph(positions, cfg.comm_range, cfg.gso);
  return t;
}

Eigen::MatrixXd graph_shift(const Eigen::MatrixXd& gso, const Eigen::MatrixXd& features) {
  if (gso.rows() != gso.cols() || gso.cols() != features.rows()) {
    throw std::invalid_argument("graph_shift: dimension mismatch");
  }
  return gso * features;
}

std::vector<int> expanded_sensible_set(const TeamPerception& team, int row) {
  std::vector<int> ids = team.local[row].visible_ids;
  for (int k = 0; k < team.rows(); ++k) {
    if (team.graph.adjacency(row, k) != 0.0) {
      const auto& other = team.local[k].visible_ids;
      ids.insert(ids.end(), other.begin(), other.end());
    }
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

}  // namespace pdef
