#include "pdef/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pdef {

PayoffMatrix PayoffMatrix::from_values(const Eigen::MatrixXd& values) {
  PayoffMatrix p;
  p.values = values;
  p.mask = !values.array().isNaN();
  p.values = p.mask.select(values, 0.0);
  for (Eigen::Index i = 0; i < values.rows(); ++i) p.defender_ids.push_back(static_cast<int>(i));
  for (Eigen::Index j = 0; j < values.cols(); ++j) p.intruder_ids.push_back(static_cast<int>(j));
  p.total_defenders = static_cast<int>(values.rows());
  return p;
}

PayoffMatrix build_payoffs(const GameState& state, const GameConfig& cfg) {
  PayoffMatrix p;
  p.total_defenders = static_cast<int>(state.defenders.size());
  for (const auto& d : state.defenders) {
    if (d.alive) p.defender_ids.push_back(d.id);
  }
  for (const auto& a : state.intruders) {
    if (a.alive) p.intruder_ids.push_back(a.id);
  }
  p.values = Eigen::MatrixXd::Zero(p.rows(), p.cols());
  p.mask.setConstant(p.rows(), p.cols(), false);
  for (int i = 0; i < p.rows(); ++i) {
    const auto& d = state.defenders[p.defender_ids[i]];
    for (int j = 0; j < p.cols(); ++j) {
      const auto& a = state.intruders[p.intruder_ids[j]];
      if (!is_visible(d.pos, a.pos, cfg)) continue;
      const auto e = engage(d.pos, a.pos, cfg);
      if (!e.solution.converged) {
        ++p.nonconverged;
        continue;
      }
      p.values(i, j) = e.solution.payoff;
      p.mask(i, j) = true;
    }
  }
  return p;
}

namespace {

// Square min-cost assignment (shortest augmenting paths with potentials).
// Returns row -> column plus the final dual potentials.
struct HungarianResult {
  std::vector<int> row_to_col;
  std::vector<double> u;
  std::vector<double> v;
};

HungarianResult hungarian(const Eigen::MatrixXd& cost) {
  const int n = static_cast<int>(cost.rows());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  HungarianResult r;
  r.row_to_col.assign(n, -1);
  for (int j = 1; j <= n; ++j) r.row_to_col[p[j] - 1] = j - 1;
  r.u.assign(u.begin() + 1, u.end());
  r.v.assign(v.begin() + 1, v.end());
  return r;
}

// Perfect matching over the equality subgraph that can be steered row by row
// toward a preferred column while keeping earlier rows locked.
class TightMatching {
 public:
  TightMatching(std::vector<std::vector<char>> tight, std::vector<int> row_to_col)
      : tight_(std::move(tight)), row_to_col_(std::move(row_to_col)), col_to_row_(row_to_col_.size()) {
    for (std::size_t r = 0; r < row_to_col_.size(); ++r) col_to_row_[row_to_col_[r]] = static_cast<int>(r);
  }

  int col_of(int row) const { return row_to_col_[row]; }

  // Moves `row` onto `col` if a perfect tight matching with rows < row
  // unchanged still exists. `row` itself stays locked afterwards.
  bool try_force(int row, int col) {
    if (!tight_[row][col]) return false;
    if (row_to_col_[row] == col) return true;
    auto saved_rc = row_to_col_;
    auto saved_cr = col_to_row_;
    const int displaced = col_to_row_[col];
    if (displaced < row) return false;
    const int freed = row_to_col_[row];
    row_to_col_[row] = col;
    col_to_row_[col] = row;
    row_to_col_[displaced] = -1;
    col_to_row_[freed] = -1;
    std::vector<char> seen(col_to_row_.size(), 0);
    if (augment(displaced, row, seen)) return true;
    row_to_col_ = std::move(saved_rc);
    col_to_row_ = std::move(saved_cr);
    return false;
  }

 private:
  bool augment(int r, int locked_through, std::vector<char>& seen) {
    const int n = static_cast<int>(col_to_row_.size());
    for (int c = 0; c < n; ++c) {
      if (!tight_[r][c] || seen[c]) continue;
      seen[c] = 1;
      const int owner = col_to_row_[c];
      if (owner >= 0 && owner <= locked_through) continue;
      if (owner < 0 || augment(owner, locked_through, seen)) {
        row_to_col_[r] = c;
        col_to_row_[c] = r;
        return true;
      }
    }
    return false;
  }

  std::vector<std::vector<char>> tight_;
  std::vector<int> row_to_col_;
  std::vector<int> col_to_row_;
};

}  // namespace

MatchResult expert_matching(const PayoffMatrix& payoffs) {
  const int nd = payoffs.rows();
  const int na = payoffs.cols();
  MatchResult result;
  result.assignment = AssignmentMap(payoffs.total_defenders);
  if (nd == 0) return result;

  // Rows: defenders then one dummy row per intruder. Columns: intruders then
  // one dummy column per defender ("no strong pair"). Every strong edge is
  // shifted by -M so cardinality dominates the game value.
  double shift = 1.0;
  for (int i = 0; i < nd; ++i) {
    for (int j = 0; j < na; ++j) {
      if (payoffs.strong(i, j)) shift += std::abs(payoffs.values(i, j));
    }
  }
  const int n = nd + na;
  const double forbidden = 4.0 * (n + 1) * (shift + 1.0);
  Eigen::MatrixXd cost = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < nd; ++i) {
    for (int j = 0; j < na; ++j) {
      cost(i, j) = payoffs.strong(i, j) ? payoffs.values(i, j) - shift : forbidden;
    }
  }

  const auto h = hungarian(cost);
  const double tol = 1e-9 * (1.0 + shift);
  std::vector<std::vector<char>> tight(n, std::vector<char>(n, 0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      tight[i][j] = cost(i, j) < forbidden && std::abs(cost(i, j) - h.u[i] - h.v[j]) <= tol;
    }
  }
  TightMatching m(std::move(tight), h.row_to_col);
  for (int i = 0; i < nd; ++i) {
    bool fixed = false;
    for (int j = 0; j < na && !fixed; ++j) {
      if (payoffs.strong(i, j)) fixed = m.try_force(i, j);
    }
    for (int c = na; c < n && !fixed; ++c) fixed = m.try_force(i, c);
  }

  std::vector<char> taken(na, 0);
  std::vector<char> matched(nd, 0);
  for (int i = 0; i < nd; ++i) {
    const int j = m.col_of(i);
    if (j < na && payoffs.strong(i, j)) {
      taken[j] = 1;
      matched[i] = 1;
      ++result.strong_count;
      result.game_value += payoffs.values(i, j);
      result.assignment.target[payoffs.defender_ids[i]] = payoffs.intruder_ids[j];
      result.strong_pairs.emplace_back(payoffs.defender_ids[i], payoffs.intruder_ids[j]);
    }
  }
  for (int i = 0; i < nd; ++i) {
    if (matched[i]) continue;
    int best = -1;
    for (int j = 0; j < na; ++j) {
      if (!payoffs.mask(i, j) || taken[j]) continue;
      if (best < 0 || payoffs.values(i, j) < payoffs.values(i, best)) best = j;
    }
    if (best >= 0) {
      taken[best] = 1;
      result.assignment.target[payoffs.defender_ids[i]] = payoffs.intruder_ids[best];
    }
  }
  return result;
}

ExpandedPerception expand_perception(const GameState& state, const GameConfig& cfg,
                                     const TeamPerception& team, bool with_payoffs) {
  ExpandedPerception e;
  e.total_defenders = static_cast<int>(state.defenders.size());
  e.defender_ids = team.defender_ids;
  e.sensible.reserve(team.rows());
  e.payoffs.resize(team.rows());
  for (int k = 0; k < team.rows(); ++k) {
    e.sensible.push_back(expanded_sensible_set(team, k));
    if (!with_payoffs) continue;
    const auto& d = state.defenders[team.defender_ids[k]];
    for (int id : e.sensible.back()) {
      e.payoffs[k].push_back(engage(d.pos, state.intruders[id].pos, cfg).solution.payoff);
    }
  }
  return e;
}

AssignmentMap greedy_matching(const ExpandedPerception& perception) {
  AssignmentMap a(perception.total_defenders);
  for (std::size_t k = 0; k < perception.defender_ids.size(); ++k) {
    const auto& ids = perception.sensible[k];
    const auto& pay = perception.payoffs[k];
    if (ids.empty()) continue;
    const auto best = std::min_element(pay.begin(), pay.end()) - pay.begin();
    a.target[perception.defender_ids[k]] = ids[best];
  }
  return a;
}

AssignmentMap random_matching(const ExpandedPerception& perception, Rng& rng) {
  AssignmentMap a(perception.total_defenders);
  for (std::size_t k = 0; k < perception.defender_ids.size(); ++k) {
    const auto& ids = perception.sensible[k];
    if (ids.empty()) continue;
    a.target[perception.defender_ids[k]] = ids[uniform_index(rng, ids.size())];
  }
  return a;
}

}  // namespace pdef
