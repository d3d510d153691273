#pragma once

// The assignment policies compared in experiments.

#include <memory>
#include <string>

#include "pdef/assignment.hpp"
#include "pdef/gnn.hpp"

namespace pdef {

/// Centralized expert: full payoff matrix, maximum strong matching.
class ExpertPolicy : public AssignmentPolicy {
 public:
  AssignmentMap assign(const GameState& state, const GameConfig& cfg) override;
  std::string name() const override { return "expert"; }
  const MatchResult& last() const { return last_; }

 private:
  MatchResult last_;
};

class GreedyPolicy : public AssignmentPolicy {
 public:
  AssignmentMap assign(const GameState& state, const GameConfig& cfg) override;
  std::string name() const override { return "greedy"; }
};

class RandomPolicy : public AssignmentPolicy {
 public:
  explicit RandomPolicy(std::uint64_t seed) : rng_(seed) {}
  AssignmentMap assign(const GameState& state, const GameConfig& cfg) override;
  std::string name() const override { return "random"; }

 private:
  Rng rng_;
};

/// Learned policy: each defender takes the visible slot with the largest
/// logit; padding slots never win. Used for both the graph model and the
/// per-node baseline.
class LearnedPolicy : public AssignmentPolicy {
 public:
  LearnedPolicy(std::shared_ptr<const GnnModel> model, std::string name);
  AssignmentMap assign(const GameState& state, const GameConfig& cfg) override;
  std::string name() const override { return name_; }

 private:
  std::shared_ptr<const GnnModel> model_;
  std::string name_;
};

/// Per-defender argmax over the first `visible` columns of each logit row;
/// -1 when nothing is visible.
std::vector<int> masked_argmax(const Eigen::MatrixXd& logits, const std::vector<int>& visible);

}  // namespace pdef
