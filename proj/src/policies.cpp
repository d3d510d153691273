#include "pdef/policies.hpp"

#include <stdexcept>

namespace pdef {

AssignmentMap ExpertPolicy::assign(const GameState& state, const GameConfig& cfg) {
  last_ = expert_matching(build_payoffs(state, cfg));
  return last_.assignment;
}

AssignmentMap GreedyPolicy::assign(const GameState& state, const GameConfig& cfg) {
  return greedy_matching(expand_perception(state, cfg, encode_perception(state, cfg), true));
}

AssignmentMap RandomPolicy::assign(const GameState& state, const GameConfig& cfg) {
  return random_matching(expand_perception(state, cfg, encode_perception(state, cfg), false), rng_);
}

LearnedPolicy::LearnedPolicy(std::shared_ptr<const GnnModel> model, std::string name)
    : model_(std::move(model)), name_(std::move(name)) {
  if (!model_) throw std::invalid_argument("LearnedPolicy: null model");
}

std::vector<int> masked_argmax(const Eigen::MatrixXd& logits, const std::vector<int>& visible) {
  std::vector<int> out(logits.rows(), -1);
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    const int m = std::min<int>(visible[i], static_cast<int>(logits.cols()));
    if (m <= 0) continue;
    Eigen::Index arg;
    logits.row(i).head(m).maxCoeff(&arg);
    out[i] = static_cast<int>(arg);
  }
  return out;
}

AssignmentMap LearnedPolicy::assign(const GameState& state, const GameConfig& cfg) {
  AssignmentMap a(state.defenders.size());
  const auto team = encode_perception(state, cfg);
  if (team.rows() == 0) return a;
  if (model_->spec().input_dim != team.features.cols() || model_->spec().output_dim != cfg.intruder_feats) {
    throw std::invalid_argument("LearnedPolicy: model does not match the perception layout");
  }
  const auto logits = forward(*model_, team.features, team.graph.gso);
  std::vector<int> visible;
  for (const auto& l : team.local) visible.push_back(static_cast<int>(l.visible_ids.size()));
  const auto slots = masked_argmax(logits, visible);
  for (int k = 0; k < team.rows(); ++k) {
    if (slots[k] >= 0) a.target[team.defender_ids[k]] = team.local[k].visible_ids[slots[k]];
  }
  return a;
}

}  // namespace pdef
