#include "pdef/optimizer.hpp"

#include <algorithm>
#include <cmath>

namespace pdef {

double cosine_lr(const AdamConfig& cfg, double epoch) {
  const double e = std::clamp(epoch, 0.0, static_cast<double>(cfg.horizon_epochs));
  return cfg.lr_min + 0.5 * (cfg.lr0 - cfg.lr_min) * (1.0 + std::cos(3.14159265358979323846 * e / cfg.horizon_epochs));
}

Adam::Adam(const GnnModel& model, AdamConfig cfg) : cfg_(cfg), m_(model.zeros_like()), v_(model.zeros_like()) {}

void Adam::step(GnnModel& model, const GnnModel& grads, double lr) {
  ++t_;
  const double c1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
  auto p = model.tensors();
  auto g = grads.tensors();
  auto m = m_.tensors();
  auto v = v_.tensors();
  for (std::size_t i = 0; i < p.size(); ++i) {
    m[i]->array() = cfg_.beta1 * m[i]->array() + (1.0 - cfg_.beta1) * g[i]->array();
    v[i]->array() = cfg_.beta2 * v[i]->array() + (1.0 - cfg_.beta2) * g[i]->array().square();
    p[i]->array() -= lr * (m[i]->array() / c1) / ((v[i]->array() / c2).sqrt() + cfg_.eps);
  }
}

}  // namespace pdef
