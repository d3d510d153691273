#pragma once

#include "pdef/gnn.hpp"

namespace pdef {

struct AdamConfig {
  double lr0 = 5e-3;
  double lr_min = 1e-6;
  int horizon_epochs = 1500;
  double beta1 = 0.5;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// Cosine annealing from lr0 to lr_min over the horizon, flat afterwards.
double cosine_lr(const AdamConfig& cfg, double epoch);

class Adam {
 public:
  Adam(const GnnModel& model, AdamConfig cfg = {});

  void step(GnnModel& model, const GnnModel& grads, double lr);
  long steps() const { return t_; }
  const AdamConfig& config() const { return cfg_; }

 private:
  AdamConfig cfg_;
  GnnModel m_;
  GnnModel v_;
  long t_ = 0;
};

}  // namespace pdef
