#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "pdef/dataset.hpp"
#include "pdef/gnn.hpp"
#include "pdef/optimizer.hpp"

namespace pdef {

struct TrainConfig {
  ModelSpec model;
  AdamConfig adam;
  int epochs = 200;
  int batch_size = 64;
  std::uint64_t seed = 1;        ///< initialization and shuffling
  std::uint64_t split_seed = 7;  ///< train/val/test permutation
  GsoNormalization gso = GsoNormalization::kRow;
};

struct EpochStats {
  int epoch = 0;
  double lr = 0.0;
  double train_loss = 0.0;
  double train_acc = 0.0;
  double val_loss = 0.0;
  double val_acc = 0.0;
};

struct TrainReport {
  std::vector<EpochStats> epochs;
  int best_epoch = -1;
  double test_loss = 0.0;
  double test_acc = 0.0;
  double wall_seconds = 0.0;
};

struct TrainResult {
  GnnModel model;  ///< best-validation checkpoint
  TrainReport report;
};

class TrainingDiverged : public std::runtime_error {
 public:
  TrainingDiverged(const std::string& what, TrainReport report)
      : std::runtime_error(what), report(std::move(report)) {}
  TrainReport report;
};

struct EvalStats {
  double loss = 0.0;
  double acc = 0.0;
  int counted = 0;
};

/// Mean loss and top-1 accuracy over labelled rows of the given samples.
EvalStats evaluate(const GnnModel& model, const std::vector<GraphSample>& data,
                   const std::vector<std::size_t>& indices, int batch_size = 256);

/// Trains on `split.train`, selects on `split.val`, reports `split.test`.
/// When `log` is non-null, one CSV line per epoch is written to it.
TrainResult train(const std::vector<GraphSample>& data, const Split& split, const TrainConfig& cfg,
                  std::ostream* log = nullptr);

/// Loads a dataset file, splits it, and trains.
TrainResult train_from_file(const std::string& dataset_path, const TrainConfig& cfg, std::ostream* log = nullptr);

void write_metrics_header(std::ostream& out);
void write_metrics_line(std::ostream& out, const EpochStats& e);

}  // namespace pdef
