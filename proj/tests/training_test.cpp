#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "pdef/dataset.hpp"
#include "pdef/training.hpp"

using namespace pdef;

namespace {

std::vector<GraphSample> make_data(std::uint64_t count, int n, std::uint64_t seed) {
  std::vector<GraphSample> out;
  for (std::uint64_t i = 0; i < count; ++i) {
    GameConfig g = GameConfig::for_team(n);
    g.rng_seed = split_seed(seed, {0, i});
    out.push_back(to_graph(label_state(sample_initial_state(g), g, g.rng_seed), GsoNormalization::kRow));
  }
  return out;
}

Split all_train(std::size_t n) {
  Split s;
  for (std::size_t i = 0; i < n; ++i) s.train.push_back(i);
  return s;
}

TrainConfig small_config() {
  TrainConfig cfg;
  cfg.model.input_dim = 39;
  cfg.model.output_dim = 10;
  cfg.batch_size = 8;
  cfg.seed = 3;
  return cfg;
}

}  // namespace

TEST(Training, OverfitsSmallSet) {
  const auto data = make_data(64, 4, 2);
  auto cfg = small_config();
  cfg.epochs = 50;
  const auto r = train(data, all_train(data.size()), cfg);
  const auto stats = evaluate(r.model, data, all_train(data.size()).train);
  EXPECT_GE(stats.acc, 0.9);
  EXPECT_LT(r.report.epochs.back().train_loss, r.report.epochs.front().train_loss);
}

TEST(Training, DeterministicParametersAndLog) {
  const auto data = make_data(48, 4, 5);
  const auto split = split_dataset(data.size(), 7);
  auto cfg = small_config();
  cfg.epochs = 5;
  std::ostringstream log_a, log_b;
  const auto a = train(data, split, cfg, &log_a);
  const auto b = train(data, split, cfg, &log_b);
  EXPECT_EQ(log_a.str(), log_b.str());
  const auto ta = a.model.tensors();
  const auto tb = b.model.tensors();
  ASSERT_EQ(ta.size(), tb.size());
  for (std::size_t k = 0; k < ta.size(); ++k) EXPECT_EQ(*ta[k], *tb[k]);

  cfg.seed = 4;
  std::ostringstream log_c;
  train(data, split, cfg, &log_c);
  EXPECT_NE(log_a.str(), log_c.str());
}

TEST(Training, LogFormat) {
  const auto data = make_data(20, 3, 6);
  auto cfg = small_config();
  cfg.epochs = 3;
  std::ostringstream log;
  const auto r = train(data, split_dataset(data.size(), 1), cfg, &log);
  std::istringstream in(log.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "epoch,lr,train_loss,train_acc,val_loss,val_acc");
  int rows = 0;
  while (std::getline(in, line)) {
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 5);
    EXPECT_EQ(line.rfind(std::to_string(rows) + ",", 0), 0u);
    ++rows;
  }
  EXPECT_EQ(rows, 3);
  EXPECT_GE(r.report.best_epoch, 0);
  EXPECT_LE(r.report.best_epoch, 2);
}

TEST(Training, CosineScheduleTrace) {
  const auto data = make_data(2, 2, 1);
  auto cfg = small_config();
  cfg.epochs = 1501;
  const auto r = train(data, all_train(data.size()), cfg);
  ASSERT_EQ(r.report.epochs.size(), 1501u);
  EXPECT_DOUBLE_EQ(r.report.epochs[0].lr, 5e-3);
  EXPECT_NEAR(r.report.epochs[750].lr, 0.5 * (5e-3 + 1e-6), 1e-12);
  EXPECT_NEAR(r.report.epochs[1500].lr, 1e-6, 1e-15);
}

TEST(Training, BestValidationCheckpointIsReturned) {
  const auto data = make_data(40, 4, 8);
  const auto split = split_dataset(data.size(), 2);
  auto cfg = small_config();
  cfg.epochs = 6;
  const auto r = train(data, split, cfg);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& e : r.report.epochs) best = std::min(best, e.val_loss);
  EXPECT_DOUBLE_EQ(r.report.epochs[r.report.best_epoch].val_loss, best);
  EXPECT_NEAR(evaluate(r.model, data, split.val).loss, best, 1e-12);
}

TEST(Training, NonFiniteLossRaises) {
  auto data = make_data(8, 3, 4);
  data[0].x(0, 0) = std::numeric_limits<double>::quiet_NaN();
  auto cfg = small_config();
  cfg.epochs = 2;
  try {
    train(data, all_train(data.size()), cfg);
    FAIL() << "expected divergence";
  } catch (const TrainingDiverged& e) {
    EXPECT_NE(std::string(e.what()).find("epoch 0"), std::string::npos);
  }
}

TEST(Training, EmptyTrainingSetRejected) {
  const auto data = make_data(4, 2, 1);
  EXPECT_THROW(train(data, Split{}, small_config()), std::invalid_argument);
}
