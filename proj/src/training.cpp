#include "pdef/training.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>

namespace pdef {

namespace {

struct Batch {
  Eigen::MatrixXd x;
  SparseGso s;
  std::vector<int> labels;
};

Batch make_batch(const std::vector<GraphSample>& data, const std::vector<std::size_t>& idx, std::size_t begin,
                 std::size_t end) {
  Eigen::Index rows = 0;
  for (std::size_t k = begin; k < end; ++k) rows += data[idx[k]].x.rows();
  Batch b;
  const Eigen::Index width = data[idx[begin]].x.cols();
  b.x.resize(rows, width);
  b.labels.reserve(rows);
  std::vector<Eigen::Triplet<double>> trip;
  Eigen::Index off = 0;
  for (std::size_t k = begin; k < end; ++k) {
    const auto& g = data[idx[k]];
    b.x.middleRows(off, g.x.rows()) = g.x;
    b.labels.insert(b.labels.end(), g.labels.begin(), g.labels.end());
    for (Eigen::Index r = 0; r < g.s.outerSize(); ++r)
      for (SparseGso::InnerIterator it(g.s, r); it; ++it) trip.emplace_back(off + it.row(), off + it.col(), it.value());
    off += g.x.rows();
  }
  b.s.resize(rows, rows);
  b.s.setFromTriplets(trip.begin(), trip.end());
  return b;
}

}  // namespace

EvalStats evaluate(const GnnModel& model, const std::vector<GraphSample>& data,
                   const std::vector<std::size_t>& indices, int batch_size) {
  EvalStats e;
  double loss_sum = 0.0;
  int correct = 0;
  for (std::size_t i = 0; i < indices.size(); i += batch_size) {
    const auto b = make_batch(data, indices, i, std::min(indices.size(), i + batch_size));
    const auto r = cross_entropy(forward(model, b.x, b.s), b.labels);
    loss_sum += r.loss * r.counted;
    correct += r.correct;
    e.counted += r.counted;
  }
  if (e.counted > 0) {
    e.loss = loss_sum / e.counted;
    e.acc = static_cast<double>(correct) / e.counted;
  }
  return e;
}

void write_metrics_header(std::ostream& out) { out << "epoch,lr,train_loss,train_acc,val_loss,val_acc\n"; }

void write_metrics_line(std::ostream& out, const EpochStats& e) {
  char line[256];
  std::snprintf(line, sizeof line, "%d,%.10g,%.10g,%.6f,%.10g,%.6f\n", e.epoch, e.lr, e.train_loss, e.train_acc,
                e.val_loss, e.val_acc);
  out << line;
}

TrainResult train(const std::vector<GraphSample>& data, const Split& split, const TrainConfig& cfg,
                  std::ostream* log) {
  if (split.train.empty()) throw std::invalid_argument("train: empty training set");
  const auto t0 = std::chrono::steady_clock::now();
  Rng init(split_seed(cfg.seed, 0));
  GnnModel model = GnnModel::xavier(cfg.model, init);
  Adam opt(model, cfg.adam);
  TrainResult result{model, {}};
  double best_val = std::numeric_limits<double>::infinity();
  if (log) write_metrics_header(*log);

  std::vector<std::size_t> order = split.train;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    Rng shuffle(split_seed(cfg.seed, {1, static_cast<std::uint64_t>(epoch)}));
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[uniform_index(shuffle, i)]);
    EpochStats st;
    st.epoch = epoch;
    st.lr = cosine_lr(cfg.adam, epoch);
    double loss_sum = 0.0;
    int counted = 0, correct = 0;
    for (std::size_t i = 0; i < order.size(); i += cfg.batch_size) {
      const auto b = make_batch(data, order, i, std::min(order.size(), i + cfg.batch_size));
      ForwardCache cache;
      const auto r = cross_entropy(forward(model, b.x, b.s, &cache), b.labels);
      if (!std::isfinite(r.loss)) {
        result.report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        throw TrainingDiverged("training loss is not finite at epoch " + std::to_string(epoch), result.report);
      }
      if (r.counted == 0) continue;
      auto grads = model.zeros_like();
      backward(model, b.s, cache, r.grad_logits, grads);
      opt.step(model, grads, st.lr);
      loss_sum += r.loss * r.counted;
      counted += r.counted;
      correct += r.correct;
    }
    if (counted > 0) {
      st.train_loss = loss_sum / counted;
      st.train_acc = static_cast<double>(correct) / counted;
    }
    const auto val = evaluate(model, data, split.val.empty() ? split.train : split.val);
    st.val_loss = val.loss;
    st.val_acc = val.acc;
    result.report.epochs.push_back(st);
    if (log) {
      write_metrics_line(*log, st);
      log->flush();
    }
    if (val.loss < best_val) {
      best_val = val.loss;
      result.model = model;
      result.report.best_epoch = epoch;
    }
  }
  if (!split.test.empty()) {
    const auto test = evaluate(result.model, data, split.test);
    result.report.test_loss = test.loss;
    result.report.test_acc = test.acc;
  }
  result.report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

TrainResult train_from_file(const std::string& dataset_path, const TrainConfig& cfg, std::ostream* log) {
  DatasetReader reader(dataset_path);
  std::vector<GraphSample> data;
  data.reserve(reader.size());
  for (std::uint64_t i = 0; i < reader.size(); ++i) data.push_back(to_graph(reader.read(i), cfg.gso));
  TrainConfig c = cfg;
  c.model.input_dim = reader.header().feature_dim();
  c.model.output_dim = reader.header().intruder_feats;
  return train(data, split_dataset(data.size(), cfg.split_seed), c, log);
}

}  // namespace pdef
