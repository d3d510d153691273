#pragma once

// Graph-convolution assignment network: per-node encoder, K-tap graph
// layers X <- relu(sum_k S^k X H_k), and a linear readout to slot logits.
// Node rows of several graphs can be stacked with a block-diagonal S.

#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "pdef/random.hpp"

namespace pdef {

using SparseGso = Eigen::SparseMatrix<double, Eigen::RowMajor>;

struct ModelSpec {
  int input_dim = 39;
  std::vector<int> encoder{16, 8};
  std::vector<int> graph{32, 128};
  int taps = 1;  ///< K; taps k = 0..K per graph layer
  int output_dim = 10;

  /// Same encoder and readout with the graph layers reduced to per-node maps.
  static ModelSpec mlp_baseline();
  bool operator==(const ModelSpec&) const = default;
};

/// y = x W + b, rows are nodes. Biases are stored as 1 x n matrices so every
/// parameter tensor has the same type.
struct Dense {
  Eigen::MatrixXd w;
  Eigen::MatrixXd b;
};

struct GraphLayer {
  std::vector<Eigen::MatrixXd> taps;  ///< H_0..H_K
};

class GnnModel {
 public:
  GnnModel() = default;
  /// Zero-initialized parameters of the given shape.
  explicit GnnModel(ModelSpec spec);

  /// Uniform +-sqrt(6/(fan_in+fan_out)) weights, zero biases.
  static GnnModel xavier(const ModelSpec& spec, Rng& rng);

  const ModelSpec& spec() const { return spec_; }
  std::vector<Dense>& encoder() { return encoder_; }
  const std::vector<Dense>& encoder() const { return encoder_; }
  std::vector<GraphLayer>& graph() { return graph_; }
  const std::vector<GraphLayer>& graph() const { return graph_; }
  Dense& readout() { return readout_; }
  const Dense& readout() const { return readout_; }

  /// Parameter tensors in declaration order: encoder (w, b) per layer, graph
  /// taps per layer, readout w, b.
  std::vector<Eigen::MatrixXd*> tensors();
  std::vector<const Eigen::MatrixXd*> tensors() const;
  std::size_t parameter_count() const;
  GnnModel zeros_like() const { return GnnModel(spec_); }

 private:
  ModelSpec spec_;
  std::vector<Dense> encoder_;
  std::vector<GraphLayer> graph_;
  Dense readout_;
};

/// Closed-form parameter count for a spec.
std::size_t parameter_count(const ModelSpec& spec);

struct ForwardCache {
  std::vector<Eigen::MatrixXd> enc_in;   ///< input to each encoder layer
  std::vector<Eigen::MatrixXd> enc_pre;  ///< pre-activation of each encoder layer
  std::vector<std::vector<Eigen::MatrixXd>> shifted;  ///< per graph layer, S^k X for k=0..K
  std::vector<Eigen::MatrixXd> graph_pre;
  Eigen::MatrixXd readout_in;
  Eigen::MatrixXd logits;
};

/// Logits for every node row. Throws std::invalid_argument on shape mismatch.
Eigen::MatrixXd forward(const GnnModel& model, const Eigen::MatrixXd& x, const SparseGso& s,
                        ForwardCache* cache = nullptr);
Eigen::MatrixXd forward(const GnnModel& model, const Eigen::MatrixXd& x, const Eigen::MatrixXd& s,
                        ForwardCache* cache = nullptr);

/// Row-wise softmax (the assignment likelihood).
Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& logits);

struct LossResult {
  double loss = 0.0;
  int counted = 0;   ///< rows with a label
  int correct = 0;   ///< counted rows whose argmax equals the label
  Eigen::MatrixXd grad_logits;  ///< d loss / d logits
};

/// Mean cross-entropy over rows with label >= 0; rows with a negative label
/// are masked out and get zero gradient. An all-masked batch has loss 0 and
/// bumps empty_loss_count().
LossResult cross_entropy(const Eigen::MatrixXd& logits, const std::vector<int>& labels);

/// The same loss evaluated on probabilities rather than logits.
double cross_entropy_probs(const Eigen::MatrixXd& probs, const std::vector<int>& labels);

long empty_loss_count();

/// Accumulates gradients of the loss into `grads` (same shapes as the model).
void backward(const GnnModel& model, const SparseGso& s, const ForwardCache& cache,
              const Eigen::MatrixXd& grad_logits, GnnModel& grads);

/// Block-diagonal operator for a batch of graphs.
SparseGso block_diagonal(const std::vector<const Eigen::MatrixXd*>& blocks);

}  // namespace pdef
