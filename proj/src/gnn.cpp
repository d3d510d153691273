#include "pdef/gnn.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>

namespace pdef {

namespace {

std::atomic<long> g_empty_loss{0};

Eigen::MatrixXd relu(const Eigen::MatrixXd& z) { return z.cwiseMax(0.0); }

Eigen::MatrixXd affine(const Dense& d, const Eigen::MatrixXd& x) {
  Eigen::MatrixXd y = x * d.w;
  y.rowwise() += d.b.row(0);
  return y;
}

void init_uniform(Eigen::MatrixXd& m, Rng& rng) {
  const double a = std::sqrt(6.0 / static_cast<double>(m.rows() + m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = uniform(rng, -a, a);
}

}  // namespace

ModelSpec ModelSpec::mlp_baseline() {
  ModelSpec s;
  s.taps = 0;
  return s;
}

GnnModel::GnnModel(ModelSpec spec) : spec_(std::move(spec)) {
  if (spec_.input_dim <= 0 || spec_.output_dim <= 0 || spec_.taps < 0 || spec_.graph.empty()) {
    throw std::invalid_argument("GnnModel: bad spec");
  }
  int prev = spec_.input_dim;
  for (int h : spec_.encoder) {
    encoder_.push_back({Eigen::MatrixXd::Zero(prev, h), Eigen::MatrixXd::Zero(1, h)});
    prev = h;
  }
  for (int h : spec_.graph) {
    GraphLayer g;
    for (int k = 0; k <= spec_.taps; ++k) g.taps.push_back(Eigen::MatrixXd::Zero(prev, h));
    graph_.push_back(std::move(g));
    prev = h;
  }
  readout_ = {Eigen::MatrixXd::Zero(prev, spec_.output_dim), Eigen::MatrixXd::Zero(1, spec_.output_dim)};
}

GnnModel GnnModel::xavier(const ModelSpec& spec, Rng& rng) {
  GnnModel m(spec);
  for (auto& d : m.encoder_) init_uniform(d.w, rng);
  for (auto& g : m.graph_)
    for (auto& h : g.taps) init_uniform(h, rng);
  init_uniform(m.readout_.w, rng);
  return m;
}

std::vector<Eigen::MatrixXd*> GnnModel::tensors() {
  std::vector<Eigen::MatrixXd*> t;
  for (auto& d : encoder_) {
    t.push_back(&d.w);
    t.push_back(&d.b);
  }
  for (auto& g : graph_)
    for (auto& h : g.taps) t.push_back(&h);
  t.push_back(&readout_.w);
  t.push_back(&readout_.b);
  return t;
}

std::vector<const Eigen::MatrixXd*> GnnModel::tensors() const {
  auto mut = const_cast<GnnModel*>(this)->tensors();
  return {mut.begin(), mut.end()};
}

std::size_t GnnModel::parameter_count() const {
  std::size_t n = 0;
  for (const auto* t : tensors()) n += static_cast<std::size_t>(t->size());
  return n;
}

std::size_t parameter_count(const ModelSpec& spec) {
  std::size_t n = 0;
  std::size_t prev = spec.input_dim;
  for (int h : spec.encoder) {
    n += (prev + 1) * h;
    prev = h;
  }
  for (int h : spec.graph) {
    n += (spec.taps + 1) * prev * h;
    prev = h;
  }
  return n + (prev + 1) * spec.output_dim;
}

Eigen::MatrixXd forward(const GnnModel& model, const Eigen::MatrixXd& x, const SparseGso& s,
                        ForwardCache* cache) {
  if (x.cols() != model.spec().input_dim) throw std::invalid_argument("forward: input width mismatch");
  if (s.rows() != x.rows() || s.cols() != x.rows()) throw std::invalid_argument("forward: gso shape mismatch");
  ForwardCache local;
  ForwardCache& c = cache ? *cache : local;
  c = ForwardCache{};

  Eigen::MatrixXd a = x;
  for (const auto& d : model.encoder()) {
    c.enc_in.push_back(a);
    c.enc_pre.push_back(affine(d, a));
    a = relu(c.enc_pre.back());
  }
  for (const auto& g : model.graph()) {
    std::vector<Eigen::MatrixXd> p;
    p.push_back(a);
    for (std::size_t k = 1; k < g.taps.size(); ++k) p.push_back(s * p.back());
    Eigen::MatrixXd z = p[0] * g.taps[0];
    for (std::size_t k = 1; k < g.taps.size(); ++k) z.noalias() += p[k] * g.taps[k];
    c.shifted.push_back(std::move(p));
    c.graph_pre.push_back(z);
    a = relu(z);
  }
  c.readout_in = a;
  c.logits = affine(model.readout(), a);
  return c.logits;
}

Eigen::MatrixXd forward(const GnnModel& model, const Eigen::MatrixXd& x, const Eigen::MatrixXd& s,
                        ForwardCache* cache) {
  return forward(model, x, SparseGso(s.sparseView()), cache);
}

Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& logits) {
  Eigen::MatrixXd p(logits.rows(), logits.cols());
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    const double m = logits.row(i).maxCoeff();
    p.row(i) = (logits.row(i).array() - m).exp().matrix();
    p.row(i) /= p.row(i).sum();
  }
  return p;
}

LossResult cross_entropy(const Eigen::MatrixXd& logits, const std::vector<int>& labels) {
  if (static_cast<Eigen::Index>(labels.size()) != logits.rows()) {
    throw std::invalid_argument("cross_entropy: label count mismatch");
  }
  LossResult r;
  r.grad_logits = Eigen::MatrixXd::Zero(logits.rows(), logits.cols());
  for (int y : labels) r.counted += y >= 0;
  if (r.counted == 0) {
    ++g_empty_loss;
    return r;
  }
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    const int y = labels[i];
    if (y < 0) continue;
    if (y >= logits.cols()) throw std::invalid_argument("cross_entropy: label out of range");
    Eigen::Index arg;
    const double m = logits.row(i).maxCoeff(&arg);
    const Eigen::ArrayXd e = (logits.row(i).array() - m).exp().transpose();
    const double z = e.sum();
    r.loss += std::log(z) - (logits(i, y) - m);
    r.correct += arg == y;
    r.grad_logits.row(i) = (e / z).matrix().transpose();
    r.grad_logits(i, y) -= 1.0;
  }
  r.loss /= r.counted;
  r.grad_logits /= r.counted;
  return r;
}

double cross_entropy_probs(const Eigen::MatrixXd& probs, const std::vector<int>& labels) {
  double sum = 0.0;
  int n = 0;
  for (Eigen::Index i = 0; i < probs.rows(); ++i) {
    if (labels[i] < 0) continue;
    sum -= std::log(probs(i, labels[i]));
    ++n;
  }
  if (n == 0) {
    ++g_empty_loss;
    return 0.0;
  }
  return sum / n;
}

long empty_loss_count() { return g_empty_loss.load(); }

void backward(const GnnModel& model, const SparseGso& s, const ForwardCache& cache,
              const Eigen::MatrixXd& grad_logits, GnnModel& grads) {
  auto& gr = grads.readout();
  gr.w.noalias() += cache.readout_in.transpose() * grad_logits;
  gr.b += grad_logits.colwise().sum();
  Eigen::MatrixXd da = grad_logits * model.readout().w.transpose();

  const SparseGso st = s.transpose();
  for (int l = static_cast<int>(model.graph().size()) - 1; l >= 0; --l) {
    const auto& taps = model.graph()[l].taps;
    const auto& p = cache.shifted[l];
    const Eigen::MatrixXd dz = (cache.graph_pre[l].array() > 0.0).select(da, 0.0);
    const int kmax = static_cast<int>(taps.size()) - 1;
    Eigen::MatrixXd acc = dz * taps[kmax].transpose();
    grads.graph()[l].taps[kmax].noalias() += p[kmax].transpose() * dz;
    // Horner form of sum_k (S^T)^k dZ H_k^T.
    for (int k = kmax - 1; k >= 0; --k) {
      grads.graph()[l].taps[k].noalias() += p[k].transpose() * dz;
      Eigen::MatrixXd next = st * acc;
      next.noalias() += dz * taps[k].transpose();
      acc = std::move(next);
    }
    da = std::move(acc);
  }
  for (int l = static_cast<int>(model.encoder().size()) - 1; l >= 0; --l) {
    const Eigen::MatrixXd dz = (cache.enc_pre[l].array() > 0.0).select(da, 0.0);
    grads.encoder()[l].w.noalias() += cache.enc_in[l].transpose() * dz;
    grads.encoder()[l].b += dz.colwise().sum();
    if (l > 0) da = dz * model.encoder()[l].w.transpose();
  }
}

SparseGso block_diagonal(const std::vector<const Eigen::MatrixXd*>& blocks) {
  Eigen::Index n = 0;
  std::vector<Eigen::Triplet<double>> trip;
  for (const auto* b : blocks) {
    for (Eigen::Index i = 0; i < b->rows(); ++i)
      for (Eigen::Index j = 0; j < b->cols(); ++j)
        if ((*b)(i, j) != 0.0) trip.emplace_back(n + i, n + j, (*b)(i, j));
    n += b->rows();
  }
  SparseGso s(n, n);
  s.setFromTriplets(trip.begin(), trip.end());
  return s;
}

}  // namespace pdef
