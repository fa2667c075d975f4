#include "mgtd/models/mlp.hpp"

#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace mgtd {

namespace {

constexpr std::size_t kBatchSize = 32;

// Uniform in [-bound, bound] via explicit 53-bit draws (reproducible across
// standard libraries).
double uniform_symmetric(std::mt19937_64& rng, double bound) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0,1)
  return (2.0 * u - 1.0) * bound;
}

void shuffle_indices(std::vector<std::size_t>& idx, std::mt19937_64& rng) {
  for (std::size_t i = idx.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(idx[i - 1], idx[j]);
  }
}

void softmax_inplace(std::vector<double>& z) {
  double max_z = z[0];
  for (double v : z) max_z = std::max(max_z, v);
  double denom = 0.0;
  for (double& v : z) {
    v = std::exp(v - max_z);
    denom += v;
  }
  for (double& v : z) v /= denom;
}

struct Activations {
  std::vector<double> pre_hidden;  // H, before the rectifier
  std::vector<double> hidden;      // H
  std::vector<double> probs;       // C
};

void forward_into(const MLPModel& m, const SparseVector& x, Activations& act) {
  act.pre_hidden.assign(m.b1.begin(), m.b1.end());
  for (std::size_t k = 0; k < x.indices.size(); ++k) {
    const std::size_t j = x.indices[k];
    const double v = x.values[k];
    for (std::size_t h = 0; h < m.hidden; ++h) act.pre_hidden[h] += m.w1[h * m.dim + j] * v;
  }
  act.hidden.resize(m.hidden);
  for (std::size_t h = 0; h < m.hidden; ++h)
    act.hidden[h] = act.pre_hidden[h] > 0.0 ? act.pre_hidden[h] : 0.0;
  act.probs.assign(m.b2.begin(), m.b2.end());
  for (std::size_t c = 0; c < m.n_classes; ++c)
    for (std::size_t h = 0; h < m.hidden; ++h)
      act.probs[c] += m.w2[c * m.hidden + h] * act.hidden[h];
  softmax_inplace(act.probs);
}

// Accumulates the gradient of the batch-mean cross-entropy for one sample.
void backward_accumulate(const MLPModel& m, const SparseVector& x, int label,
                         const Activations& act, double inv_batch, MLPGrad& g) {
  std::vector<double> dz(act.probs);
  dz[static_cast<std::size_t>(label)] -= 1.0;
  for (double& v : dz) v *= inv_batch;

  std::vector<double> dh(m.hidden, 0.0);
  for (std::size_t c = 0; c < m.n_classes; ++c) {
    for (std::size_t h = 0; h < m.hidden; ++h) {
      g.w2[c * m.hidden + h] += dz[c] * act.hidden[h];
      dh[h] += m.w2[c * m.hidden + h] * dz[c];
    }
    g.b2[c] += dz[c];
  }
  for (std::size_t h = 0; h < m.hidden; ++h) {
    const double da = act.pre_hidden[h] > 0.0 ? dh[h] : 0.0;
    dh[h] = da;
    g.b1[h] += da;
  }
  for (std::size_t k = 0; k < x.indices.size(); ++k) {
    const std::size_t j = x.indices[k];
    const double v = x.values[k];
    for (std::size_t h = 0; h < m.hidden; ++h) g.w1[h * m.dim + j] += dh[h] * v;
  }
}

}  // namespace

MLPModel mlp_fit(std::span<const SparseVector> x, std::span<const int> y,
                 std::size_t n_classes, const TrainConfig& cfg) {
  if (n_classes < 2) throw std::invalid_argument("mlp_fit needs at least two classes");
  if (cfg.hidden_size < 1) throw std::invalid_argument("mlp_fit needs hidden_size >= 1");
  if (cfg.learning_rate <= 0.0) throw std::invalid_argument("mlp_fit: learning_rate must be positive");
  const std::size_t dim = check_training_data(x, y, n_classes);

  MLPModel model;
  model.dim = dim;
  model.hidden = cfg.hidden_size;
  model.n_classes = n_classes;
  model.config = cfg;

  std::mt19937_64 rng(cfg.seed);
  const double bound1 = dim > 0 ? 1.0 / std::sqrt(static_cast<double>(dim)) : 1.0;
  const double bound2 = 1.0 / std::sqrt(static_cast<double>(model.hidden));
  model.w1.resize(model.hidden * dim);
  for (auto& w : model.w1) w = uniform_symmetric(rng, bound1);
  model.b1.assign(model.hidden, 0.0);
  model.w2.resize(n_classes * model.hidden);
  for (auto& w : model.w2) w = uniform_symmetric(rng, bound2);
  model.b2.assign(n_classes, 0.0);

  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);

  MLPGrad grad;
  Activations act;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    shuffle_indices(order, rng);
    for (std::size_t start = 0; start < order.size(); start += kBatchSize) {
      const std::size_t end = std::min(start + kBatchSize, order.size());
      const double inv_batch = 1.0 / static_cast<double>(end - start);
      grad.w1.assign(model.w1.size(), 0.0);
      grad.b1.assign(model.b1.size(), 0.0);
      grad.w2.assign(model.w2.size(), 0.0);
      grad.b2.assign(model.b2.size(), 0.0);
      for (std::size_t i = start; i < end; ++i) {
        const auto& row = x[order[i]];
        forward_into(model, row, act);
        backward_accumulate(model, row, y[order[i]], act, inv_batch, grad);
      }
      const double lr = cfg.learning_rate;
      for (std::size_t k = 0; k < model.w1.size(); ++k) model.w1[k] -= lr * grad.w1[k];
      for (std::size_t k = 0; k < model.b1.size(); ++k) model.b1[k] -= lr * grad.b1[k];
      for (std::size_t k = 0; k < model.w2.size(); ++k) model.w2[k] -= lr * grad.w2[k];
      for (std::size_t k = 0; k < model.b2.size(); ++k) model.b2[k] -= lr * grad.b2[k];
    }
  }
  return model;
}

std::vector<double> mlp_forward(const MLPModel& model, const SparseVector& x) {
  if (x.dim != model.dim)
    throw std::invalid_argument("mlp_forward: input dimension " + std::to_string(x.dim) +
                                " does not match model dimension " + std::to_string(model.dim));
  Activations act;
  forward_into(model, x, act);
  return act.probs;
}

int mlp_predict(const MLPModel& model, const SparseVector& x) {
  return argmax_class(mlp_forward(model, x));
}

double mlp_loss(const MLPModel& model, std::span<const SparseVector> x, std::span<const int> y) {
  if (x.empty()) throw std::runtime_error("mlp_loss: empty batch");
  Activations act;
  double total = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    forward_into(model, x[i], act);
    total += -std::log(std::max(act.probs[static_cast<std::size_t>(y[i])], 1e-300));
  }
  return total / static_cast<double>(x.size());
}

MLPGrad mlp_grad(const MLPModel& model, std::span<const SparseVector> x, std::span<const int> y) {
  if (x.empty()) throw std::runtime_error("mlp_grad: empty batch");
  MLPGrad grad;
  grad.w1.assign(model.w1.size(), 0.0);
  grad.b1.assign(model.b1.size(), 0.0);
  grad.w2.assign(model.w2.size(), 0.0);
  grad.b2.assign(model.b2.size(), 0.0);
  Activations act;
  const double inv_batch = 1.0 / static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    forward_into(model, x[i], act);
    backward_accumulate(model, x[i], y[i], act, inv_batch, grad);
  }
  return grad;
}

}  // namespace mgtd
