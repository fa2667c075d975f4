#include "mgtd/models/linear.hpp"

#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace mgtd {

namespace {

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// Fisher-Yates with explicit draws so shuffles do not depend on the
// standard library's std::shuffle implementation.
void shuffle_indices(std::vector<std::size_t>& idx, std::mt19937_64& rng) {
  for (std::size_t i = idx.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(idx[i - 1], idx[j]);
  }
}

// One binary problem with targets y in {-1,+1} encoded as sign flags.
// Weights are kept as scale * v so the L2 decay stays O(nnz) per sample.
void fit_binary(std::span<const SparseVector> x, const std::vector<signed char>& sign,
                LinearLoss loss, const TrainConfig& cfg, double* w_out, double& b_out) {
  const std::size_t dim = x.front().dim;
  std::vector<double> v(dim, 0.0);
  double scale = 1.0;
  double bias = 0.0;
  double t = 0.0;

  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(cfg.seed);

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    shuffle_indices(order, rng);
    for (std::size_t i : order) {
      const double eta = cfg.learning_rate / (1.0 + cfg.learning_rate * cfg.l2_alpha * t);
      t += 1.0;
      const auto& row = x[i];
      const double ysign = static_cast<double>(sign[i]);
      const double z = scale * sparse_dot_dense(row, v.data()) + bias;

      double grad_z = 0.0;  // d loss / d z
      if (loss == LinearLoss::Logistic) {
        grad_z = -ysign * sigmoid(-ysign * z);
      } else {
        if (ysign * z < 1.0) grad_z = -ysign;
      }

      const double decay = 1.0 - eta * cfg.l2_alpha;
      if (decay <= 0.0)
        throw std::invalid_argument("sgd_fit_linear: learning_rate * l2_alpha too large");
      scale *= decay;
      if (grad_z != 0.0) {
        const double step = eta * grad_z / scale;
        for (std::size_t k = 0; k < row.indices.size(); ++k)
          v[row.indices[k]] -= step * row.values[k];
        bias -= eta * grad_z;
      }
      if (scale < 1e-9) {
        for (auto& wj : v) wj *= scale;
        scale = 1.0;
      }
    }
  }
  for (std::size_t j = 0; j < dim; ++j) w_out[j] = scale * v[j];
  b_out = bias;
}

}  // namespace

LinearModel sgd_fit_linear(std::span<const SparseVector> x, std::span<const int> y,
                           LinearLoss loss, std::size_t n_classes, const TrainConfig& cfg) {
  if (n_classes < 2) throw std::invalid_argument("sgd_fit_linear needs at least two classes");
  if (cfg.learning_rate <= 0.0 || cfg.l2_alpha < 0.0)
    throw std::invalid_argument("sgd_fit_linear: learning_rate must be positive, l2_alpha nonnegative");
  const std::size_t dim = check_training_data(x, y, n_classes);

  LinearModel model;
  model.n_classes = n_classes;
  model.dim = dim;
  model.loss = loss;
  model.config = cfg;
  model.weights.assign(model.rows() * dim, 0.0);
  model.bias.assign(model.rows(), 0.0);

  std::vector<signed char> sign(y.size());
  for (std::size_t r = 0; r < model.rows(); ++r) {
    const int positive = n_classes == 2 ? 1 : static_cast<int>(r);
    for (std::size_t i = 0; i < y.size(); ++i) sign[i] = y[i] == positive ? 1 : -1;
    fit_binary(x, sign, loss, cfg, model.weights.data() + r * dim, model.bias[r]);
  }
  return model;
}

std::vector<double> linear_decision(const LinearModel& model, const SparseVector& x) {
  if (x.dim != model.dim)
    throw std::invalid_argument("linear_decision: input dimension " + std::to_string(x.dim) +
                                " does not match model dimension " + std::to_string(model.dim));
  if (model.n_classes == 2) {
    const double z = sparse_dot_dense(x, model.weights.data()) + model.bias[0];
    return {-z, z};
  }
  std::vector<double> margins(model.n_classes);
  for (std::size_t c = 0; c < model.n_classes; ++c)
    margins[c] = sparse_dot_dense(x, model.weights.data() + c * model.dim) + model.bias[c];
  return margins;
}

std::vector<double> linear_proba(const LinearModel& model, const SparseVector& x) {
  if (model.loss != LinearLoss::Logistic)
    throw std::runtime_error("no probability model for hinge-loss linear classifiers");
  if (model.n_classes == 2) {
    const double z = sparse_dot_dense(x, model.weights.data()) + model.bias[0];
    const double p = sigmoid(z);
    return {1.0 - p, p};
  }
  auto margins = linear_decision(model, x);
  double total = 0.0;
  for (double& m : margins) {
    m = sigmoid(m);
    total += m;
  }
  for (double& m : margins) m /= total;
  return margins;
}

int linear_predict(const LinearModel& model, const SparseVector& x) {
  return argmax_class(linear_decision(model, x));
}

LinearGrad linear_loss_grad(std::span<const SparseVector> x, std::span<const int> targets,
                            const std::vector<double>& w, double b, LinearLoss loss,
                            double l2_alpha) {
  if (x.empty()) throw std::runtime_error("linear_loss_grad: empty batch");
  LinearGrad out;
  out.grad_w.assign(w.size(), 0.0);
  const double inv_n = 1.0 / static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double ysign = targets[i] > 0 ? 1.0 : -1.0;
    const double z = sparse_dot_dense(x[i], w.data()) + b;
    double grad_z = 0.0;
    if (loss == LinearLoss::Logistic) {
      const double m = ysign * z;
      // log(1 + exp(-m)) computed stably
      out.loss += m > 0.0 ? std::log1p(std::exp(-m)) : -m + std::log1p(std::exp(m));
      grad_z = -ysign * sigmoid(-m);
    } else {
      const double m = ysign * z;
      if (m < 1.0) {
        out.loss += 1.0 - m;
        grad_z = -ysign;
      }
    }
    for (std::size_t k = 0; k < x[i].indices.size(); ++k)
      out.grad_w[x[i].indices[k]] += inv_n * grad_z * x[i].values[k];
    out.grad_b += inv_n * grad_z;
  }
  out.loss *= inv_n;
  double w_sq = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    out.grad_w[j] += l2_alpha * w[j];
    w_sq += w[j] * w[j];
  }
  out.loss += 0.5 * l2_alpha * w_sq;
  return out;
}

}  // namespace mgtd
