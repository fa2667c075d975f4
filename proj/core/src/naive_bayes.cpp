#include "mgtd/models/naive_bayes.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace mgtd {

TrainConfig TrainConfig::linear_defaults() {
  TrainConfig cfg;
  cfg.epochs = 20;
  cfg.learning_rate = 0.1;
  cfg.l2_alpha = 1e-4;
  return cfg;
}

TrainConfig TrainConfig::mlp_defaults() {
  TrainConfig cfg;
  cfg.epochs = 50;
  cfg.learning_rate = 0.01;
  cfg.hidden_size = 100;
  return cfg;
}

TrainConfig TrainConfig::gbdt_defaults() {
  TrainConfig cfg;
  cfg.n_rounds = 100;
  cfg.max_depth = 6;
  cfg.n_bins = 64;
  cfg.min_leaf = 20;
  cfg.learning_rate = 0.1;
  return cfg;
}

int argmax_class(std::span<const double> scores) {
  if (scores.empty()) throw std::invalid_argument("argmax over empty score vector");
  std::size_t best = 0;
  for (std::size_t c = 1; c < scores.size(); ++c)
    if (scores[c] > scores[best]) best = c;
  return static_cast<int>(best);
}

std::size_t check_training_data(std::span<const SparseVector> x, std::span<const int> y,
                                std::size_t n_classes) {
  if (x.empty()) throw std::runtime_error("empty training set");
  if (x.size() != y.size())
    throw std::invalid_argument("feature/label count mismatch: " + std::to_string(x.size()) +
                                " vs " + std::to_string(y.size()));
  const std::size_t dim = x.front().dim;
  for (const auto& row : x)
    if (row.dim != dim) throw std::invalid_argument("inconsistent feature dimensions");
  for (int label : y)
    if (label < 0 || static_cast<std::size_t>(label) >= n_classes)
      throw std::runtime_error("label " + std::to_string(label) + " outside the " +
                               std::to_string(n_classes) + "-class problem");
  return dim;
}

NaiveBayesModel nb_fit(std::span<const SparseVector> x, std::span<const int> y,
                       std::size_t n_classes, double alpha) {
  if (n_classes < 1) throw std::invalid_argument("nb_fit needs at least one class");
  if (alpha <= 0.0) throw std::invalid_argument("nb_fit smoothing alpha must be positive");
  const std::size_t dim = check_training_data(x, y, n_classes);

  NaiveBayesModel model;
  model.n_classes = n_classes;
  model.dim = dim;
  model.alpha = alpha;

  std::vector<double> class_count(n_classes, 0.0);
  std::vector<double> feature_sum(n_classes * dim, 0.0);  // S_cj
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto c = static_cast<std::size_t>(y[i]);
    class_count[c] += 1.0;
    const auto& row = x[i];
    for (std::size_t k = 0; k < row.indices.size(); ++k) {
      if (row.values[k] < 0.0)
        throw std::runtime_error("nb_fit requires nonnegative features, got " +
                                 std::to_string(row.values[k]));
      feature_sum[c * dim + row.indices[k]] += row.values[k];
    }
  }

  const double n = static_cast<double>(x.size());
  model.class_log_prior.resize(n_classes);
  model.feature_log_prob.resize(n_classes * dim);
  for (std::size_t c = 0; c < n_classes; ++c) {
    model.class_log_prior[c] = class_count[c] > 0.0
                                   ? std::log(class_count[c] / n)
                                   : -std::numeric_limits<double>::infinity();
    double total = 0.0;
    for (std::size_t j = 0; j < dim; ++j) total += feature_sum[c * dim + j];
    const double denom = std::log(total + alpha * static_cast<double>(dim));
    for (std::size_t j = 0; j < dim; ++j)
      model.feature_log_prob[c * dim + j] = std::log(feature_sum[c * dim + j] + alpha) - denom;
  }
  return model;
}

std::vector<double> nb_log_posterior(const NaiveBayesModel& model, const SparseVector& x) {
  if (x.dim != model.dim)
    throw std::invalid_argument("nb_log_posterior: input dimension " + std::to_string(x.dim) +
                                " does not match model dimension " + std::to_string(model.dim));
  std::vector<double> scores(model.n_classes);
  for (std::size_t c = 0; c < model.n_classes; ++c)
    scores[c] = model.class_log_prior[c] +
                sparse_dot_dense(x, model.feature_log_prob.data() + c * model.dim);
  return scores;
}

std::vector<double> nb_predict_proba(const NaiveBayesModel& model, const SparseVector& x) {
  auto scores = nb_log_posterior(model, x);
  double max_score = -std::numeric_limits<double>::infinity();
  for (double s : scores) max_score = std::max(max_score, s);
  double denom = 0.0;
  for (double& s : scores) {
    s = std::exp(s - max_score);
    denom += s;
  }
  for (double& s : scores) s /= denom;
  return scores;
}

int nb_predict(const NaiveBayesModel& model, const SparseVector& x) {
  return argmax_class(nb_log_posterior(model, x));
}

}  // namespace mgtd
