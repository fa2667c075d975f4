#ifndef MGTD_MODELS_LINEAR_HPP
#define MGTD_MODELS_LINEAR_HPP

#include <span>
#include <vector>

#include "mgtd/models/common.hpp"
#include "mgtd/sparse.hpp"

namespace mgtd {

enum class LinearLoss { Logistic, Hinge };

// SGD-trained linear classifier. Binary problems keep a single weight row;
// multiclass is one-vs-rest with one row per class.
struct LinearModel {
  std::size_t n_classes = 0;
  std::size_t dim = 0;
  LinearLoss loss = LinearLoss::Logistic;
  std::vector<double> weights;  // rows x dim, 1 row when n_classes == 2
  std::vector<double> bias;     // one per row
  TrainConfig config;

  std::size_t rows() const { return n_classes == 2 ? 1 : n_classes; }
};

// Minimizes (1/N) sum loss + l2_alpha*||w||^2/2 by per-sample SGD with
// eta_t = lr0/(1 + lr0*l2_alpha*t) and seed-driven epoch shuffling. The
// bias is not regularized. Deterministic given (data, cfg).
LinearModel sgd_fit_linear(std::span<const SparseVector> x, std::span<const int> y,
                           LinearLoss loss, std::size_t n_classes, const TrainConfig& cfg);

// Per-class margins; for binary, (-z, +z) around the single row's margin z.
std::vector<double> linear_decision(const LinearModel& model, const SparseVector& x);

// Logistic models only: sigmoid (binary) or per-class sigmoid renormalized
// (one-vs-rest). Throws "no probability model" for hinge.
std::vector<double> linear_proba(const LinearModel& model, const SparseVector& x);

int linear_predict(const LinearModel& model, const SparseVector& x);

// Full-batch objective value and analytic gradient, used by the gradient
// checks: (1/N) sum loss_i + l2_alpha*||w||^2/2 for one binary problem with
// targets in {0,1}.
struct LinearGrad {
  double loss = 0.0;
  std::vector<double> grad_w;
  double grad_b = 0.0;
};
LinearGrad linear_loss_grad(std::span<const SparseVector> x, std::span<const int> targets,
                            const std::vector<double>& w, double b, LinearLoss loss,
                            double l2_alpha);

}  // namespace mgtd

#endif  // MGTD_MODELS_LINEAR_HPP
