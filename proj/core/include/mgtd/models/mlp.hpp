#ifndef MGTD_MODELS_MLP_HPP
#define MGTD_MODELS_MLP_HPP

#include <span>
#include <vector>

#include "mgtd/models/common.hpp"
#include "mgtd/sparse.hpp"

namespace mgtd {

// One hidden rectifier layer with a softmax output head.
struct MLPModel {
  std::size_t dim = 0;      // D
  std::size_t hidden = 0;   // H
  std::size_t n_classes = 0;
  std::vector<double> w1;   // H x D
  std::vector<double> b1;   // H
  std::vector<double> w2;   // C x H
  std::vector<double> b2;   // C
  TrainConfig config;
};

// Cross-entropy loss minimized by minibatch SGD (batch 32); weights start
// uniform in [-1/sqrt(fan_in), +1/sqrt(fan_in)] from cfg.seed, biases at 0.
MLPModel mlp_fit(std::span<const SparseVector> x, std::span<const int> y,
                 std::size_t n_classes, const TrainConfig& cfg);

// Softmax probabilities; sums to 1.
std::vector<double> mlp_forward(const MLPModel& model, const SparseVector& x);

int mlp_predict(const MLPModel& model, const SparseVector& x);

// Mean cross-entropy over a batch (forward only).
double mlp_loss(const MLPModel& model, std::span<const SparseVector> x, std::span<const int> y);

// Analytic gradient of mlp_loss with respect to every parameter, in the
// same layout as the model fields. Exercised against finite differences.
struct MLPGrad {
  std::vector<double> w1, b1, w2, b2;
};
MLPGrad mlp_grad(const MLPModel& model, std::span<const SparseVector> x, std::span<const int> y);

}  // namespace mgtd

#endif  // MGTD_MODELS_MLP_HPP
