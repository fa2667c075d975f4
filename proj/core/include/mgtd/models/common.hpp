#ifndef MGTD_MODELS_COMMON_HPP
#define MGTD_MODELS_COMMON_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "mgtd/sparse.hpp"

namespace mgtd {

// Shared training knobs. Each model family reads the fields it needs and
// gets its own defaults; the seed fully determines init and shuffling.
struct TrainConfig {
  std::size_t epochs = 20;
  double learning_rate = 0.1;
  double l2_alpha = 1e-4;
  std::uint64_t seed = 42;
  // MLP
  std::size_t hidden_size = 100;
  // GBDT
  std::size_t n_rounds = 100;
  std::size_t max_depth = 6;
  std::size_t n_bins = 64;
  std::size_t min_leaf = 20;

  static TrainConfig linear_defaults();  // lr0 0.1, l2 1e-4, 20 epochs
  static TrainConfig mlp_defaults();     // H 100, lr 0.01, 50 epochs
  static TrainConfig gbdt_defaults();    // 100 rounds, depth 6, 64 bins, min_leaf 20, lr 0.1
};

// Argmax with ties broken toward the lowest class id.
int argmax_class(std::span<const double> scores);

using Labels = std::vector<int>;

// Validates labels are within [0, n_classes) and the matrix is nonempty and
// dimension-consistent; returns the common feature dimension.
std::size_t check_training_data(std::span<const SparseVector> x, std::span<const int> y,
                                std::size_t n_classes);

}  // namespace mgtd

#endif  // MGTD_MODELS_COMMON_HPP
