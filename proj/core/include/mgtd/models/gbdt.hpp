#ifndef MGTD_MODELS_GBDT_HPP
#define MGTD_MODELS_GBDT_HPP

#include <span>
#include <vector>

#include "mgtd/models/common.hpp"
#include "mgtd/sparse.hpp"

namespace mgtd {

// Axis-aligned regression tree node; feature == -1 marks a leaf. A sample
// goes left when its feature value is <= threshold.
struct GBDTNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;
};

struct GBDTTree {
  std::vector<GBDTNode> nodes;

  double predict(const SparseVector& x) const;
};

// Gradient-boosted regression trees over histogram bins. Binary problems
// boost a single score series; multiclass keeps one one-vs-rest series per
// class.
struct GBDTModel {
  std::size_t n_classes = 0;
  std::size_t dim = 0;
  double learning_rate = 0.1;
  std::vector<double> base_score;              // one per series
  std::vector<std::vector<GBDTTree>> series;   // [series][round]
  TrainConfig config;

  std::size_t n_series() const { return base_score.size(); }
};

// Each round fits a tree to the negative gradient of the logistic loss.
// Splits maximize variance gain over at most n_bins equal-frequency bins
// per feature; leaf values are Newton steps sum_g / (sum_h + 1). A series
// whose targets are all identical keeps its base score and grows no trees.
GBDTModel gbdt_fit(std::span<const SparseVector> x, std::span<const int> y,
                   std::size_t n_classes, const TrainConfig& cfg);

// Raw additive scores, one per series.
std::vector<double> gbdt_decision(const GBDTModel& model, const SparseVector& x);

// Sigmoid of the score (binary) or per-class sigmoid renormalized.
std::vector<double> gbdt_predict_proba(const GBDTModel& model, const SparseVector& x);

int gbdt_predict(const GBDTModel& model, const SparseVector& x);

}  // namespace mgtd

#endif  // MGTD_MODELS_GBDT_HPP
