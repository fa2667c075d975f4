#include "mgtd/models/gbdt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace mgtd {

namespace {

constexpr double kLambda = 1.0;     // Newton-step damping
constexpr double kMinGain = 1e-12;
constexpr double kPriorClamp = 1e-6;

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// Equal-frequency bin edges for one feature. Bin b holds values v with
// thresholds[b-1] < v <= thresholds[b]; everything above the last edge goes
// to the final bin. Zeros are implicit in sparse rows, so edges come from
// the conceptual sorted multiset of negatives, zeros, positives.
struct FeatureBins {
  std::vector<double> thresholds;             // ascending, size = bins - 1
  std::uint16_t zero_bin = 0;

  std::size_t count() const { return thresholds.size() + 1; }

  std::uint16_t bin_of(double v) const {
    const auto it = std::lower_bound(thresholds.begin(), thresholds.end(), v);
    return static_cast<std::uint16_t>(it - thresholds.begin());
  }
};

FeatureBins build_bins(std::vector<double>& nonzeros, std::size_t n_docs, std::size_t n_bins) {
  std::sort(nonzeros.begin(), nonzeros.end());
  const std::size_t n_neg =
      static_cast<std::size_t>(std::lower_bound(nonzeros.begin(), nonzeros.end(), 0.0) -
                               nonzeros.begin());
  const std::size_t n_zero = n_docs - nonzeros.size();
  auto value_at = [&](std::size_t i) {
    if (i < n_neg) return nonzeros[i];
    if (i < n_neg + n_zero) return 0.0;
    return nonzeros[i - n_zero];
  };

  FeatureBins bins;
  double prev = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t k = 1; k < n_bins; ++k) {
    const double q = value_at(k * n_docs / n_bins);
    if (bins.thresholds.empty() || q > prev) {
      bins.thresholds.push_back(q);
      prev = q;
    }
  }
  // Drop a top edge equal to the maximum: it would create an empty last bin.
  if (!bins.thresholds.empty() && bins.thresholds.back() >= value_at(n_docs - 1))
    bins.thresholds.pop_back();
  bins.zero_bin = bins.bin_of(0.0);
  return bins;
}

struct BinnedMatrix {
  std::vector<FeatureBins> features;
  std::vector<std::size_t> offsets;              // feature -> first slot in histograms
  std::size_t total_bins = 0;
  std::vector<std::vector<std::uint16_t>> row_bins;  // aligned with x[i].indices
};

BinnedMatrix bin_matrix(std::span<const SparseVector> x, std::size_t dim, std::size_t n_bins) {
  std::vector<std::vector<double>> columns(dim);
  for (const auto& row : x)
    for (std::size_t k = 0; k < row.indices.size(); ++k)
      columns[row.indices[k]].push_back(row.values[k]);

  BinnedMatrix m;
  m.features.reserve(dim);
  m.offsets.resize(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    m.offsets[j] = m.total_bins;
    m.features.push_back(build_bins(columns[j], x.size(), n_bins));
    m.total_bins += m.features.back().count();
    columns[j].clear();
    columns[j].shrink_to_fit();
  }
  m.row_bins.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto& row = x[i];
    m.row_bins[i].resize(row.indices.size());
    for (std::size_t k = 0; k < row.indices.size(); ++k)
      m.row_bins[i][k] = m.features[row.indices[k]].bin_of(row.values[k]);
  }
  return m;
}

struct SplitChoice {
  double gain = 0.0;
  std::uint32_t feature = 0;
  std::uint16_t bin = 0;  // left = bins [0..bin], threshold = thresholds[bin]
  double left_count = 0.0, left_g = 0.0, left_h = 0.0;
  bool found = false;
};

class TreeBuilder {
 public:
  TreeBuilder(std::span<const SparseVector> x, const BinnedMatrix& binned,
              const TrainConfig& cfg)
      : x_(x), binned_(binned), cfg_(cfg) {
    hist_count_.assign(binned.total_bins, 0.0);
    hist_g_.assign(binned.total_bins, 0.0);
    hist_h_.assign(binned.total_bins, 0.0);
    touch_mark_.assign(binned.offsets.size(), 0);
    order_.resize(x.size());
    scratch_.resize(x.size());
  }

  // Grows one tree on gradients g / hessians h and adds the shrunken leaf
  // values into the score vector f.
  GBDTTree build(const std::vector<double>& g, const std::vector<double>& h,
                 std::vector<double>& f, double learning_rate) {
    GBDTTree tree;
    std::iota(order_.begin(), order_.end(), 0u);

    struct Pending {
      int node;
      std::uint32_t begin, end;
      std::size_t depth;
      double sum_g, sum_h;
    };
    std::vector<Pending> queue;
    tree.nodes.emplace_back();
    double root_g = 0.0, root_h = 0.0;
    for (double v : g) root_g += v;
    for (double v : h) root_h += v;
    queue.push_back({0, 0, static_cast<std::uint32_t>(x_.size()), 0, root_g, root_h});

    while (!queue.empty()) {
      const Pending node = queue.back();
      queue.pop_back();
      const std::size_t count = node.end - node.begin;

      SplitChoice split;
      if (node.depth < cfg_.max_depth && count >= 2 * cfg_.min_leaf)
        split = find_split(node.begin, node.end, g, h, node.sum_g, node.sum_h);

      if (!split.found) {
        const double value = node.sum_g / (node.sum_h + kLambda);
        tree.nodes[static_cast<std::size_t>(node.node)].value = value;
        for (std::uint32_t p = node.begin; p < node.end; ++p)
          f[order_[p]] += learning_rate * value;
        continue;
      }

      const double threshold = binned_.features[split.feature].thresholds[split.bin];
      const std::uint32_t mid = partition(node.begin, node.end, split.feature, threshold);

      const int left_id = static_cast<int>(tree.nodes.size());
      const int right_id = left_id + 1;
      tree.nodes.emplace_back();
      tree.nodes.emplace_back();
      auto& parent = tree.nodes[static_cast<std::size_t>(node.node)];
      parent.feature = static_cast<int>(split.feature);
      parent.threshold = threshold;
      parent.left = left_id;
      parent.right = right_id;
      queue.push_back({right_id, mid, node.end, node.depth + 1,
                       node.sum_g - split.left_g, node.sum_h - split.left_h});
      queue.push_back({left_id, node.begin, mid, node.depth + 1, split.left_g, split.left_h});
    }
    return tree;
  }

 private:
  SplitChoice find_split(std::uint32_t begin, std::uint32_t end, const std::vector<double>& g,
                         const std::vector<double>& h, double sum_g, double sum_h) {
    touched_.clear();
    for (std::uint32_t p = begin; p < end; ++p) {
      const auto i = order_[p];
      const auto& row = x_[i];
      const auto& bins = binned_.row_bins[i];
      for (std::size_t k = 0; k < row.indices.size(); ++k) {
        const auto j = row.indices[k];
        const std::size_t slot = binned_.offsets[j] + bins[k];
        if (!touch_mark_[j]) {
          touch_mark_[j] = 1;
          touched_.push_back(j);
        }
        hist_count_[slot] += 1.0;
        hist_g_[slot] += g[i];
        hist_h_[slot] += h[i];
      }
    }
    std::sort(touched_.begin(), touched_.end());

    const double total_count = static_cast<double>(end - begin);
    SplitChoice best;
    const double parent_term = sum_g * sum_g / total_count;
    for (const auto j : touched_) {
      const auto& bins = binned_.features[j];
      const std::size_t base = binned_.offsets[j];
      const std::size_t n_bins = bins.count();
      // Docs with an implicit zero in this feature belong to the zero bin.
      double nz_count = 0.0, nz_g = 0.0, nz_h = 0.0;
      for (std::size_t b = 0; b < n_bins; ++b) {
        nz_count += hist_count_[base + b];
        nz_g += hist_g_[base + b];
        nz_h += hist_h_[base + b];
      }
      const std::size_t zero_slot = base + bins.zero_bin;
      hist_count_[zero_slot] += total_count - nz_count;
      hist_g_[zero_slot] += sum_g - nz_g;
      hist_h_[zero_slot] += sum_h - nz_h;

      double run_count = 0.0, run_g = 0.0, run_h = 0.0;
      for (std::size_t b = 0; b + 1 < n_bins; ++b) {
        run_count += hist_count_[base + b];
        run_g += hist_g_[base + b];
        run_h += hist_h_[base + b];
        const double right_count = total_count - run_count;
        if (run_count < static_cast<double>(cfg_.min_leaf) ||
            right_count < static_cast<double>(cfg_.min_leaf))
          continue;
        const double right_g = sum_g - run_g;
        const double gain =
            run_g * run_g / run_count + right_g * right_g / right_count - parent_term;
        if (gain > best.gain + kMinGain && gain > kMinGain) {
          best.found = true;
          best.gain = gain;
          best.feature = j;
          best.bin = static_cast<std::uint16_t>(b);
          best.left_count = run_count;
          best.left_g = run_g;
          best.left_h = run_h;
        }
      }
    }
    // reset touched slots for the next node
    for (const auto j : touched_) {
      const std::size_t base = binned_.offsets[j];
      for (std::size_t b = 0; b < binned_.features[j].count(); ++b) {
        hist_count_[base + b] = 0.0;
        hist_g_[base + b] = 0.0;
        hist_h_[base + b] = 0.0;
      }
      touch_mark_[j] = 0;
    }
    return best;
  }

  std::uint32_t partition(std::uint32_t begin, std::uint32_t end, std::uint32_t feature,
                          double threshold) {
    std::uint32_t n_left = 0;
    std::uint32_t tail = 0;
    for (std::uint32_t p = begin; p < end; ++p) {
      const auto i = order_[p];
      if (x_[i].at(feature) <= threshold)
        order_[begin + n_left++] = i;
      else
        scratch_[tail++] = i;
    }
    std::copy(scratch_.begin(), scratch_.begin() + tail, order_.begin() + begin + n_left);
    return begin + n_left;
  }

  std::span<const SparseVector> x_;
  const BinnedMatrix& binned_;
  const TrainConfig& cfg_;
  std::vector<double> hist_count_, hist_g_, hist_h_;
  std::vector<std::uint32_t> order_, scratch_;
  std::vector<std::uint32_t> touched_;
  std::vector<std::uint8_t> touch_mark_;
};

}  // namespace

double GBDTTree::predict(const SparseVector& x) const {
  std::size_t node = 0;
  while (nodes[node].feature >= 0) {
    const auto& n = nodes[node];
    node = static_cast<std::size_t>(
        x.at(static_cast<std::uint32_t>(n.feature)) <= n.threshold ? n.left : n.right);
  }
  return nodes[node].value;
}

GBDTModel gbdt_fit(std::span<const SparseVector> x, std::span<const int> y,
                   std::size_t n_classes, const TrainConfig& cfg) {
  if (n_classes < 2) throw std::invalid_argument("gbdt_fit needs at least two classes");
  if (cfg.n_bins < 2) throw std::invalid_argument("gbdt_fit needs n_bins >= 2");
  if (cfg.n_bins > 65535) throw std::invalid_argument("gbdt_fit: n_bins too large");
  if (cfg.min_leaf < 1) throw std::invalid_argument("gbdt_fit needs min_leaf >= 1");
  if (cfg.max_depth < 1) throw std::invalid_argument("gbdt_fit needs max_depth >= 1");
  const std::size_t dim = check_training_data(x, y, n_classes);

  GBDTModel model;
  model.n_classes = n_classes;
  model.dim = dim;
  model.learning_rate = cfg.learning_rate;
  model.config = cfg;
  const std::size_t n_series = n_classes == 2 ? 1 : n_classes;
  model.base_score.resize(n_series);
  model.series.resize(n_series);

  const BinnedMatrix binned = bin_matrix(x, dim, cfg.n_bins);
  TreeBuilder builder(x, binned, cfg);

  const std::size_t n = x.size();
  std::vector<double> f(n), g(n), h(n);
  std::vector<double> targets(n);
  for (std::size_t s = 0; s < n_series; ++s) {
    const int positive = n_classes == 2 ? 1 : static_cast<int>(s);
    double pos_count = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      targets[i] = y[i] == positive ? 1.0 : 0.0;
      pos_count += targets[i];
    }
    const double prior =
        std::clamp(pos_count / static_cast<double>(n), kPriorClamp, 1.0 - kPriorClamp);
    model.base_score[s] = std::log(prior / (1.0 - prior));

    // All-identical targets: the base score is already the optimum.
    if (pos_count == 0.0 || pos_count == static_cast<double>(n)) continue;

    std::fill(f.begin(), f.end(), model.base_score[s]);
    for (std::size_t round = 0; round < cfg.n_rounds; ++round) {
      for (std::size_t i = 0; i < n; ++i) {
        const double p = sigmoid(f[i]);
        g[i] = targets[i] - p;  // negative gradient of the logistic loss
        h[i] = p * (1.0 - p);
      }
      model.series[s].push_back(builder.build(g, h, f, cfg.learning_rate));
    }
  }
  return model;
}

std::vector<double> gbdt_decision(const GBDTModel& model, const SparseVector& x) {
  if (x.dim != model.dim)
    throw std::invalid_argument("gbdt_decision: input dimension " + std::to_string(x.dim) +
                                " does not match model dimension " + std::to_string(model.dim));
  std::vector<double> scores(model.n_series());
  for (std::size_t s = 0; s < model.n_series(); ++s) {
    double score = model.base_score[s];
    for (const auto& tree : model.series[s]) score += model.learning_rate * tree.predict(x);
    scores[s] = score;
  }
  return scores;
}

std::vector<double> gbdt_predict_proba(const GBDTModel& model, const SparseVector& x) {
  const auto scores = gbdt_decision(model, x);
  if (model.n_classes == 2) {
    const double p = sigmoid(scores[0]);
    return {1.0 - p, p};
  }
  std::vector<double> probs(model.n_classes);
  double total = 0.0;
  for (std::size_t c = 0; c < model.n_classes; ++c) {
    probs[c] = sigmoid(scores[c]);
    total += probs[c];
  }
  for (double& p : probs) p /= total;
  return probs;
}

int gbdt_predict(const GBDTModel& model, const SparseVector& x) {
  return argmax_class(gbdt_predict_proba(model, x));
}

}  // namespace mgtd
