#ifndef MGTD_EVAL_HPP
#define MGTD_EVAL_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace mgtd {

struct Dataset;
struct FittedPipeline;

struct PerClassMetrics {
  std::string name;
  double precision = 0.0;  // 0 when the class was never predicted
  double recall = 0.0;     // 0 when the class has no gold samples
  double f1 = 0.0;
};

struct Metrics {
  double accuracy = 0.0;
  std::size_t n = 0;
  std::vector<std::vector<std::int64_t>> confusion;  // rows gold, cols predicted
  std::vector<PerClassMetrics> per_class;
};

double accuracy(std::span<const int> preds, std::span<const int> golds);

std::vector<std::vector<std::int64_t>> confusion_matrix(std::span<const int> preds,
                                                        std::span<const int> golds,
                                                        std::size_t n_classes);

Metrics compute_metrics(std::span<const int> preds, std::span<const int> golds,
                        const std::vector<std::string>& class_names);

// Predicts every document of a fully labeled dataset and scores it; an
// unlabeled document is an error naming its id.
Metrics evaluate(const FittedPipeline& fp, const Dataset& ds);

// Aligned plain-text report and the machine-readable metrics.json object.
std::string metrics_to_text(const Metrics& m);
std::string metrics_to_json(const Metrics& m);

}  // namespace mgtd

#endif  // MGTD_EVAL_HPP
