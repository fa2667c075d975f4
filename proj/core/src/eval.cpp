#include "mgtd/eval.hpp"

#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "mgtd/corpus.hpp"
#include "mgtd/pipeline.hpp"

namespace mgtd {

double accuracy(std::span<const int> preds, std::span<const int> golds) {
  if (preds.size() != golds.size())
    throw std::invalid_argument("accuracy: " + std::to_string(preds.size()) +
                                " predictions vs " + std::to_string(golds.size()) + " golds");
  if (preds.empty()) throw std::invalid_argument("accuracy of an empty prediction set");
  std::size_t matches = 0;
  for (std::size_t i = 0; i < preds.size(); ++i)
    if (preds[i] == golds[i]) ++matches;
  return static_cast<double>(matches) / static_cast<double>(preds.size());
}

std::vector<std::vector<std::int64_t>> confusion_matrix(std::span<const int> preds,
                                                        std::span<const int> golds,
                                                        std::size_t n_classes) {
  if (preds.size() != golds.size())
    throw std::invalid_argument("confusion_matrix: prediction/gold count mismatch");
  std::vector<std::vector<std::int64_t>> cm(n_classes,
                                            std::vector<std::int64_t>(n_classes, 0));
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const int g = golds[i], p = preds[i];
    if (g < 0 || static_cast<std::size_t>(g) >= n_classes || p < 0 ||
        static_cast<std::size_t>(p) >= n_classes)
      throw std::invalid_argument("confusion_matrix: class id outside 0.." +
                                  std::to_string(n_classes - 1));
    ++cm[static_cast<std::size_t>(g)][static_cast<std::size_t>(p)];
  }
  return cm;
}

Metrics compute_metrics(std::span<const int> preds, std::span<const int> golds,
                        const std::vector<std::string>& class_names) {
  Metrics m;
  m.n = preds.size();
  m.accuracy = accuracy(preds, golds);
  m.confusion = confusion_matrix(preds, golds, class_names.size());

  const std::size_t c_count = class_names.size();
  for (std::size_t c = 0; c < c_count; ++c) {
    PerClassMetrics pc;
    pc.name = class_names[c];
    std::int64_t row_sum = 0, col_sum = 0;
    for (std::size_t k = 0; k < c_count; ++k) {
      row_sum += m.confusion[c][k];
      col_sum += m.confusion[k][c];
    }
    const double tp = static_cast<double>(m.confusion[c][c]);
    pc.precision = col_sum > 0 ? tp / static_cast<double>(col_sum) : 0.0;
    pc.recall = row_sum > 0 ? tp / static_cast<double>(row_sum) : 0.0;
    pc.f1 = (pc.precision + pc.recall) > 0.0
                ? 2.0 * pc.precision * pc.recall / (pc.precision + pc.recall)
                : 0.0;
    m.per_class.push_back(std::move(pc));
  }
  return m;
}

Metrics evaluate(const FittedPipeline& fp, const Dataset& ds) {
  std::vector<std::string> texts;
  std::vector<int> golds;
  texts.reserve(ds.size());
  golds.reserve(ds.size());
  for (const auto& doc : ds.documents) {
    if (!doc.label)
      throw std::runtime_error("evaluate: document '" + doc.id + "' has no gold label");
    texts.push_back(doc.text);
    golds.push_back(*doc.label);
  }
  const auto preds = pipeline_predict(fp, texts);
  return compute_metrics(preds, golds, pipeline_class_names(fp));
}

std::string metrics_to_text(const Metrics& m) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(4);
  out << "accuracy " << m.accuracy << "  (n=" << m.n << ")\n\n";
  std::size_t name_width = 5;
  for (const auto& pc : m.per_class) name_width = std::max(name_width, pc.name.size());
  out << std::left << std::setw(static_cast<int>(name_width) + 2) << "class" << std::right
      << std::setw(10) << "precision" << std::setw(10) << "recall" << std::setw(10) << "f1"
      << "\n";
  bool any_flagged = false;
  for (std::size_t c = 0; c < m.per_class.size(); ++c) {
    const auto& pc = m.per_class[c];
    std::int64_t row_sum = 0, col_sum = 0;
    for (std::size_t k = 0; k < m.confusion.size(); ++k) {
      row_sum += m.confusion[c][k];
      col_sum += m.confusion[k][c];
    }
    const bool flagged = row_sum == 0 || col_sum == 0;
    any_flagged |= flagged;
    out << std::left << std::setw(static_cast<int>(name_width) + 2) << pc.name << std::right
        << std::setw(10) << pc.precision << std::setw(10) << pc.recall << std::setw(10) << pc.f1
        << (flagged ? " *" : "") << "\n";
  }
  if (any_flagged)
    out << "* class never predicted and/or without gold samples; zero-denominator "
           "precision/recall reported as 0\n";
  out << "\nconfusion (rows gold, cols predicted)\n";
  for (const auto& row : m.confusion) {
    for (std::size_t k = 0; k < row.size(); ++k)
      out << (k ? " " : "") << std::setw(7) << row[k];
    out << "\n";
  }
  return out.str();
}

std::string metrics_to_json(const Metrics& m) {
  nlohmann::json per_class = nlohmann::json::array();
  for (const auto& pc : m.per_class)
    per_class.push_back({{"name", pc.name},
                         {"precision", pc.precision},
                         {"recall", pc.recall},
                         {"f1", pc.f1}});
  nlohmann::json out = {{"accuracy", m.accuracy},
                        {"n", m.n},
                        {"confusion", m.confusion},
                        {"per_class", per_class}};
  return out.dump(2);
}

}  // namespace mgtd
