#ifndef MGTD_MODELS_NAIVE_BAYES_HPP
#define MGTD_MODELS_NAIVE_BAYES_HPP

#include <span>
#include <vector>

#include "mgtd/models/common.hpp"
#include "mgtd/sparse.hpp"

namespace mgtd {

// Multinomial Naive Bayes over nonnegative features (raw counts or TF-IDF).
struct NaiveBayesModel {
  std::size_t n_classes = 0;
  std::size_t dim = 0;
  double alpha = 1.0;
  std::vector<double> class_log_prior;   // C; ln(count_c / N), -inf for absent classes
  std::vector<double> feature_log_prob;  // C x D row-major; rows sum to 1 in exp
};

// class_log_prior = ln(count_c/N); feature_log_prob[c][j] =
// ln((S_cj + alpha)/(S_c + alpha*D)) with S_cj the per-class feature sums.
// Throws on an empty dataset or a negative feature value.
NaiveBayesModel nb_fit(std::span<const SparseVector> x, std::span<const int> y,
                       std::size_t n_classes, double alpha = 1.0);

// score_c = class_log_prior[c] + sum_j x_j * feature_log_prob[c][j]
std::vector<double> nb_log_posterior(const NaiveBayesModel& model, const SparseVector& x);

// Softmax of the log posterior.
std::vector<double> nb_predict_proba(const NaiveBayesModel& model, const SparseVector& x);

int nb_predict(const NaiveBayesModel& model, const SparseVector& x);

}  // namespace mgtd

#endif  // MGTD_MODELS_NAIVE_BAYES_HPP
