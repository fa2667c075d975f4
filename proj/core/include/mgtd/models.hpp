#ifndef MGTD_MODELS_HPP
#define MGTD_MODELS_HPP

#include <variant>
#include <vector>

#include "mgtd/models/common.hpp"
#include "mgtd/models/gbdt.hpp"
#include "mgtd/models/linear.hpp"
#include "mgtd/models/mlp.hpp"
#include "mgtd/models/naive_bayes.hpp"

namespace mgtd {

using AnyModel = std::variant<NaiveBayesModel, LinearModel, MLPModel, GBDTModel>;

int model_predict(const AnyModel& model, const SparseVector& x);

// Probability vector; throws for models without one (hinge-loss linear).
std::vector<double> model_proba(const AnyModel& model, const SparseVector& x);

bool model_has_proba(const AnyModel& model);
std::size_t model_num_classes(const AnyModel& model);
std::size_t model_dim(const AnyModel& model);

}  // namespace mgtd

#endif  // MGTD_MODELS_HPP
