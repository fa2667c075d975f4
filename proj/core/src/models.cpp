#include "mgtd/models.hpp"

namespace mgtd {

int model_predict(const AnyModel& model, const SparseVector& x) {
  return std::visit(
      [&x](const auto& m) -> int {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, NaiveBayesModel>) return nb_predict(m, x);
        else if constexpr (std::is_same_v<T, LinearModel>) return linear_predict(m, x);
        else if constexpr (std::is_same_v<T, MLPModel>) return mlp_predict(m, x);
        else return gbdt_predict(m, x);
      },
      model);
}

std::vector<double> model_proba(const AnyModel& model, const SparseVector& x) {
  return std::visit(
      [&x](const auto& m) -> std::vector<double> {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, NaiveBayesModel>) return nb_predict_proba(m, x);
        else if constexpr (std::is_same_v<T, LinearModel>) return linear_proba(m, x);
        else if constexpr (std::is_same_v<T, MLPModel>) return mlp_forward(m, x);
        else return gbdt_predict_proba(m, x);
      },
      model);
}

bool model_has_proba(const AnyModel& model) {
  if (const auto* linear = std::get_if<LinearModel>(&model))
    return linear->loss == LinearLoss::Logistic;
  return true;
}

std::size_t model_num_classes(const AnyModel& model) {
  return std::visit([](const auto& m) { return m.n_classes; }, model);
}

std::size_t model_dim(const AnyModel& model) {
  return std::visit([](const auto& m) { return m.dim; }, model);
}

}  // namespace mgtd
