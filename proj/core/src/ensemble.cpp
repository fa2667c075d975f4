#include "mgtd/ensemble.hpp"

#include <stdexcept>

namespace mgtd {

VotingEnsemble make_voting_ensemble(std::vector<AnyModel> members, VoteMode mode,
                                    std::vector<double> weights) {
  if (members.empty()) throw std::invalid_argument("voting ensemble needs at least one member");
  if (weights.empty()) weights.assign(members.size(), 1.0);
  if (weights.size() != members.size())
    throw std::invalid_argument("voting ensemble: " + std::to_string(weights.size()) +
                                " weights for " + std::to_string(members.size()) + " members");
  double total = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw std::invalid_argument("voting ensemble weights must be nonnegative");
    total += w;
  }
  if (total <= 0.0) throw std::invalid_argument("voting ensemble weights must not all be zero");

  const std::size_t n_classes = model_num_classes(members.front());
  for (const auto& m : members) {
    if (model_num_classes(m) != n_classes)
      throw std::invalid_argument("voting ensemble members disagree on the class count");
    if (mode == VoteMode::Soft && !model_has_proba(m))
      throw std::invalid_argument(
          "soft voting requires probability support from every member "
          "(hinge-loss members are hard-vote only)");
  }

  VotingEnsemble ens;
  ens.members = std::move(members);
  ens.mode = mode;
  ens.weights = std::move(weights);
  ens.n_classes = n_classes;
  return ens;
}

namespace {

int vote(const VotingEnsemble& ens, std::span<const SparseVector> member_x) {
  if (ens.mode == VoteMode::Soft)
    return argmax_class(ensemble_predict_proba_views(ens, member_x));
  std::vector<double> tally(ens.n_classes, 0.0);
  for (std::size_t m = 0; m < ens.members.size(); ++m) {
    const int c = model_predict(ens.members[m], member_x[m]);
    tally[static_cast<std::size_t>(c)] += ens.weights[m];
  }
  return argmax_class(tally);
}

}  // namespace

int ensemble_predict(const VotingEnsemble& ens, const SparseVector& x) {
  const std::vector<SparseVector> views(ens.members.size(), x);
  return vote(ens, views);
}

std::vector<double> ensemble_predict_proba(const VotingEnsemble& ens, const SparseVector& x) {
  const std::vector<SparseVector> views(ens.members.size(), x);
  return ensemble_predict_proba_views(ens, views);
}

int ensemble_predict_views(const VotingEnsemble& ens, std::span<const SparseVector> member_x) {
  if (member_x.size() != ens.members.size())
    throw std::invalid_argument("ensemble_predict_views: one feature view per member required");
  return vote(ens, member_x);
}

std::vector<double> ensemble_predict_proba_views(const VotingEnsemble& ens,
                                                 std::span<const SparseVector> member_x) {
  if (ens.mode != VoteMode::Soft)
    throw std::runtime_error("no probability output from a hard-voting ensemble");
  if (member_x.size() != ens.members.size())
    throw std::invalid_argument("ensemble_predict_proba: one feature view per member required");
  std::vector<double> mean(ens.n_classes, 0.0);
  double total_weight = 0.0;
  for (std::size_t m = 0; m < ens.members.size(); ++m) {
    const auto probs = model_proba(ens.members[m], member_x[m]);
    for (std::size_t c = 0; c < ens.n_classes; ++c) mean[c] += ens.weights[m] * probs[c];
    total_weight += ens.weights[m];
  }
  for (double& p : mean) p /= total_weight;
  return mean;
}

}  // namespace mgtd
