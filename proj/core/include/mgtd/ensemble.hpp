#ifndef MGTD_ENSEMBLE_HPP
#define MGTD_ENSEMBLE_HPP

#include <span>
#include <vector>

#include "mgtd/models.hpp"

namespace mgtd {

enum class VoteMode { Hard, Soft };

// Weighted voting over heterogeneous fitted members. Soft mode averages
// member probabilities; Hard mode counts weighted member votes. Ties break
// toward the lowest class id.
struct VotingEnsemble {
  std::vector<AnyModel> members;
  VoteMode mode = VoteMode::Hard;
  std::vector<double> weights;  // always one nonnegative weight per member
  std::size_t n_classes = 0;
};

// Validates the invariants: at least one member, a common class count,
// nonnegative weights with a positive sum, and probability support for
// every member in Soft mode (rejected here, not at prediction time).
VotingEnsemble make_voting_ensemble(std::vector<AnyModel> members, VoteMode mode,
                                    std::vector<double> weights = {});

int ensemble_predict(const VotingEnsemble& ens, const SparseVector& x);
std::vector<double> ensemble_predict_proba(const VotingEnsemble& ens, const SparseVector& x);

// Same votes, but each member reads its own feature view of the document.
int ensemble_predict_views(const VotingEnsemble& ens, std::span<const SparseVector> member_x);
std::vector<double> ensemble_predict_proba_views(const VotingEnsemble& ens,
                                                 std::span<const SparseVector> member_x);

}  // namespace mgtd

#endif  // MGTD_ENSEMBLE_HPP
