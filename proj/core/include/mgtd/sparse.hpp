#ifndef MGTD_SPARSE_HPP
#define MGTD_SPARSE_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

namespace mgtd {

// Sparse feature vector in a fixed-dimension space. Entries are kept as
// parallel (index, value) arrays with strictly increasing indices and no
// explicit zeros.
struct SparseVector {
  std::size_t dim = 0;
  std::vector<std::uint32_t> indices;
  std::vector<double> values;

  std::size_t nnz() const { return indices.size(); }

  // Appends an entry; index must be larger than any existing one.
  void push(std::uint32_t index, double value);

  // Value at index (0.0 when absent), by binary search.
  double at(std::uint32_t index) const;

  std::vector<double> to_dense() const;

  bool operator==(const SparseVector&) const = default;
};

SparseVector sparse_from_dense(const std::vector<double>& dense);

double sparse_dot_dense(const SparseVector& x, const double* w);

}  // namespace mgtd

#endif  // MGTD_SPARSE_HPP
