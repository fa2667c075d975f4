#ifndef MGTD_BENCH_DATA_HPP
#define MGTD_BENCH_DATA_HPP

#include <random>
#include <string>
#include <vector>

#include "mgtd/sparse.hpp"

namespace benchdata {

inline std::vector<std::string> word_pool(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::string> pool;
  pool.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t len = 4 + rng() % 5;
    std::string w;
    for (std::size_t k = 0; k < len; ++k) w += static_cast<char>('a' + rng() % 26);
    pool.push_back(std::move(w));
  }
  return pool;
}

inline std::vector<std::string> documents(std::size_t n_docs, std::size_t tokens_per_doc,
                                          std::uint64_t seed) {
  const auto pool = word_pool(200, seed);
  std::mt19937_64 rng(seed + 1);
  std::vector<std::string> docs;
  docs.reserve(n_docs);
  for (std::size_t i = 0; i < n_docs; ++i) {
    std::string text;
    for (std::size_t t = 0; t < tokens_per_doc; ++t) {
      if (t) text += ' ';
      text += pool[rng() % pool.size()];
    }
    docs.push_back(std::move(text));
  }
  return docs;
}

inline std::vector<mgtd::SparseVector> sparse_rows(std::size_t n, std::size_t dim,
                                                   std::size_t nnz, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<mgtd::SparseVector> rows(n);
  for (auto& row : rows) {
    row.dim = dim;
    std::vector<std::uint32_t> idx;
    for (std::size_t k = 0; k < nnz; ++k) idx.push_back(static_cast<std::uint32_t>(rng() % dim));
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    for (auto j : idx) row.push(j, 0.1 + static_cast<double>(rng() % 100) / 25.0);
  }
  return rows;
}

}  // namespace benchdata

#endif
