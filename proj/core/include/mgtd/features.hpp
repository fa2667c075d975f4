#ifndef MGTD_FEATURES_HPP
#define MGTD_FEATURES_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mgtd/sparse.hpp"

namespace mgtd {

// Lowercased maximal runs of Unicode alphanumeric code points; everything
// else separates tokens.
std::vector<std::string> tokenize_words(std::string_view text);

// Contiguous word n-grams for n in [nmin, nmax], joined by single spaces,
// emitted position-major: all n at position 0, then position 1, ...
std::vector<std::string> word_ngrams(const std::vector<std::string>& tokens, int nmin, int nmax);

// Code-point n-grams of the lowercased text (spaces count as characters),
// emitted length-major: all n-grams of size nmin, then nmin+1, ...
std::vector<std::string> char_ngrams(std::string_view text, int nmin, int nmax);

enum class AnalyzerKind { Word, WordNgram, CharNgram };

// Term-to-column map with document frequencies. Indices are dense 0..V-1,
// assigned by lexicographic (byte) order of the terms so that two fits on
// the same corpus always agree.
struct Vocabulary {
  AnalyzerKind analyzer = AnalyzerKind::Word;
  int nmin = 1;
  int nmax = 1;
  std::size_t n_docs_fitted = 0;
  std::vector<std::string> terms;          // index -> term, lexicographic
  std::vector<std::uint32_t> doc_freq;     // index -> document frequency
  std::unordered_map<std::string, std::uint32_t> term_to_index;

  std::size_t size() const { return terms.size(); }
};

// Builds a vocabulary from per-document term lists, keeping terms whose
// document frequency is at least min_df. Throws on an empty corpus.
Vocabulary fit_vocabulary(const std::vector<std::vector<std::string>>& docs,
                          std::size_t min_df = 1);

// Raw term counts over the vocabulary; out-of-vocabulary terms are ignored.
SparseVector count_transform(const std::vector<std::string>& terms, const Vocabulary& vocab);

struct IdfWeights {
  std::vector<double> idf;  // one smoothed weight per vocabulary index
};

// Smoothed inverse document frequency, idf[t] = ln((1+N)/(1+df[t])) + 1,
// with N and df taken from the given count vectors.
IdfWeights fit_idf(const std::vector<SparseVector>& counts, const Vocabulary& vocab);

// count * idf, then L2-normalized (an all-zero vector stays zero).
SparseVector tfidf_transform(const SparseVector& counts, const IdfWeights& idf);

// Pretrained word vectors in the common text format: header "count dim",
// then one "word v1 ... v_dim" row per line.
struct EmbeddingTable {
  std::size_t dim = 0;
  std::unordered_map<std::string, std::vector<double>> vectors;

  std::size_t size() const { return vectors.size(); }
};

EmbeddingTable load_embeddings(const std::string& path);

// Mean of the vectors of in-table tokens; the zero vector when no token is
// in the table (or the token list is empty).
std::vector<double> embed_average(const std::vector<std::string>& tokens,
                                  const EmbeddingTable& table);

// Appends dense components after the sparse ones: output dimension is
// sparse.dim + dense.size(), dense zeros omitted.
SparseVector concat_features(const SparseVector& sparse, const std::vector<double>& dense);

}  // namespace mgtd

#endif  // MGTD_FEATURES_HPP
