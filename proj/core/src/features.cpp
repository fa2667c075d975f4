#include "mgtd/features.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "mgtd/unicode.hpp"

namespace mgtd {

std::vector<std::string> tokenize_words(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char32_t cp : utf8_decode(text)) {
    if (is_alnum(cp)) {
      utf8_append(current, to_lower(cp));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

namespace {

void check_ngram_range(int nmin, int nmax) {
  if (nmin < 1 || nmin > nmax)
    throw std::invalid_argument("invalid n-gram range (" + std::to_string(nmin) + "," +
                                std::to_string(nmax) + ")");
}

}  // namespace

std::vector<std::string> word_ngrams(const std::vector<std::string>& tokens, int nmin, int nmax) {
  check_ngram_range(nmin, nmax);
  std::vector<std::string> grams;
  const int count = static_cast<int>(tokens.size());
  for (int pos = 0; pos < count; ++pos) {
    for (int n = nmin; n <= nmax && pos + n <= count; ++n) {
      std::string gram = tokens[pos];
      for (int k = 1; k < n; ++k) {
        gram += ' ';
        gram += tokens[pos + k];
      }
      grams.push_back(std::move(gram));
    }
  }
  return grams;
}

std::vector<std::string> char_ngrams(std::string_view text, int nmin, int nmax) {
  check_ngram_range(nmin, nmax);
  auto cps = utf8_decode(text);
  for (auto& cp : cps) cp = to_lower(cp);
  const int len = static_cast<int>(cps.size());
  std::vector<std::string> grams;
  for (int n = nmin; n <= nmax; ++n) {
    for (int pos = 0; pos + n <= len; ++pos) {
      std::string gram;
      for (int k = 0; k < n; ++k) utf8_append(gram, cps[pos + k]);
      grams.push_back(std::move(gram));
    }
  }
  return grams;
}

// --- SparseVector ---

void SparseVector::push(std::uint32_t index, double value) {
  if (!indices.empty() && index <= indices.back())
    throw std::invalid_argument("sparse indices must be strictly increasing");
  if (index >= dim) throw std::invalid_argument("sparse index out of range");
  if (value == 0.0) return;
  indices.push_back(index);
  values.push_back(value);
}

double SparseVector::at(std::uint32_t index) const {
  auto it = std::lower_bound(indices.begin(), indices.end(), index);
  if (it == indices.end() || *it != index) return 0.0;
  return values[static_cast<std::size_t>(it - indices.begin())];
}

std::vector<double> SparseVector::to_dense() const {
  std::vector<double> dense(dim, 0.0);
  for (std::size_t k = 0; k < indices.size(); ++k) dense[indices[k]] = values[k];
  return dense;
}

SparseVector sparse_from_dense(const std::vector<double>& dense) {
  SparseVector out;
  out.dim = dense.size();
  for (std::size_t j = 0; j < dense.size(); ++j)
    if (dense[j] != 0.0) {
      out.indices.push_back(static_cast<std::uint32_t>(j));
      out.values.push_back(dense[j]);
    }
  return out;
}

double sparse_dot_dense(const SparseVector& x, const double* w) {
  double acc = 0.0;
  for (std::size_t k = 0; k < x.indices.size(); ++k) acc += w[x.indices[k]] * x.values[k];
  return acc;
}

// --- Vocabulary / TF-IDF ---

Vocabulary fit_vocabulary(const std::vector<std::vector<std::string>>& docs,
                          std::size_t min_df) {
  if (docs.empty()) throw std::runtime_error("cannot fit a vocabulary on an empty corpus");
  std::map<std::string, std::uint32_t> df;  // ordered: gives lexicographic indices
  std::vector<std::string> seen;
  for (const auto& doc : docs) {
    seen.assign(doc.begin(), doc.end());
    std::sort(seen.begin(), seen.end());
    seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
    for (const auto& term : seen) ++df[term];
  }
  Vocabulary vocab;
  vocab.n_docs_fitted = docs.size();
  for (const auto& [term, freq] : df) {
    if (freq < min_df) continue;
    vocab.term_to_index.emplace(term, static_cast<std::uint32_t>(vocab.terms.size()));
    vocab.terms.push_back(term);
    vocab.doc_freq.push_back(freq);
  }
  return vocab;
}

SparseVector count_transform(const std::vector<std::string>& terms, const Vocabulary& vocab) {
  std::unordered_map<std::uint32_t, double> counts;
  counts.reserve(terms.size());
  for (const auto& term : terms) {
    auto it = vocab.term_to_index.find(term);
    if (it != vocab.term_to_index.end()) counts[it->second] += 1.0;
  }
  SparseVector out;
  out.dim = vocab.size();
  out.indices.reserve(counts.size());
  for (const auto& [index, _] : counts) out.indices.push_back(index);
  std::sort(out.indices.begin(), out.indices.end());
  out.values.reserve(counts.size());
  for (auto index : out.indices) out.values.push_back(counts[index]);
  return out;
}

IdfWeights fit_idf(const std::vector<SparseVector>& counts, const Vocabulary& vocab) {
  const std::size_t dim = vocab.size();
  std::vector<std::uint32_t> df(dim, 0);
  for (const auto& vec : counts) {
    if (vec.dim != dim)
      throw std::invalid_argument("count vector dimension does not match vocabulary");
    for (auto index : vec.indices) ++df[index];
  }
  const double n = static_cast<double>(counts.size());
  IdfWeights w;
  w.idf.resize(dim);
  for (std::size_t j = 0; j < dim; ++j)
    w.idf[j] = std::log((1.0 + n) / (1.0 + static_cast<double>(df[j]))) + 1.0;
  return w;
}

SparseVector tfidf_transform(const SparseVector& counts, const IdfWeights& idf) {
  if (counts.dim != idf.idf.size())
    throw std::invalid_argument("count vector dimension does not match idf weights");
  SparseVector out = counts;
  double norm_sq = 0.0;
  for (std::size_t k = 0; k < out.indices.size(); ++k) {
    out.values[k] *= idf.idf[out.indices[k]];
    norm_sq += out.values[k] * out.values[k];
  }
  if (norm_sq > 0.0) {
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (auto& v : out.values) v *= inv;
  }
  return out;
}

// --- Embeddings ---

EmbeddingTable load_embeddings(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open embedding file '" + path + "'");
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("embedding file '" + path + "': missing header");
  std::istringstream header(line);
  long long count = -1, dim = -1;
  if (!(header >> count >> dim) || count < 0 || dim <= 0)
    throw std::runtime_error("embedding file '" + path + "': malformed header '" + line + "'");
  std::string extra;
  if (header >> extra)
    throw std::runtime_error("embedding file '" + path + "': malformed header '" + line + "'");

  EmbeddingTable table;
  table.dim = static_cast<std::size_t>(dim);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string word;
    row >> word;
    std::vector<double> vec(table.dim);
    for (std::size_t k = 0; k < table.dim; ++k) {
      if (!(row >> vec[k]))
        throw std::runtime_error("embedding file '" + path + "': line " +
                                 std::to_string(line_no) + " has fewer than " +
                                 std::to_string(table.dim) + " values");
    }
    double trailing;
    if (row >> trailing)
      throw std::runtime_error("embedding file '" + path + "': line " +
                               std::to_string(line_no) + " has more than " +
                               std::to_string(table.dim) + " values");
    table.vectors.emplace(std::move(word), std::move(vec));  // first occurrence wins
  }
  return table;
}

std::vector<double> embed_average(const std::vector<std::string>& tokens,
                                  const EmbeddingTable& table) {
  std::vector<double> mean(table.dim, 0.0);
  std::size_t hits = 0;
  for (const auto& token : tokens) {
    auto it = table.vectors.find(token);
    if (it == table.vectors.end()) continue;
    ++hits;
    for (std::size_t k = 0; k < table.dim; ++k) mean[k] += it->second[k];
  }
  if (hits > 0)
    for (auto& v : mean) v /= static_cast<double>(hits);
  return mean;
}

SparseVector concat_features(const SparseVector& sparse, const std::vector<double>& dense) {
  SparseVector out = sparse;
  out.dim = sparse.dim + dense.size();
  for (std::size_t k = 0; k < dense.size(); ++k) {
    if (dense[k] == 0.0) continue;
    out.indices.push_back(static_cast<std::uint32_t>(sparse.dim + k));
    out.values.push_back(dense[k]);
  }
  return out;
}

}  // namespace mgtd
