#include <benchmark/benchmark.h>

#include "bench_data.hpp"
#include "mgtd/features.hpp"
#include "mgtd/preprocess.hpp"

using namespace mgtd;

namespace {

const std::vector<std::string>& docs() {
  static const auto d = benchdata::documents(256, 60, 11);
  return d;
}

void BM_tokenize_words(benchmark::State& state) {
  std::size_t i = 0;
  for (auto _ : state) {
    auto tokens = tokenize_words(docs()[i++ % docs().size()]);
    benchmark::DoNotOptimize(tokens);
  }
}
BENCHMARK(BM_tokenize_words);

void BM_char_ngrams_3_5(benchmark::State& state) {
  std::size_t i = 0;
  for (auto _ : state) {
    auto grams = char_ngrams(docs()[i++ % docs().size()], 3, 5);
    benchmark::DoNotOptimize(grams);
  }
}
BENCHMARK(BM_char_ngrams_3_5);

void BM_clean_heuristic(benchmark::State& state) {
  std::size_t i = 0;
  for (auto _ : state) {
    auto cleaned = clean_heuristic(docs()[i++ % docs().size()]);
    benchmark::DoNotOptimize(cleaned);
  }
}
BENCHMARK(BM_clean_heuristic);

void BM_fit_vocabulary_char(benchmark::State& state) {
  std::vector<std::vector<std::string>> lists;
  for (const auto& doc : docs()) lists.push_back(char_ngrams(doc, 3, 5));
  for (auto _ : state) {
    auto vocab = fit_vocabulary(lists, 1);
    benchmark::DoNotOptimize(vocab);
  }
}
BENCHMARK(BM_fit_vocabulary_char);

void BM_tfidf_transform(benchmark::State& state) {
  std::vector<std::vector<std::string>> lists;
  for (const auto& doc : docs()) lists.push_back(char_ngrams(doc, 3, 5));
  const auto vocab = fit_vocabulary(lists, 1);
  std::vector<SparseVector> counts;
  for (const auto& list : lists) counts.push_back(count_transform(list, vocab));
  const auto idf = fit_idf(counts, vocab);
  std::size_t i = 0;
  for (auto _ : state) {
    auto v = tfidf_transform(counts[i++ % counts.size()], idf);
    benchmark::DoNotOptimize(v);
  }
}
BENCHMARK(BM_tfidf_transform);

}  // namespace
