#include <benchmark/benchmark.h>

#include "bench_data.hpp"
#include "mgtd/models.hpp"

using namespace mgtd;

namespace {

struct Problem {
  std::vector<SparseVector> x;
  std::vector<int> y;
};

const Problem& problem() {
  static const Problem p = [] {
    Problem out;
    out.x = benchdata::sparse_rows(512, 4096, 80, 21);
    std::mt19937_64 rng(22);
    for (std::size_t i = 0; i < out.x.size(); ++i)
      out.y.push_back(static_cast<int>(rng() % 2));
    return out;
  }();
  return p;
}

void BM_nb_fit(benchmark::State& state) {
  for (auto _ : state) {
    auto model = nb_fit(problem().x, problem().y, 2, 1.0);
    benchmark::DoNotOptimize(model);
  }
}
BENCHMARK(BM_nb_fit);

void BM_sgd_linear_fit(benchmark::State& state) {
  TrainConfig cfg = TrainConfig::linear_defaults();
  cfg.epochs = 5;
  for (auto _ : state) {
    auto model = sgd_fit_linear(problem().x, problem().y, LinearLoss::Logistic, 2, cfg);
    benchmark::DoNotOptimize(model);
  }
}
BENCHMARK(BM_sgd_linear_fit);

void BM_gbdt_fit(benchmark::State& state) {
  TrainConfig cfg = TrainConfig::gbdt_defaults();
  cfg.n_rounds = 10;
  cfg.max_depth = 4;
  cfg.min_leaf = 5;
  for (auto _ : state) {
    auto model = gbdt_fit(problem().x, problem().y, 2, cfg);
    benchmark::DoNotOptimize(model);
  }
}
BENCHMARK(BM_gbdt_fit)->Unit(benchmark::kMillisecond);

void BM_mlp_fit(benchmark::State& state) {
  TrainConfig cfg = TrainConfig::mlp_defaults();
  cfg.epochs = 2;
  cfg.hidden_size = 32;
  for (auto _ : state) {
    auto model = mlp_fit(problem().x, problem().y, 2, cfg);
    benchmark::DoNotOptimize(model);
  }
}
BENCHMARK(BM_mlp_fit)->Unit(benchmark::kMillisecond);

void BM_nb_predict(benchmark::State& state) {
  const auto model = nb_fit(problem().x, problem().y, 2, 1.0);
  std::size_t i = 0;
  for (auto _ : state) {
    auto c = nb_predict(model, problem().x[i++ % problem().x.size()]);
    benchmark::DoNotOptimize(c);
  }
}
BENCHMARK(BM_nb_predict);

void BM_gbdt_predict(benchmark::State& state) {
  TrainConfig cfg = TrainConfig::gbdt_defaults();
  cfg.n_rounds = 10;
  cfg.max_depth = 4;
  cfg.min_leaf = 5;
  const auto model = gbdt_fit(problem().x, problem().y, 2, cfg);
  std::size_t i = 0;
  for (auto _ : state) {
    auto c = gbdt_predict(model, problem().x[i++ % problem().x.size()]);
    benchmark::DoNotOptimize(c);
  }
}
BENCHMARK(BM_gbdt_predict);

}  // namespace
