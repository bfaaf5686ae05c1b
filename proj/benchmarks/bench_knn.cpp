#include <benchmark/benchmark.h>

#include <random>

#include "embeval/knn_engine.hpp"

namespace {

embeval::EmbeddingModel random_model(std::size_t n, std::size_t dim) {
  std::mt19937_64 rng(1);
  std::normal_distribution<float> g;
  std::vector<std::string> vocab;
  std::vector<float> rows(n * dim);
  for (std::size_t i = 0; i < n; ++i) vocab.push_back("w" + std::to_string(i));
  for (auto& x : rows) x = g(rng);
  return embeval::EmbeddingModel("bench", dim, std::move(vocab), std::move(rows));
}

void BM_TopKSingle(benchmark::State& state) {
  const embeval::NeighborIndex idx(random_model(static_cast<std::size_t>(state.range(0)), 100));
  std::size_t q = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(idx.top_k_row(q, 10));
    q = (q + 1) % idx.model().size();
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TopKSingle)->Arg(10000)->Arg(100000);

void BM_TopKBatch(benchmark::State& state) {
  const embeval::NeighborIndex idx(random_model(20000, 100));
  std::vector<std::string> queries;
  for (std::size_t i = 0; i < 256; ++i) queries.push_back("w" + std::to_string(i * 7));
  for (auto _ : state) benchmark::DoNotOptimize(idx.top_k_batch(queries, static_cast<std::size_t>(state.range(0))));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(queries.size()));
}
BENCHMARK(BM_TopKBatch)->Arg(10)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_Normalize(benchmark::State& state) {
  const auto model = random_model(100000, 100);
  for (auto _ : state) benchmark::DoNotOptimize(embeval::normalize_rows(model));
}
BENCHMARK(BM_Normalize)->Unit(benchmark::kMillisecond);

}  // namespace
