#include <benchmark/benchmark.h>

#include <random>
#include <set>

#include "embeval/text_similarity.hpp"

namespace {

std::vector<std::string> random_words(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> len(3, 16), letter(0, 25);
  std::set<std::string> seen;
  std::vector<std::string> out;
  while (out.size() < n) {
    std::string w(static_cast<std::size_t>(len(rng)), 'a');
    for (auto& c : w) c = static_cast<char>('a' + letter(rng));
    if (seen.insert(w).second) out.push_back(w);
  }
  return out;
}

void BM_EditDistance(benchmark::State& state) {
  const auto words = random_words(1000, 3);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(embeval::edit_distance_sub2(words[i % 1000], words[(i + 1) % 1000]));
    ++i;
  }
}
BENCHMARK(BM_EditDistance);

void BM_BestMatch(benchmark::State& state, bool pruned) {
  const auto vocab = random_words(100000, 4);
  const embeval::VocabularyIndex idx(vocab);
  const auto queries = random_words(64, 5);
  const double s = static_cast<double>(state.range(0)) / 100.0;
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& q = queries[i++ % queries.size()];
    benchmark::DoNotOptimize(pruned ? idx.best_match(q, s) : idx.best_match_unpruned(q, s));
  }
}
BENCHMARK_CAPTURE(BM_BestMatch, pruned, true)->Arg(90)->Arg(95)->Arg(100)->Unit(benchmark::kMicrosecond);
BENCHMARK_CAPTURE(BM_BestMatch, unpruned, false)->Arg(90)->Arg(95)->Unit(benchmark::kMillisecond);

}  // namespace
