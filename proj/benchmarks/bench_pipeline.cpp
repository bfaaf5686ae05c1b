#include <benchmark/benchmark.h>

#include "embeval/corpus_pipeline.hpp"
#include "embeval/language_id.hpp"

namespace {

std::vector<embeval::InputDocument> documents(std::size_t n) {
  const std::string body =
      "Deckblatt\n---\n"
      "Die Sozial-\nwissenschaft untersucht den Wandel der Gesellschaft.\n"
      "Im Jahr 2020 wurden 5 Thesen zur Nord-Süd-Beziehung formuliert.\n"
      "The social structure of modern societies is changing quickly.\n"
      "Die SozialStaat-Debatte betrifft viele Menschen in Deutschland.\n";
  std::vector<embeval::InputDocument> docs;
  for (std::size_t i = 0; i < n; ++i)
    docs.push_back({"doc" + std::to_string(i) + ".txt", body + "Zeile " + std::to_string(i) + " der Untersuchung.\n"});
  return docs;
}

void BM_Pipeline(benchmark::State& state) {
  const auto docs = documents(static_cast<std::size_t>(state.range(0)));
  embeval::PipelineConfig config;
  config.cover_delimiter = "^---$";
  const auto classifier = embeval::TrigramClassifier::with_builtin_profiles();
  for (auto _ : state) benchmark::DoNotOptimize(embeval::run_pipeline(docs, config, classifier));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Pipeline)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_Classify(benchmark::State& state) {
  const auto classifier = embeval::TrigramClassifier::with_builtin_profiles();
  for (auto _ : state) benchmark::DoNotOptimize(classifier.classify("Die Sozialwissenschaft untersucht den Wandel der Gesellschaft."));
}
BENCHMARK(BM_Classify);

}  // namespace
