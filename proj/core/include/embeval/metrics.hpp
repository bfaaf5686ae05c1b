#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "embeval/embedding_store.hpp"
#include "embeval/knn_engine.hpp"
#include "embeval/text_similarity.hpp"
#include "embeval/thesaurus.hpp"

namespace embeval {

enum class Denominator { evaluated, total };
enum class OovPolicy { miss, skip };

struct MetricOptions {
  bool lowercase = true;
  Denominator denominator = Denominator::evaluated;
  OovPolicy oov_policy = OovPolicy::miss;
  std::size_t workers = 0;  // 0 = hardware concurrency
};

// Maps a thesaurus label (or one of its tokens) to corpus-style tokens:
// hyphens become spaces, optional lowercasing, whitespace split.
std::vector<std::string> prepare_tokens(std::string_view text, bool lowercase);

// Percentage with n == 0 mapped to 0.
double percentage(std::size_t hits, std::size_t n);

// ---- coverage -------------------------------------------------------------

struct KeywordHit {
  std::string keyword;
  std::vector<std::string> matched;
  double min_ratio = 0.0;
};

struct CoverageResult {
  std::string model;
  double s = 1.0;
  std::size_t vocab_size = 0;
  std::size_t n_keywords = 0;
  std::size_t n_covered = 0;
  std::size_t n_empty = 0;  // keywords with no tokens left after preparation
  double c = 0.0;           // 100 * n_covered / n_keywords
  std::vector<KeywordHit> hits;
};

// True iff every prepared token has a best_match >= s. Records the matches in
// `hit` when covered. An empty token list is not covered.
bool keyword_covered(std::span<const std::string> tokens, const VocabularyIndex& vocab, double s,
                     bool lowercase = true, KeywordHit* hit = nullptr);

CoverageResult coverage(const std::string& model_name, const VocabularyIndex& vocab,
                        std::span<const Keyword> keywords, double s, const MetricOptions& options = {});
CoverageResult coverage(const EmbeddingModel& model, std::span<const Keyword> keywords, double s,
                        const MetricOptions& options = {});

// ---- neighborhoods --------------------------------------------------------

// Precomputed neighborhoods of one model at depth k; smaller k are served as
// prefixes. A query absent from the table is treated as out of vocabulary.
class NeighborTable {
 public:
  NeighborTable() = default;
  NeighborTable(std::string model_name, std::size_t k, std::vector<NeighborSet> sets);

  static NeighborTable compute(const NeighborIndex& index, std::span<const std::string> queries,
                               std::size_t k, std::size_t workers = 0);

  const std::string& model_name() const noexcept { return model_; }
  std::size_t depth() const noexcept { return k_; }
  const NeighborSet* find(std::string_view query) const;
  std::vector<NeighborSet> sets() const;

 private:
  std::string model_;
  std::size_t k_ = 0;
  std::map<std::string, NeighborSet, std::less<>> sets_;
};

// Distinct single-token queries needed for diversity.
std::vector<std::string> diversity_queries(std::span<const Keyword> keywords, bool lowercase);
// Distinct descriptor queries needed for relational coverage.
std::vector<std::string> relation_queries(std::span<const DescriptorPair> pairs, bool lowercase);

// ---- diversity ------------------------------------------------------------

struct DiversityResult {
  std::string model_a;
  std::string model_b;
  std::size_t k = 0;
  std::size_t n_total = 0;
  std::size_t n_evaluated = 0;
  std::size_t n_disjoint = 0;
  std::size_t skipped_multi_token = 0;
  std::size_t skipped_oov = 0;
  std::size_t skipped_empty = 0;  // query with no neighbors (zero vector)
  double d_evaluated = 0.0;
  double d_total = 0.0;
  Denominator policy = Denominator::evaluated;
  double d = 0.0;  // per policy
};

DiversityResult diversity(const NeighborTable& a, const NeighborTable& b, std::span<const Keyword> keywords,
                          std::size_t k, const MetricOptions& options = {});
DiversityResult diversity(const NeighborIndex& a, const NeighborIndex& b, std::span<const Keyword> keywords,
                          std::size_t k, const MetricOptions& options = {});

struct DiversityMatrix {
  std::vector<std::string> models;
  std::size_t k = 0;
  std::vector<std::vector<DiversityResult>> cells;  // symmetric
};

// Each unordered pair computed once and mirrored. Throws ArgumentError for
// fewer than two models.
DiversityMatrix diversity_matrix(std::span<const NeighborTable> tables, std::span<const Keyword> keywords,
                                 std::size_t k, const MetricOptions& options = {});

// ---- relational coverage --------------------------------------------------

struct RelationalResult {
  std::string model;
  RelationType type = RelationType::broader;
  std::size_t k = 0;
  std::size_t n_pairs = 0;  // denominator after the OOV policy
  std::size_t n_found = 0;
  std::size_t n_oov = 0;
  OovPolicy policy = OovPolicy::miss;
  double r = 0.0;
};

// One result per relation type, in bro, nar, rel, alt order.
std::vector<RelationalResult> relational_coverage(const NeighborTable& table, std::span<const DescriptorPair> pairs,
                                                  std::size_t k, const MetricOptions& options = {});
std::vector<RelationalResult> relational_coverage(const NeighborIndex& index, std::span<const DescriptorPair> pairs,
                                                  std::size_t k, const MetricOptions& options = {});

}  // namespace embeval
