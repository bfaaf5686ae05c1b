#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "embeval/embedding_store.hpp"

namespace embeval {

struct Neighbor {
  std::string token;
  double score = 0.0;

  bool operator==(const Neighbor&) const = default;
};

// Top-k cosine neighborhood of one query, best first; equal scores are
// ordered by ascending vocabulary index. The query itself never appears.
struct NeighborSet {
  std::string query;
  std::size_t k_requested = 0;
  std::vector<Neighbor> entries;
  std::string model_name;

  // The first min(k, size) entries; equals top_k(query, k) because the
  // ordering is total.
  NeighborSet prefix(std::size_t k) const;
  std::vector<std::string> tokens() const;

  bool operator==(const NeighborSet&) const = default;
};

// dot(u,v)/(|u||v|), clamped to [-1,1]. Throws ArgumentError on a length
// mismatch or an all-zero input.
double cosine(std::span<const double> u, std::span<const double> v);
double cosine(std::span<const float> u, std::span<const float> v);

// Scales every nonzero row to unit length (norm accumulated in double, the
// quotient rounded to float). Zero rows stay zero. A model that is already
// flagged normalized is returned unchanged.
EmbeddingModel normalize_rows(const EmbeddingModel& model);

struct BatchResult {
  // Aligned with the query list; nullopt marks an out-of-vocabulary query.
  std::vector<std::optional<NeighborSet>> results;
  std::vector<std::string> skipped;
};

// Exact brute-force search over a normalized copy of a model.
// Score of a candidate = sum over components of double(q[d]) * double(c[d])
// on the unit rows, summed in component order.
class NeighborIndex {
 public:
  explicit NeighborIndex(const EmbeddingModel& model);

  const EmbeddingModel& model() const noexcept { return model_; }
  const std::string& name() const noexcept { return model_.name(); }

  // Throws UnknownTokenError. A zero-vector query has no defined cosine and
  // yields an empty neighborhood.
  NeighborSet top_k(std::string_view query, std::size_t k) const;
  NeighborSet top_k_row(std::size_t query_index, std::size_t k) const;

  // Elementwise equal to top_k; results independent of worker count.
  BatchResult top_k_batch(std::span<const std::string> queries, std::size_t k,
                          std::size_t workers = 0) const;

 private:
  EmbeddingModel model_;
};

// Convenience wrapper; normalizes on every call.
NeighborSet top_k(const EmbeddingModel& model, std::string_view query, std::size_t k);

// ---- on-disk neighbor cache ----------------------------------------------

struct CacheKey {
  std::string model_name;
  std::string digest;  // hex content digest of the .vec file
  std::size_t k = 0;
  std::size_t dim = 0;

  bool operator==(const CacheKey&) const = default;
};

// <dir>/<model_name>.k<k>.neighbors.tsv
std::filesystem::path cache_path(const std::filesystem::path& dir, const std::string& model_name,
                                 std::size_t k);

// Header line is a JSON record of the key; body lines are
// query TAB rank TAB neighbor TAB score(%.9f). Written to a temp file and
// renamed into place.
void cache_store(const std::filesystem::path& path, const CacheKey& key,
                 std::span<const NeighborSet> sets);

// Throws StaleCacheError when the stored key differs from `expected`, and
// ParseError on a malformed file.
std::vector<NeighborSet> cache_load(const std::filesystem::path& path, const CacheKey& expected);

}  // namespace embeval
