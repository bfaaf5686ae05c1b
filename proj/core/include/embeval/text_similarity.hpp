#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace embeval {

// Edit distance with unit insertion/deletion and substitution cost 2, over
// Unicode scalar values. Equals |a| + |b| - 2 * LCS(a, b).
std::size_t edit_distance_sub2(std::u32string_view a, std::u32string_view b);
std::size_t edit_distance_sub2(std::string_view a, std::string_view b);

// Banded variant: exact when the distance is <= max_distance, otherwise
// returns max_distance + 1.
std::size_t edit_distance_sub2_bounded(std::u32string_view a, std::u32string_view b,
                                       std::size_t max_distance);

// (|a| + |b| - D) / (|a| + |b|); two empty strings compare as 1.0.
double ratio(std::string_view a, std::string_view b);
double ratio_from_distance(std::size_t total_length, std::size_t distance);

// Largest distance D with ratio_from_distance(total_length, D) >= s.
// Evaluated with the same floating-point expression as the ratio itself.
std::size_t max_distance_for(std::size_t total_length, double s);

struct RatioMatch {
  std::string keyword_token;
  std::string matched_vocab_token;
  double ratio = 0.0;
  std::size_t vocab_index = 0;

  bool operator==(const RatioMatch&) const = default;
};

// Vocabulary bucketed by length in code points, plus an exact-lookup table.
// Immutable after construction.
class VocabularyIndex {
 public:
  explicit VocabularyIndex(std::span<const std::string> vocab);

  std::size_t size() const noexcept { return tokens_.size(); }
  const std::string& token(std::size_t index) const { return tokens_.at(index); }
  std::optional<std::size_t> find(std::string_view token) const;

  // Token with the highest ratio >= s, ties to the lowest vocabulary index.
  // Exact hits short-circuit; otherwise only length buckets that can reach s
  // are scanned, with a banded DP whose band shrinks as better matches are
  // found. Throws ArgumentError unless s is in (0, 1].
  std::optional<RatioMatch> best_match(std::string_view token, double s) const;

  // Reference linear scan with the full DP over every token.
  std::optional<RatioMatch> best_match_unpruned(std::string_view token, double s) const;

 private:
  std::vector<std::string> tokens_;
  std::vector<std::u32string> decoded_;
  std::vector<std::vector<std::size_t>> by_length_;  // length -> indices, ascending
  std::unordered_map<std::string, std::size_t> exact_;
};

inline std::optional<RatioMatch> best_match(std::string_view token, const VocabularyIndex& vocab,
                                            double s) {
  return vocab.best_match(token, s);
}

}  // namespace embeval
