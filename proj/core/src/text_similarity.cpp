#include "embeval/text_similarity.hpp"

#include <algorithm>
#include <cmath>

#include "embeval/error.hpp"
#include "embeval/unicode.hpp"

namespace embeval {

std::size_t edit_distance_sub2_bounded(std::u32string_view a, std::u32string_view b,
                                       std::size_t max_distance) {
  const std::size_t m = a.size();
  const std::size_t n = b.size();
  const std::size_t D = max_distance;
  const std::size_t inf = D + 1;
  if ((m > n ? m - n : n - m) > D) return inf;

  std::vector<std::size_t> prev(n + 1, inf), cur(n + 1, inf);
  for (std::size_t j = 0; j <= std::min(n, D); ++j) prev[j] = j;

  for (std::size_t i = 1; i <= m; ++i) {
    const std::size_t lo = i > D ? i - D : 0;
    const std::size_t hi = std::min(n, i + D);
    if (lo > 0) cur[lo - 1] = inf;
    if (hi < n) cur[hi + 1] = inf;
    std::size_t row_min = inf;
    std::size_t j = lo;
    if (j == 0) {
      cur[0] = i <= D ? i : inf;
      row_min = cur[0];
      j = 1;
    }
    for (; j <= hi; ++j) {
      std::size_t v = std::min(prev[j], cur[j - 1]) + 1;
      const std::size_t diag = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 2);
      v = std::min({v, diag, inf});
      cur[j] = v;
      row_min = std::min(row_min, v);
    }
    if (row_min > D) return inf;
    std::swap(prev, cur);
  }
  return std::min(prev[n], inf);
}

std::size_t edit_distance_sub2(std::u32string_view a, std::u32string_view b) {
  return edit_distance_sub2_bounded(a, b, a.size() + b.size());
}

std::size_t edit_distance_sub2(std::string_view a, std::string_view b) {
  return edit_distance_sub2(unicode::decode(a), unicode::decode(b));
}

double ratio_from_distance(std::size_t total_length, std::size_t distance) {
  if (total_length == 0) return 1.0;
  return static_cast<double>(total_length - distance) / static_cast<double>(total_length);
}

double ratio(std::string_view a, std::string_view b) {
  const auto ua = unicode::decode(a);
  const auto ub = unicode::decode(b);
  return ratio_from_distance(ua.size() + ub.size(), edit_distance_sub2(ua, ub));
}

std::size_t max_distance_for(std::size_t total_length, double s) {
  if (total_length == 0) return 0;
  const double approx = std::floor((1.0 - s) * static_cast<double>(total_length));
  std::size_t d = approx <= 0 ? 0 : std::min(total_length, static_cast<std::size_t>(approx));
  while (d < total_length && ratio_from_distance(total_length, d + 1) >= s) ++d;
  while (d > 0 && ratio_from_distance(total_length, d) < s) --d;
  return d;
}

VocabularyIndex::VocabularyIndex(std::span<const std::string> vocab)
    : tokens_(vocab.begin(), vocab.end()) {
  decoded_.reserve(tokens_.size());
  exact_.reserve(tokens_.size());
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    decoded_.push_back(unicode::decode(tokens_[i]));
    const auto len = decoded_.back().size();
    if (by_length_.size() <= len) by_length_.resize(len + 1);
    by_length_[len].push_back(i);
    exact_.emplace(tokens_[i], i);  // first occurrence wins
  }
}

std::optional<std::size_t> VocabularyIndex::find(std::string_view token) const {
  const auto it = exact_.find(std::string(token));
  if (it == exact_.end()) return std::nullopt;
  return it->second;
}

namespace {

void check_threshold(double s) {
  if (!(s > 0.0 && s <= 1.0)) throw ArgumentError("similarity threshold must be in (0, 1]");
}

}  // namespace

std::optional<RatioMatch> VocabularyIndex::best_match(std::string_view token, double s) const {
  check_threshold(s);
  if (const auto hit = find(token)) return RatioMatch{std::string(token), tokens_[*hit], 1.0, *hit};
  if (s >= 1.0) return std::nullopt;

  const auto query = unicode::decode(token);
  const std::size_t la = query.size();

  // Visit length buckets nearest to la first so the bound tightens early.
  std::vector<std::size_t> lengths;
  for (std::size_t lb = 0; lb < by_length_.size(); ++lb)
    if (!by_length_[lb].empty()) lengths.push_back(lb);
  std::stable_sort(lengths.begin(), lengths.end(), [la](std::size_t x, std::size_t y) {
    const auto dx = x > la ? x - la : la - x;
    const auto dy = y > la ? y - la : la - y;
    return dx < dy;
  });

  std::optional<RatioMatch> best;
  for (const std::size_t lb : lengths) {
    const std::size_t total = la + lb;
    const std::size_t gap = lb > la ? lb - la : la - lb;
    std::size_t bound = max_distance_for(total, best ? std::max(s, best->ratio) : s);
    if (gap > bound) continue;
    for (const std::size_t idx : by_length_[lb]) {
      const std::size_t d = edit_distance_sub2_bounded(query, decoded_[idx], bound);
      if (d > bound) continue;
      const double r = ratio_from_distance(total, d);
      if (r < s) continue;
      if (!best || r > best->ratio || (r == best->ratio && idx < best->vocab_index)) {
        best = RatioMatch{std::string(token), tokens_[idx], r, idx};
        bound = max_distance_for(total, std::max(s, r));
        if (gap > bound) break;
      }
    }
  }
  return best;
}

std::optional<RatioMatch> VocabularyIndex::best_match_unpruned(std::string_view token, double s) const {
  check_threshold(s);
  const auto query = unicode::decode(token);
  std::optional<RatioMatch> best;
  for (std::size_t idx = 0; idx < decoded_.size(); ++idx) {
    const std::size_t total = query.size() + decoded_[idx].size();
    const double r = ratio_from_distance(total, edit_distance_sub2(query, decoded_[idx]));
    if (r >= s && (!best || r > best->ratio)) best = RatioMatch{std::string(token), tokens_[idx], r, idx};
  }
  return best;
}

}  // namespace embeval
