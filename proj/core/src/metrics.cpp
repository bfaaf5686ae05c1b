#include "embeval/metrics.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

#include "embeval/error.hpp"
#include "embeval/parallel.hpp"
#include "embeval/unicode.hpp"

namespace embeval {

std::vector<std::string> prepare_tokens(std::string_view text, bool lowercase) {
  std::string s;
  s.reserve(text.size());
  for (char32_t cp : unicode::decode(text)) {
    if (cp == U'-' || cp == 0x2010 || cp == 0x2011) cp = U' ';
    unicode::append_utf8(s, lowercase ? unicode::to_lower(cp) : cp);
  }
  return unicode::split_whitespace(s);
}

double percentage(std::size_t hits, std::size_t n) {
  return n == 0 ? 0.0 : 100.0 * static_cast<double>(hits) / static_cast<double>(n);
}

bool keyword_covered(std::span<const std::string> tokens, const VocabularyIndex& vocab, double s, bool lowercase,
                     KeywordHit* hit) {
  std::vector<std::string> prepared;
  for (const auto& t : tokens)
    for (auto& p : prepare_tokens(t, lowercase)) prepared.push_back(std::move(p));
  if (prepared.empty()) return false;
  std::vector<std::string> matched;
  double min_ratio = 1.0;
  for (const auto& t : prepared) {
    const auto m = vocab.best_match(t, s);
    if (!m) return false;
    matched.push_back(m->matched_vocab_token);
    min_ratio = std::min(min_ratio, m->ratio);
  }
  if (hit) {
    hit->matched = std::move(matched);
    hit->min_ratio = min_ratio;
  }
  return true;
}

CoverageResult coverage(const std::string& model_name, const VocabularyIndex& vocab, std::span<const Keyword> keywords,
                        double s, const MetricOptions& options) {
  if (!(s > 0.0 && s <= 1.0)) throw ArgumentError("similarity threshold must be in (0, 1]");
  CoverageResult out;
  out.model = model_name;
  out.s = s;
  out.vocab_size = vocab.size();
  out.n_keywords = keywords.size();

  std::vector<char> covered(keywords.size(), 0);
  std::vector<char> empty(keywords.size(), 0);
  std::vector<KeywordHit> hits(keywords.size());
  parallel_for(keywords.size(), options.workers, [&](std::size_t i) {
    const auto& kw = keywords[i];
    hits[i].keyword = kw.label;
    std::size_t n_prepared = 0;
    for (const auto& t : kw.tokens) n_prepared += prepare_tokens(t, options.lowercase).size();
    if (n_prepared == 0) {
      empty[i] = 1;
      return;
    }
    covered[i] = keyword_covered(kw.tokens, vocab, s, options.lowercase, &hits[i]) ? 1 : 0;
  });
  for (std::size_t i = 0; i < keywords.size(); ++i) {
    out.n_empty += empty[i];
    if (covered[i]) {
      ++out.n_covered;
      out.hits.push_back(std::move(hits[i]));
    }
  }
  out.c = percentage(out.n_covered, out.n_keywords);
  return out;
}

CoverageResult coverage(const EmbeddingModel& model, std::span<const Keyword> keywords, double s,
                        const MetricOptions& options) {
  const VocabularyIndex vocab(model.vocab());
  return coverage(model.name(), vocab, keywords, s, options);
}

NeighborTable::NeighborTable(std::string model_name, std::size_t k, std::vector<NeighborSet> sets)
    : model_(std::move(model_name)), k_(k) {
  for (auto& s : sets) {
    auto q = s.query;
    sets_.insert_or_assign(std::move(q), std::move(s));
  }
}

NeighborTable NeighborTable::compute(const NeighborIndex& index, std::span<const std::string> queries, std::size_t k,
                                     std::size_t workers) {
  auto batch = index.top_k_batch(queries, k, workers);
  std::vector<NeighborSet> sets;
  sets.reserve(batch.results.size());
  for (auto& r : batch.results)
    if (r) sets.push_back(std::move(*r));
  return NeighborTable(index.name(), k, std::move(sets));
}

const NeighborSet* NeighborTable::find(std::string_view query) const {
  const auto it = sets_.find(query);
  return it == sets_.end() ? nullptr : &it->second;
}

std::vector<NeighborSet> NeighborTable::sets() const {
  std::vector<NeighborSet> out;
  out.reserve(sets_.size());
  for (const auto& [q, s] : sets_) out.push_back(s);
  return out;
}

std::vector<std::string> diversity_queries(std::span<const Keyword> keywords, bool lowercase) {
  std::set<std::string> out;
  for (const auto& kw : keywords) {
    auto toks = prepare_tokens(kw.label, lowercase);
    if (toks.size() == 1) out.insert(std::move(toks.front()));
  }
  return {out.begin(), out.end()};
}

namespace {

std::string relation_query(std::string_view label, bool lowercase) {
  return lowercase ? unicode::to_lower(unicode::trim(label)) : std::string(unicode::trim(label));
}

void check_depth(const NeighborTable& t, std::size_t k) {
  if (t.depth() < k)
    throw InvariantError("neighbor table for " + t.model_name() + " has depth " + std::to_string(t.depth()) +
                         " < requested k=" + std::to_string(k));
}

}  // namespace

std::vector<std::string> relation_queries(std::span<const DescriptorPair> pairs, bool lowercase) {
  std::set<std::string> out;
  for (const auto& p : pairs) out.insert(relation_query(p.descriptor_label, lowercase));
  return {out.begin(), out.end()};
}

DiversityResult diversity(const NeighborTable& a, const NeighborTable& b, std::span<const Keyword> keywords,
                          std::size_t k, const MetricOptions& options) {
  if (k == 0) throw ArgumentError("diversity requires k >= 1");
  check_depth(a, k);
  check_depth(b, k);
  DiversityResult out;
  out.model_a = a.model_name();
  out.model_b = b.model_name();
  out.k = k;
  out.n_total = keywords.size();
  out.policy = options.denominator;

  for (const auto& kw : keywords) {
    const auto toks = prepare_tokens(kw.label, options.lowercase);
    if (toks.size() != 1) {
      ++out.skipped_multi_token;
      continue;
    }
    const NeighborSet* na = a.find(toks.front());
    const NeighborSet* nb = b.find(toks.front());
    if (!na || !nb) {
      ++out.skipped_oov;
      continue;
    }
    const std::size_t ka = std::min(k, na->entries.size());
    const std::size_t kb = std::min(k, nb->entries.size());
    if (ka == 0 || kb == 0) {
      ++out.skipped_empty;
      continue;
    }
    ++out.n_evaluated;
    std::unordered_set<std::string_view> left;
    for (std::size_t i = 0; i < ka; ++i) left.insert(na->entries[i].token);
    bool shared = false;
    for (std::size_t i = 0; i < kb && !shared; ++i) shared = left.count(nb->entries[i].token) > 0;
    if (!shared) ++out.n_disjoint;
  }
  out.d_evaluated = percentage(out.n_disjoint, out.n_evaluated);
  out.d_total = percentage(out.n_disjoint, out.n_total);
  out.d = out.policy == Denominator::evaluated ? out.d_evaluated : out.d_total;
  return out;
}

DiversityResult diversity(const NeighborIndex& a, const NeighborIndex& b, std::span<const Keyword> keywords,
                          std::size_t k, const MetricOptions& options) {
  const auto queries = diversity_queries(keywords, options.lowercase);
  return diversity(NeighborTable::compute(a, queries, k, options.workers),
                   NeighborTable::compute(b, queries, k, options.workers), keywords, k, options);
}

DiversityMatrix diversity_matrix(std::span<const NeighborTable> tables, std::span<const Keyword> keywords,
                                 std::size_t k, const MetricOptions& options) {
  if (tables.size() < 2) throw ArgumentError("diversity needs at least two models");
  DiversityMatrix m;
  m.k = k;
  const std::size_t n = tables.size();
  for (const auto& t : tables) m.models.push_back(t.model_name());
  m.cells.assign(n, std::vector<DiversityResult>(n));
  for (std::size_t i = 0; i < n; ++i) {
    m.cells[i][i] = diversity(tables[i], tables[i], keywords, k, options);
    for (std::size_t j = i + 1; j < n; ++j) {
      auto r = diversity(tables[i], tables[j], keywords, k, options);
      auto mirrored = r;
      std::swap(mirrored.model_a, mirrored.model_b);
      m.cells[i][j] = std::move(r);
      m.cells[j][i] = std::move(mirrored);
    }
  }
  return m;
}

std::vector<RelationalResult> relational_coverage(const NeighborTable& table, std::span<const DescriptorPair> pairs,
                                                  std::size_t k, const MetricOptions& options) {
  if (k == 0) throw ArgumentError("relational coverage requires k >= 1");
  check_depth(table, k);
  std::vector<RelationalResult> out;
  for (const auto type : kAllRelations) {
    RelationalResult r;
    r.model = table.model_name();
    r.type = type;
    r.k = k;
    r.policy = options.oov_policy;
    out.push_back(std::move(r));
  }
  for (const auto& p : pairs) {
    auto& r = out[static_cast<std::size_t>(p.type)];
    const NeighborSet* ns = table.find(relation_query(p.descriptor_label, options.lowercase));
    if (!ns) {
      ++r.n_oov;
      if (options.oov_policy == OovPolicy::miss) ++r.n_pairs;
      continue;
    }
    ++r.n_pairs;
    const auto target = relation_query(p.concept_label, options.lowercase);
    const std::size_t depth = std::min(k, ns->entries.size());
    for (std::size_t i = 0; i < depth; ++i) {
      if (ns->entries[i].token == target) {
        ++r.n_found;
        break;
      }
    }
  }
  for (auto& r : out) r.r = percentage(r.n_found, r.n_pairs);
  return out;
}

std::vector<RelationalResult> relational_coverage(const NeighborIndex& index, std::span<const DescriptorPair> pairs,
                                                  std::size_t k, const MetricOptions& options) {
  const auto queries = relation_queries(pairs, options.lowercase);
  return relational_coverage(NeighborTable::compute(index, queries, k, options.workers), pairs, k, options);
}

}  // namespace embeval
