#include "embeval/knn_engine.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <queue>

#include <nlohmann/json.hpp>

#include "embeval/error.hpp"
#include "embeval/parallel.hpp"

namespace embeval {

NeighborSet NeighborSet::prefix(std::size_t k) const {
  NeighborSet out;
  out.query = query;
  out.k_requested = k;
  out.model_name = model_name;
  out.entries.assign(entries.begin(), entries.begin() + static_cast<std::ptrdiff_t>(std::min(k, entries.size())));
  return out;
}

std::vector<std::string> NeighborSet::tokens() const {
  std::vector<std::string> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.token);
  return out;
}

namespace {

template <typename T>
double cosine_impl(std::span<const T> u, std::span<const T> v) {
  if (u.size() != v.size()) throw ArgumentError("cosine: vector lengths differ");
  double dot = 0, uu = 0, vv = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double a = u[i];
    const double b = v[i];
    dot += a * b;
    uu += a * a;
    vv += b * b;
  }
  if (uu == 0.0 || vv == 0.0) throw ArgumentError("cosine: zero vector");
  return std::clamp(dot / (std::sqrt(uu) * std::sqrt(vv)), -1.0, 1.0);
}

}  // namespace

double cosine(std::span<const double> u, std::span<const double> v) { return cosine_impl(u, v); }
double cosine(std::span<const float> u, std::span<const float> v) { return cosine_impl(u, v); }

EmbeddingModel normalize_rows(const EmbeddingModel& model) {
  if (model.normalized()) return model;
  std::vector<float> matrix = model.matrix();
  const std::size_t dim = model.dim();
  for (std::size_t r = 0; r < model.size(); ++r) {
    float* row = matrix.data() + r * dim;
    double sq = 0;
    for (std::size_t d = 0; d < dim; ++d) sq += static_cast<double>(row[d]) * row[d];
    if (sq == 0.0) continue;
    const double norm = std::sqrt(sq);
    for (std::size_t d = 0; d < dim; ++d) row[d] = static_cast<float>(row[d] / norm);
  }
  return EmbeddingModel(model.name(), dim, model.vocab(), std::move(matrix), true);
}

NeighborIndex::NeighborIndex(const EmbeddingModel& model) : model_(normalize_rows(model)) {}

NeighborSet NeighborIndex::top_k(std::string_view query, std::size_t k) const {
  const auto idx = model_.index_of(query);
  if (!idx) throw UnknownTokenError(std::string(query));
  return top_k_row(*idx, k);
}

NeighborSet NeighborIndex::top_k_row(std::size_t query_index, std::size_t k) const {
  NeighborSet out;
  out.query = model_.token(query_index);
  out.k_requested = k;
  out.model_name = model_.name();
  if (k == 0 || model_.is_zero_row(query_index)) return out;

  struct Cand {
    double score;
    std::size_t index;
  };
  // "a before b" in result order.
  const auto better = [](const Cand& a, const Cand& b) {
    return a.score > b.score || (a.score == b.score && a.index < b.index);
  };
  // Max-heap on "better" keeps the worst retained candidate on top.
  std::priority_queue<Cand, std::vector<Cand>, decltype(better)> heap(better);

  const std::size_t dim = model_.dim();
  const float* q = model_.matrix().data() + query_index * dim;
  const float* base = model_.matrix().data();
  for (std::size_t r = 0; r < model_.size(); ++r) {
    if (r == query_index || model_.is_zero_row(r)) continue;
    const float* c = base + r * dim;
    double score = 0;
    for (std::size_t d = 0; d < dim; ++d) score += static_cast<double>(q[d]) * static_cast<double>(c[d]);
    const Cand cand{score, r};
    if (heap.size() < k) {
      heap.push(cand);
    } else if (better(cand, heap.top())) {
      heap.pop();
      heap.push(cand);
    }
  }
  std::vector<Cand> picked;
  picked.reserve(heap.size());
  while (!heap.empty()) {
    picked.push_back(heap.top());
    heap.pop();
  }
  std::reverse(picked.begin(), picked.end());
  out.entries.reserve(picked.size());
  for (const auto& c : picked) out.entries.push_back({model_.token(c.index), c.score});
  return out;
}

BatchResult NeighborIndex::top_k_batch(std::span<const std::string> queries, std::size_t k,
                                       std::size_t workers) const {
  BatchResult out;
  out.results.resize(queries.size());
  parallel_for(queries.size(), workers, [&](std::size_t i) {
    if (const auto idx = model_.index_of(queries[i])) out.results[i] = top_k_row(*idx, k);
  });
  for (std::size_t i = 0; i < queries.size(); ++i)
    if (!out.results[i]) out.skipped.push_back(queries[i]);
  return out;
}

NeighborSet top_k(const EmbeddingModel& model, std::string_view query, std::size_t k) {
  return NeighborIndex(model).top_k(query, k);
}

std::filesystem::path cache_path(const std::filesystem::path& dir, const std::string& model_name,
                                 std::size_t k) {
  return dir / (model_name + ".k" + std::to_string(k) + ".neighbors.tsv");
}

namespace {

nlohmann::json key_json(const CacheKey& key) {
  return {{"model", key.model_name}, {"digest", key.digest}, {"k", key.k}, {"dim", key.dim}};
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find('\t', start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace

void cache_store(const std::filesystem::path& path, const CacheKey& key,
                 std::span<const NeighborSet> sets) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto header = key_json(key);
  nlohmann::json empty = nlohmann::json::array();
  for (const auto& s : sets)
    if (s.entries.empty()) empty.push_back(s.query);
  header["empty_queries"] = std::move(empty);

  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << header.dump() << '\n';
    char buf[64];
    for (const auto& s : sets) {
      for (std::size_t r = 0; r < s.entries.size(); ++r) {
        std::snprintf(buf, sizeof buf, "%.9f", s.entries[r].score);
        out << s.query << '\t' << (r + 1) << '\t' << s.entries[r].token << '\t' << buf << '\n';
      }
    }
    out.flush();
    if (!out) throw std::runtime_error("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::vector<NeighborSet> cache_load(const std::filesystem::path& path, const CacheKey& expected) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open cache " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty cache file", 1);
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad cache header: ") + e.what(), 1);
  }
  CacheKey stored;
  try {
    stored.model_name = header.at("model").get<std::string>();
    stored.digest = header.at("digest").get<std::string>();
    stored.k = header.at("k").get<std::size_t>();
    stored.dim = header.at("dim").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad cache header: ") + e.what(), 1);
  }
  if (!(stored == expected))
    throw StaleCacheError("stale neighbor cache " + path.string() + " (stored " + key_json(stored).dump() +
                          ", expected " + key_json(expected).dump() + ")");

  std::vector<NeighborSet> out;
  std::map<std::string, std::size_t, std::less<>> pos;
  const auto slot = [&](std::string_view q) -> NeighborSet& {
    auto it = pos.find(q);
    if (it == pos.end()) {
      it = pos.emplace(std::string(q), out.size()).first;
      out.push_back(NeighborSet{std::string(q), expected.k, {}, expected.model_name});
    }
    return out[it->second];
  };
  if (header.contains("empty_queries"))
    for (const auto& q : header["empty_queries"]) slot(q.get<std::string>());

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_tabs(line);
    if (f.size() != 4) throw ParseError("expected 4 tab-separated fields", line_no);
    std::size_t rank = 0;
    double score = 0;
    const auto r1 = std::from_chars(f[1].data(), f[1].data() + f[1].size(), rank);
    const auto r2 = std::from_chars(f[3].data(), f[3].data() + f[3].size(), score);
    if (r1.ec != std::errc{} || r2.ec != std::errc{}) throw ParseError("bad rank or score", line_no);
    auto& set = slot(f[0]);
    if (rank != set.entries.size() + 1) throw ParseError("ranks out of order", line_no);
    set.entries.push_back({std::string(f[2]), score});
  }
  return out;
}

}  // namespace embeval
