#include "embeval/embedding_store.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include "embeval/error.hpp"
#include "embeval/unicode.hpp"

namespace embeval {

EmbeddingModel::EmbeddingModel(std::string name, std::size_t dim, std::vector<std::string> vocab,
                               std::vector<float> matrix, bool normalized)
    : name_(std::move(name)),
      dim_(dim),
      vocab_(std::move(vocab)),
      matrix_(std::move(matrix)),
      normalized_(normalized) {
  if (dim_ == 0) throw InvariantError("embedding dimension must be positive");
  if (matrix_.size() != vocab_.size() * dim_)
    throw InvariantError("matrix size does not match vocab size * dim");
  index_.reserve(vocab_.size());
  zero_rows_.assign(vocab_.size(), false);
  for (std::size_t i = 0; i < vocab_.size(); ++i) {
    const auto& tok = vocab_[i];
    if (tok.empty()) throw InvariantError("empty token at row " + std::to_string(i));
    if (unicode::contains_whitespace(tok)) throw InvariantError("token contains whitespace: " + tok);
    if (!index_.emplace(tok, i).second) throw InvariantError("duplicate token: " + tok);
    bool zero = true;
    for (float v : row(i)) {
      if (!std::isfinite(v)) throw InvariantError("non-finite component for token " + tok);
      if (v != 0.0f) zero = false;
    }
    if (zero) {
      zero_rows_[i] = true;
      ++zero_count_;
    }
  }
}

std::optional<std::size_t> EmbeddingModel::index_of(std::string_view token) const {
  const auto it = index_.find(token);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::span<const float> EmbeddingModel::row(std::size_t index) const {
  if (index >= vocab_.size()) throw std::out_of_range("row index out of range");
  return {matrix_.data() + index * dim_, dim_};
}

std::span<const float> EmbeddingModel::vector(std::string_view token) const {
  const auto idx = index_of(token);
  if (!idx) throw UnknownTokenError(std::string(token));
  return row(*idx);
}

namespace {

// Splits on runs of ASCII spaces; tolerates a trailing space and CR, which
// common exporters emit.
std::vector<std::string_view> fields(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && line[i] == ' ') ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

bool parse_size(std::string_view s, std::size_t& out) {
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

}  // namespace

EmbeddingModel load_vec(std::istream& in, std::string name, const LoadOptions& options,
                        LoadReport* report) {
  LoadReport local;
  LoadReport& rep = report ? *report : local;
  rep = LoadReport{};

  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty input; expected '<count> <dim>' header", 1);
  const auto header = fields(line);
  std::size_t count = 0;
  std::size_t dim = 0;
  if (header.size() != 2 || !parse_size(header[0], count) || !parse_size(header[1], dim) || dim == 0)
    throw ParseError("malformed header; expected '<count> <dim>'", 1);
  rep.header_count = count;

  std::vector<std::string> vocab;
  std::vector<float> matrix;
  vocab.reserve(count);
  matrix.reserve(count * dim);
  std::unordered_map<std::string, std::size_t> first_seen;
  first_seen.reserve(count);

  std::size_t line_no = 1;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto f = fields(line);
    if (f.empty() && in.peek() == std::char_traits<char>::eof()) break;
    ++rows;
    if (rows > count) throw ParseError("more rows than the header count " + std::to_string(count), line_no);
    if (f.size() != dim + 1)
      throw ParseError("expected token plus " + std::to_string(dim) + " components, got " +
                           std::to_string(f.empty() ? 0 : f.size() - 1),
                       line_no);
    std::string token(f[0]);
    const auto [it, inserted] = first_seen.emplace(token, line_no);
    if (!inserted) {
      const std::string msg = "duplicate token '" + token + "' (first seen on line " +
                              std::to_string(it->second) + ")";
      if (!options.keep_first_duplicate) throw ParseError(msg, line_no);
      rep.warnings.push_back("line " + std::to_string(line_no) + ": " + msg + "; keeping first");
      ++rep.duplicates_skipped;
      continue;
    }
    for (std::size_t d = 1; d <= dim; ++d) {
      float v = 0;
      const auto [ptr, ec] = std::from_chars(f[d].data(), f[d].data() + f[d].size(), v);
      if (ec != std::errc{} || ptr != f[d].data() + f[d].size() || !std::isfinite(v))
        throw ParseError("bad number '" + std::string(f[d]) + "'", line_no);
      matrix.push_back(v);
    }
    vocab.push_back(std::move(token));
  }
  if (rows != count)
    throw ParseError("header declares " + std::to_string(count) + " rows but file has " +
                     std::to_string(rows));

  EmbeddingModel model(std::move(name), dim, std::move(vocab), std::move(matrix));
  rep.zero_rows = model.zero_row_count();
  if (rep.zero_rows)
    rep.warnings.push_back(std::to_string(rep.zero_rows) + " zero vector(s); excluded from neighbor results");
  return model;
}

EmbeddingModel load_vec_file(const std::filesystem::path& path, std::string name,
                             const LoadOptions& options, LoadReport* report) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  try {
    return load_vec(in, std::move(name), options, report);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), 0);
  }
}

std::string format_component(float value) {
  char buf[32];
  const int n = std::snprintf(buf, sizeof buf, "%.6g", static_cast<double>(value));
  return std::string(buf, static_cast<std::size_t>(n));
}

void write_vec(std::ostream& out, const EmbeddingModel& model) {
  out << model.size() << ' ' << model.dim() << '\n';
  for (std::size_t i = 0; i < model.size(); ++i) {
    out << model.token(i);
    for (float v : model.row(i)) out << ' ' << format_component(v);
    out << '\n';
  }
}

}  // namespace embeval
