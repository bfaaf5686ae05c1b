#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace embeval {

struct LoadOptions {
  // Keep the first row of a duplicated token and warn, instead of failing.
  bool keep_first_duplicate = false;
};

struct LoadReport {
  std::size_t header_count = 0;
  std::size_t duplicates_skipped = 0;
  std::size_t zero_rows = 0;
  std::vector<std::string> warnings;
};

// Vocabulary plus a row-major float matrix, one dim-length row per token.
// Immutable once constructed; safe to share between threads.
class EmbeddingModel {
 public:
  EmbeddingModel() = default;

  // Validates the invariants (unique non-empty whitespace-free tokens, finite
  // components, matrix size == vocab size * dim) and throws InvariantError.
  EmbeddingModel(std::string name, std::size_t dim, std::vector<std::string> vocab,
                 std::vector<float> matrix, bool normalized = false);

  const std::string& name() const noexcept { return name_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return vocab_.size(); }
  bool normalized() const noexcept { return normalized_; }

  const std::vector<std::string>& vocab() const noexcept { return vocab_; }
  const std::string& token(std::size_t index) const { return vocab_.at(index); }
  const std::vector<float>& matrix() const noexcept { return matrix_; }

  std::optional<std::size_t> index_of(std::string_view token) const;

  // Exact, case-sensitive vocabulary membership.
  bool contains(std::string_view token) const { return index_of(token).has_value(); }

  std::span<const float> row(std::size_t index) const;

  // Throws UnknownTokenError for out-of-vocabulary tokens.
  std::span<const float> vector(std::string_view token) const;

  bool is_zero_row(std::size_t index) const { return zero_rows_.at(index); }
  std::size_t zero_row_count() const noexcept { return zero_count_; }

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept {
      return std::hash<std::string_view>{}(s);
    }
  };

  std::string name_;
  std::size_t dim_ = 0;
  std::vector<std::string> vocab_;
  std::vector<float> matrix_;
  std::vector<bool> zero_rows_;
  std::size_t zero_count_ = 0;
  bool normalized_ = false;
  std::unordered_map<std::string, std::size_t, Hash, std::equal_to<>> index_;
};

// Reads the word-vector text format: "<count> <dim>" header, then one token
// followed by dim numbers per line. Throws ParseError with the 1-based line.
EmbeddingModel load_vec(std::istream& in, std::string name, const LoadOptions& options = {},
                        LoadReport* report = nullptr);

EmbeddingModel load_vec_file(const std::filesystem::path& path, std::string name,
                             const LoadOptions& options = {}, LoadReport* report = nullptr);

// Writes the text format with 6 significant digits per component, LF endings
// and no trailing spaces.
void write_vec(std::ostream& out, const EmbeddingModel& model);

// Formats one component the way write_vec does.
std::string format_component(float value);

}  // namespace embeval
