#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "embeval/language_id.hpp"

namespace embeval {

struct Diagnostics {
  std::vector<std::string> warnings;
  void warn(std::string msg) { warnings.push_back(std::move(msg)); }
};

// Drops everything up to and including the first line that matches the
// ECMAScript pattern. Without a match the text is returned unchanged and a
// warning is recorded unless the text is blank.
std::string strip_cover(std::string_view text, std::string_view delimiter_pattern, Diagnostics* diag = nullptr);

// Joins words broken across lines ("Wis-\nsen" -> "Wissen"); other line
// breaks are kept.
std::string join_hyphenated_breaks(std::string_view text);

// join_hyphenated_breaks, then every remaining line break and hyphen becomes
// a space. Soft hyphens are dropped.
std::string dehyphenate(std::string_view text);

// Inserts a space at every lowercase-to-uppercase boundary.
std::string split_camel_case(std::string_view text);

// Cardinal numeral for 0 <= n < 1'000'000 in "de" or "en".
std::string number_words(std::uint32_t n, std::string_view lang);

// Replaces standalone canonical integers below one million (optionally
// wrapped in brackets, quotes, or trailing sentence punctuation) by numeral words.
std::string numbers_to_words(std::string_view text, std::string_view lang);

// Whitespace runs -> one space, trimmed, lowercased.
std::string normalize_ws_lower(std::string_view text);

// Whitespace split with punctuation at token edges detached as separate tokens.
std::vector<std::string> tokenize(std::string_view text);

struct DedupReport {
  std::size_t kept = 0;
  std::size_t dropped = 0;
  std::size_t hash_collisions = 0;
};

// First-occurrence-wins filter keyed by 64-bit FNV-1a, confirmed by full
// string comparison.
class SentenceDeduplicator {
 public:
  // True when the sentence is new (and records it).
  bool insert(std::string_view sentence);
  const DedupReport& report() const noexcept { return report_; }

 private:
  std::unordered_map<std::uint64_t, std::vector<std::string>> seen_;
  DedupReport report_;
};

std::vector<std::string> dedup_sentences(std::span<const std::string> lines, DedupReport* report = nullptr);

// ---- pipeline ---------------------------------------------------------------

struct PipelineConfig {
  std::vector<std::string> languages{"de", "en"};
  double confidence_threshold = 0.55;
  std::string cover_delimiter;  // empty: no cover stripping
  bool convert_numbers = true;
  std::string corpus_name = "corpus";
  std::size_t workers = 0;
};

// key=value lines; '#' starts a comment. Keys: languages, confidence_threshold,
// cover_delimiter, convert_numbers, corpus. Throws ParseError.
PipelineConfig parse_config(std::istream& in);
PipelineConfig load_config(const std::filesystem::path& path);

struct InputDocument {
  std::string doc_id;
  std::string text;
};

// One document after cleaning: each kept line with its language.
struct CorpusDocument {
  std::string doc_id;
  std::vector<std::string> line_langs;
  std::vector<std::string> cleaned_lines;  // tokenized, space-joined
  std::size_t unknown_lines = 0;
  std::vector<std::string> warnings;
};

// Every stage except deduplication, for one document.
CorpusDocument clean_document(const InputDocument& doc, const PipelineConfig& config,
                              const LanguageClassifier& classifier);

struct CorpusStats {
  std::string lang;
  std::size_t tokens = 0;
  std::size_t vocabulary = 0;
  std::size_t files = 0;
  double megabytes = 0.0;  // output bytes / 2^20

  bool operator==(const CorpusStats&) const = default;
};

// Recount from corpus lines (tokens separated by single spaces).
CorpusStats compute_stats(const std::string& lang, std::span<const std::string> lines, std::size_t files);

struct PipelineResult {
  std::map<std::string, std::vector<std::string>> lines;    // lang -> corpus lines
  std::map<std::string, std::vector<std::string>> sources;  // lang -> contributing doc ids
  std::map<std::string, DedupReport> dedup;
  std::vector<CorpusStats> stats;  // in configured language order
  std::size_t documents = 0;
  std::size_t unknown_lines = 0;
  std::vector<std::string> warnings;
};

PipelineResult run_pipeline(std::span<const InputDocument> documents, const PipelineConfig& config,
                            const LanguageClassifier& classifier);
PipelineResult run_pipeline(std::span<const InputDocument> documents, const PipelineConfig& config);

// All *.txt files in a directory, sorted by name. Unreadable files are skipped
// with a warning.
std::vector<InputDocument> read_documents(const std::filesystem::path& dir, Diagnostics* diag = nullptr);

// Writes <corpus>.<lang>.txt, <corpus>.<lang>.sources and <corpus>.stats.csv.
// Returns the written paths.
std::vector<std::filesystem::path> write_corpus(const PipelineResult& result, const std::filesystem::path& out_dir,
                                                const std::string& corpus_name);

void write_stats_csv(std::ostream& out, std::span<const CorpusStats> stats);

}  // namespace embeval
