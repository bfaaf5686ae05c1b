#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "embeval/corpus_pipeline.hpp"
#include "embeval/metrics.hpp"

namespace embeval {

inline constexpr const char* kToolVersion = "0.1.0";

// Plain table; the first row of `rows` is data, not a header.
struct Table {
  std::string title;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::size_t label_columns = 1;  // left-aligned in Markdown; the rest align right
};

std::string render_csv(const Table& table);
std::string render_markdown(const Table& table);

std::string format_percent(double value);          // 2 decimals
std::string format_grouped(std::size_t value);     // 1,234,567

// Rows: "Vocab size", then one row per threshold ("s=0.9"); one column per model.
// results[m][j] is model m at thresholds[j].
Table coverage_table(std::span<const std::string> models, std::span<const double> thresholds,
                     const std::vector<std::vector<CoverageResult>>& results, bool grouped_counts);

// One block per k; columns: top-k, Model, then one column per model. The
// diagonal shows "-" when dash_diagonal is set, else the computed value.
Table diversity_table(std::span<const DiversityMatrix> matrices, bool dash_diagonal = true);
// Long-form counts behind every off-diagonal and diagonal cell.
Table diversity_detail_table(std::span<const DiversityMatrix> matrices);

// Columns: top-k, Model, bro, nar, rel, alt. results[k_index][model_index] holds the 4 relation results.
Table relations_table(std::span<const std::size_t> ks, std::span<const std::string> models,
                      const std::vector<std::vector<std::vector<RelationalResult>>>& results);
Table relations_detail_table(std::span<const std::size_t> ks, std::span<const std::string> models,
                             const std::vector<std::vector<std::vector<RelationalResult>>>& results);

Table corpus_stats_table(std::span<const CorpusStats> stats, const std::string& corpus_name);

struct ManifestInput {
  std::string path;
  std::string sha256;
};

struct RunManifest {
  std::string command;
  std::vector<ManifestInput> inputs;
  std::map<std::string, std::string> parameters;
  std::vector<std::string> outputs;
  std::string tool_version = kToolVersion;
  double duration_seconds = 0.0;

  // Digests every path as it is added.
  void add_input(const std::filesystem::path& path);

  // Single-line JSON record.
  std::string to_json() const;
};

// Writes bytes to path via a temporary file and rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& bytes);

}  // namespace embeval
