#include "embeval/report.hpp"

#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

#include "embeval/digest.hpp"

namespace embeval {

std::string format_percent(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", value);
  return buf;
}

std::string format_grouped(std::size_t value) {
  std::string digits = std::to_string(value);
  std::string out;
  const std::size_t n = digits.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0 && (n - i) % 3 == 0) out.push_back(',');
    out.push_back(digits[i]);
  }
  return out;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  return out + "\"";
}

std::string format_threshold(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", s);
  std::string out = buf;
  if (out.find('.') == std::string::npos) out += ".0";
  return out;
}

}  // namespace

std::string render_csv(const Table& table) {
  std::string out;
  const auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out.push_back(',');
      out += csv_field(cells[i]);
    }
    out.push_back('\n');
  };
  line(table.header);
  for (const auto& r : table.rows) line(r);
  return out;
}

std::string render_markdown(const Table& table) {
  std::string out;
  if (!table.title.empty()) out += "**" + table.title + "**\n\n";
  const auto line = [&](const std::vector<std::string>& cells) {
    out += "|";
    for (const auto& c : cells) out += " " + c + " |";
    out += "\n";
  };
  line(table.header);
  out += "|";
  for (std::size_t i = 0; i < table.header.size(); ++i) out += i < table.label_columns ? " --- |" : " ---: |";
  out += "\n";
  for (const auto& r : table.rows) line(r);
  return out;
}

Table coverage_table(std::span<const std::string> models, std::span<const double> thresholds,
                     const std::vector<std::vector<CoverageResult>>& results, bool grouped_counts) {
  Table t;
  t.title = "Coverage of thesaurus keywords in model vocabularies (n=" +
            (results.empty() || results[0].empty() ? std::string("0")
                                                   : format_grouped(results[0][0].n_keywords)) +
            " keywords)";
  t.header.push_back("");
  for (const auto& m : models) t.header.push_back(m);
  std::vector<std::string> vocab{"Vocab size"};
  for (std::size_t m = 0; m < models.size(); ++m) {
    const std::size_t v = results[m].empty() ? 0 : results[m][0].vocab_size;
    vocab.push_back(grouped_counts ? format_grouped(v) : std::to_string(v));
  }
  t.rows.push_back(std::move(vocab));
  for (std::size_t j = 0; j < thresholds.size(); ++j) {
    std::vector<std::string> row{"s=" + format_threshold(thresholds[j])};
    for (std::size_t m = 0; m < models.size(); ++m) row.push_back(format_percent(results[m][j].c));
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table diversity_table(std::span<const DiversityMatrix> matrices, bool dash_diagonal) {
  Table t;
  t.title = "Diversity between models";
  t.header = {"top-k", "Model"};
  t.label_columns = 2;
  if (!matrices.empty())
    for (const auto& m : matrices.front().models) t.header.push_back(m);
  for (const auto& mat : matrices) {
    for (std::size_t i = 0; i < mat.models.size(); ++i) {
      std::vector<std::string> row{i == 0 ? std::to_string(mat.k) : "", mat.models[i]};
      for (std::size_t j = 0; j < mat.models.size(); ++j)
        row.push_back(i == j && dash_diagonal ? "-" : format_percent(mat.cells[i][j].d));
      t.rows.push_back(std::move(row));
    }
  }
  return t;
}

Table diversity_detail_table(std::span<const DiversityMatrix> matrices) {
  Table t;
  t.title = "Diversity counts";
  t.header = {"k", "model_a", "model_b", "n_total", "n_evaluated", "n_disjoint", "skipped_multi_token",
              "skipped_oov", "skipped_empty", "d_evaluated", "d_total", "denominator"};
  for (const auto& mat : matrices) {
    for (std::size_t i = 0; i < mat.models.size(); ++i) {
      for (std::size_t j = i; j < mat.models.size(); ++j) {
        const auto& c = mat.cells[i][j];
        t.rows.push_back({std::to_string(mat.k), c.model_a, c.model_b, std::to_string(c.n_total),
                          std::to_string(c.n_evaluated), std::to_string(c.n_disjoint),
                          std::to_string(c.skipped_multi_token), std::to_string(c.skipped_oov),
                          std::to_string(c.skipped_empty), format_percent(c.d_evaluated), format_percent(c.d_total),
                          c.policy == Denominator::evaluated ? "evaluated" : "total"});
      }
    }
  }
  return t;
}

Table relations_table(std::span<const std::size_t> ks, std::span<const std::string> models,
                      const std::vector<std::vector<std::vector<RelationalResult>>>& results) {
  Table t;
  t.title = "Relational coverage of all models";
  t.header = {"top-k", "Model"};
  t.label_columns = 2;
  for (auto type : kAllRelations) t.header.emplace_back(short_name(type));
  for (std::size_t ki = 0; ki < ks.size(); ++ki) {
    for (std::size_t m = 0; m < models.size(); ++m) {
      std::vector<std::string> row{m == 0 ? std::to_string(ks[ki]) : "", models[m]};
      for (const auto& r : results[ki][m]) row.push_back(format_percent(r.r));
      t.rows.push_back(std::move(row));
    }
  }
  return t;
}

Table relations_detail_table(std::span<const std::size_t> ks, std::span<const std::string> models,
                             const std::vector<std::vector<std::vector<RelationalResult>>>& results) {
  Table t;
  t.title = "Relational coverage counts";
  t.header = {"k", "model", "relation", "n_pairs", "n_found", "n_oov", "oov_policy", "r", "flag"};
  for (std::size_t ki = 0; ki < ks.size(); ++ki) {
    for (std::size_t m = 0; m < models.size(); ++m) {
      for (const auto& r : results[ki][m]) {
        t.rows.push_back({std::to_string(ks[ki]), models[m], std::string(to_string(r.type)),
                          std::to_string(r.n_pairs), std::to_string(r.n_found), std::to_string(r.n_oov),
                          r.policy == OovPolicy::miss ? "miss" : "skip", format_percent(r.r),
                          r.n_pairs == 0 ? "n=0" : ""});
      }
    }
  }
  return t;
}

Table corpus_stats_table(std::span<const CorpusStats> stats, const std::string& corpus_name) {
  Table t;
  t.title = "Corpus data files";
  t.header.push_back("");
  for (const auto& s : stats) t.header.push_back(corpus_name + "." + s.lang + ".txt");
  std::vector<std::string> tokens{"Tokens"}, vocab{"Vocabulary"}, files{"Files"}, mb{"MB"};
  for (const auto& s : stats) {
    tokens.push_back(format_grouped(s.tokens));
    vocab.push_back(format_grouped(s.vocabulary));
    files.push_back(format_grouped(s.files));
    mb.push_back(format_percent(s.megabytes));
  }
  t.rows = {tokens, vocab, files, mb};
  return t;
}

void RunManifest::add_input(const std::filesystem::path& path) {
  inputs.push_back({path.string(), sha256_file(path)});
}

std::string RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  auto in = nlohmann::ordered_json::array();
  for (const auto& i : inputs) in.push_back({{"path", i.path}, {"sha256", i.sha256}});
  j["inputs"] = std::move(in);
  j["parameters"] = parameters;
  j["outputs"] = outputs;
  j["tool_version"] = tool_version;
  j["duration_seconds"] = duration_seconds;
  return j.dump();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& bytes) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << bytes;
    out.flush();
    if (!out) throw std::runtime_error("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace embeval
