#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "embeval/corpus_pipeline.hpp"
#include "embeval/embedding_store.hpp"
#include "embeval/error.hpp"
#include "embeval/knn_engine.hpp"
#include "embeval/metrics.hpp"
#include "embeval/report.hpp"
#include "embeval/thesaurus.hpp"

namespace embeval::cli {

namespace fs = std::filesystem;

namespace {

struct Options {
  std::vector<std::string> models;
  std::string thesaurus;
  std::string lang = "de";
  std::vector<double> s;
  std::vector<std::size_t> k;
  bool single_word_only = false;
  std::string oov_policy = "miss";
  std::string denominator = "evaluated";
  bool no_lowercase = false;
  std::string cache_dir;
  bool refresh = false;
  std::string out_dir = ".";
  std::size_t jobs = 0;

  std::string input_dir;
  std::string config;
  std::vector<std::string> corpus_files;
  std::string word;
};

struct ModelArg {
  std::string name;
  fs::path path;
};

std::string join(const std::vector<std::string>& parts, const std::string& sep = ",") {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

template <typename T>
std::string join_numbers(const std::vector<T>& values) {
  std::vector<std::string> parts;
  for (const auto& v : values) parts.push_back(number(static_cast<double>(v)));
  return join(parts);
}

void require_file(const std::string& path, const std::string& what) {
  if (path.empty()) throw ArgumentError(what + " is required");
  if (!fs::is_regular_file(path)) throw ArgumentError(what + " not found: " + path);
}

std::vector<ModelArg> parse_models(const Options& o, std::size_t min_count) {
  if (o.models.size() < min_count)
    throw ArgumentError("need at least " + std::to_string(min_count) + " --model argument(s)");
  std::vector<ModelArg> out;
  std::set<std::string> names;
  for (const auto& value : o.models) {
    ModelArg m;
    const auto eq = value.find('=');
    if (eq == std::string::npos) {
      m = {fs::path(value).stem().string(), value};
    } else {
      if (eq == 0 || eq + 1 == value.size()) throw ArgumentError("malformed --model value: " + value);
      m = {value.substr(0, eq), value.substr(eq + 1)};
    }
    if (!names.insert(m.name).second) throw ArgumentError("duplicate model name: " + m.name);
    require_file(m.path.string(), "model file");
    out.push_back(std::move(m));
  }
  return out;
}

void validate_s(const std::vector<double>& s) {
  for (double v : s)
    if (!(v > 0.0 && v <= 1.0)) throw ArgumentError("--s must lie in (0, 1], got " + number(v));
}

void validate_k(const std::vector<std::size_t>& k) {
  for (auto v : k)
    if (v == 0) throw ArgumentError("--k must be at least 1");
}

void validate_lang(const std::string& lang) {
  if (lang.size() != 2 || !std::islower(static_cast<unsigned char>(lang[0])) ||
      !std::islower(static_cast<unsigned char>(lang[1])))
    throw ArgumentError("--lang must be a two-letter lowercase code");
}

MetricOptions metric_options(const Options& o) {
  MetricOptions m;
  m.lowercase = !o.no_lowercase;
  m.denominator = o.denominator == "total" ? Denominator::total : Denominator::evaluated;
  m.oov_policy = o.oov_policy == "skip" ? OovPolicy::skip : OovPolicy::miss;
  m.workers = o.jobs;
  return m;
}

fs::path resolve_cache_dir(const Options& o) {
  if (!o.cache_dir.empty()) return o.cache_dir;
  if (const char* env = std::getenv("EMBEVAL_CACHE_DIR"); env && *env) return env;
  return fs::path(o.out_dir) / "cache";
}

// Collects outputs and writes the manifest last.
class Run {
 public:
  Run(std::string command, const Options& o)
      : dir_(o.out_dir), start_(std::chrono::steady_clock::now()) {
    manifest_.command = std::move(command);
  }

  RunManifest& manifest() { return manifest_; }
  const fs::path& dir() const { return dir_; }

  void write(const std::string& name, const std::string& bytes) {
    write_file_atomic(dir_ / name, bytes);
    manifest_.outputs.push_back(name);
  }

  void record(const fs::path& written) { manifest_.outputs.push_back(written.filename().string()); }

  void finish() {
    manifest_.duration_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    write_file_atomic(dir_ / (manifest_.command + ".manifest.json"), manifest_.to_json() + "\n");
  }

 private:
  fs::path dir_;
  RunManifest manifest_;
  std::chrono::steady_clock::time_point start_;
};

struct LoadedModel {
  std::string name;
  EmbeddingModel model;
  std::string digest;
};

LoadedModel load_model(const ModelArg& arg, Run& run, std::ostream& err) {
  run.manifest().add_input(arg.path);
  LoadReport report;
  auto model = load_vec_file(arg.path, arg.name, {}, &report);
  for (const auto& w : report.warnings) err << arg.name << ": " << w << "\n";
  return {arg.name, std::move(model), run.manifest().inputs.back().sha256};
}

// Neighborhoods of `queries` at depth k, served from the on-disk cache when
// it matches the model digest. Missing queries are computed and merged in.
// A stale cache is an argument error unless --refresh is given.
NeighborTable neighbor_table(const LoadedModel& m, std::span<const std::string> queries, std::size_t k,
                             const Options& o) {
  const fs::path dir = resolve_cache_dir(o);
  const CacheKey key{m.name, m.digest, k, m.model.dim()};
  const fs::path path = cache_path(dir, m.name, k);

  std::map<std::string, NeighborSet> sets;
  if (!o.refresh && fs::exists(path)) {
    try {
      for (auto& s : cache_load(path, key)) sets.emplace(s.query, std::move(s));
    } catch (const StaleCacheError& e) {
      throw ArgumentError("stale neighbor cache " + path.string() + " (" + e.what() + "); rerun with --refresh");
    } catch (const ParseError& e) {
      throw ParseError(path.string() + ": " + e.what());
    }
  }

  std::vector<std::string> missing;
  for (const auto& q : queries)
    if (!sets.count(q) && m.model.contains(q)) missing.push_back(q);

  if (!missing.empty() || o.refresh || !fs::exists(path)) {
    if (!missing.empty()) {
      const NeighborIndex index(m.model);
      auto batch = index.top_k_batch(missing, k, o.jobs);
      for (auto& r : batch.results)
        if (r) sets.emplace(r->query, std::move(*r));
    }
    std::vector<NeighborSet> all;
    for (auto& [q, s] : sets) all.push_back(s);
    fs::create_directories(dir);
    cache_store(path, key, all);
  }

  std::vector<NeighborSet> wanted;
  for (const auto& q : queries)
    if (auto it = sets.find(q); it != sets.end()) wanted.push_back(it->second);
  return NeighborTable(m.name, k, std::move(wanted));
}

// ---- commands ---------------------------------------------------------------

int cmd_coverage(const Options& o, std::ostream& out, std::ostream& err) {
  const std::vector<double> s = o.s.empty() ? std::vector<double>{0.9, 0.95, 1.0} : o.s;
  validate_s(s);
  validate_lang(o.lang);
  const auto models = parse_models(o, 1);
  require_file(o.thesaurus, "thesaurus");

  Run run("coverage", o);
  run.manifest().add_input(o.thesaurus);
  const auto th = load_thesaurus(o.thesaurus);
  const auto kws = keywords(th, o.lang);
  const auto mopts = metric_options(o);

  std::vector<std::string> names;
  std::vector<std::vector<CoverageResult>> results;
  for (const auto& arg : models) {
    const auto m = load_model(arg, run, err);
    const VocabularyIndex vocab(m.model.vocab());
    names.push_back(m.name);
    auto& row = results.emplace_back();
    for (double v : s) row.push_back(coverage(m.name, vocab, kws, v, mopts));
  }

  Table detail{"Coverage counts", {"model", "s", "vocab_size", "n_keywords", "n_covered", "n_empty", "c"}, {}};
  for (const auto& row : results)
    for (const auto& r : row)
      detail.rows.push_back({r.model, number(r.s), std::to_string(r.vocab_size), std::to_string(r.n_keywords),
                             std::to_string(r.n_covered), std::to_string(r.n_empty), format_percent(r.c)});

  const auto md = render_markdown(coverage_table(names, s, results, true));
  run.write("coverage.csv", render_csv(coverage_table(names, s, results, false)));
  run.write("coverage.md", md);
  run.write("coverage.detail.csv", render_csv(detail));
  auto& p = run.manifest().parameters;
  p["models"] = join(names);
  p["s"] = join_numbers(s);
  p["lang"] = o.lang;
  p["lowercase"] = o.no_lowercase ? "false" : "true";
  run.finish();
  out << md;
  return kOk;
}

int cmd_diversity(const Options& o, std::ostream& out, std::ostream& err) {
  const std::vector<std::size_t> ks = o.k.empty() ? std::vector<std::size_t>{10, 50, 200} : o.k;
  validate_k(ks);
  validate_lang(o.lang);
  const auto models = parse_models(o, 2);
  require_file(o.thesaurus, "thesaurus");

  Run run("diversity", o);
  run.manifest().add_input(o.thesaurus);
  const auto th = load_thesaurus(o.thesaurus);
  const auto kws = keywords(th, o.lang);
  const auto mopts = metric_options(o);
  const auto queries = diversity_queries(kws, mopts.lowercase);
  const std::size_t k_max = *std::max_element(ks.begin(), ks.end());

  std::vector<NeighborTable> tables;
  for (const auto& arg : models) {
    const auto m = load_model(arg, run, err);
    tables.push_back(neighbor_table(m, queries, k_max, o));
  }
  std::vector<DiversityMatrix> matrices;
  for (auto k : ks) matrices.push_back(diversity_matrix(tables, kws, k, mopts));

  const auto md = render_markdown(diversity_table(matrices, true));
  run.write("diversity.csv", render_csv(diversity_table(matrices, false)));
  run.write("diversity.md", md);
  run.write("diversity.detail.csv", render_csv(diversity_detail_table(matrices)));
  auto& p = run.manifest().parameters;
  std::vector<std::string> names;
  for (const auto& m : models) names.push_back(m.name);
  p["models"] = join(names);
  p["k"] = join_numbers(ks);
  p["lang"] = o.lang;
  p["lowercase"] = o.no_lowercase ? "false" : "true";
  p["denominator"] = o.denominator;
  run.finish();
  out << md;
  return kOk;
}

int cmd_relations(const Options& o, std::ostream& out, std::ostream& err) {
  const std::vector<std::size_t> ks = o.k.empty() ? std::vector<std::size_t>{10, 50, 200} : o.k;
  validate_k(ks);
  validate_lang(o.lang);
  const auto models = parse_models(o, 1);
  require_file(o.thesaurus, "thesaurus");

  Run run("relations", o);
  run.manifest().add_input(o.thesaurus);
  const auto th = load_thesaurus(o.thesaurus);
  const auto mopts = metric_options(o);
  std::vector<DescriptorPair> pairs;
  auto& p = run.manifest().parameters;
  for (auto type : kAllRelations) {
    PairReport rep;
    const auto some = descriptor_pairs(th, type, o.lang, o.single_word_only, &rep);
    pairs.insert(pairs.end(), some.begin(), some.end());
    if (rep.multi_word || rep.missing_label)
      err << to_string(type) << ": dropped " << rep.multi_word << " multi-word and " << rep.missing_label
          << " unlabeled pairs\n";
  }
  const auto queries = relation_queries(pairs, mopts.lowercase);
  const std::size_t k_max = *std::max_element(ks.begin(), ks.end());

  std::vector<std::string> names;
  std::vector<NeighborTable> tables;
  for (const auto& arg : models) {
    const auto m = load_model(arg, run, err);
    names.push_back(m.name);
    tables.push_back(neighbor_table(m, queries, k_max, o));
  }
  std::vector<std::vector<std::vector<RelationalResult>>> results;
  for (auto k : ks) {
    auto& per_model = results.emplace_back();
    for (const auto& t : tables) per_model.push_back(relational_coverage(t, pairs, k, mopts));
  }

  const auto md = render_markdown(relations_table(ks, names, results));
  run.write("relations.csv", render_csv(relations_table(ks, names, results)));
  run.write("relations.md", md);
  run.write("relations.detail.csv", render_csv(relations_detail_table(ks, names, results)));
  p["models"] = join(names);
  p["k"] = join_numbers(ks);
  p["lang"] = o.lang;
  p["lowercase"] = o.no_lowercase ? "false" : "true";
  p["single_word_only"] = o.single_word_only ? "true" : "false";
  p["oov_policy"] = o.oov_policy;
  run.finish();
  out << md;
  return kOk;
}

int cmd_neighbors(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.word.empty()) throw ArgumentError("--word is required");
  if (o.k.size() > 1) throw ArgumentError("neighbors takes a single --k");
  const std::size_t k = o.k.empty() ? 10 : o.k.front();
  validate_k({k});
  if (o.models.size() != 1) throw ArgumentError("neighbors takes exactly one --model");
  const auto models = parse_models(o, 1);

  Run run("neighbors", o);
  const auto m = load_model(models.front(), run, err);
  if (!m.model.contains(o.word)) throw UnknownTokenError(o.word);
  const auto set = NeighborIndex(m.model).top_k(o.word, k);

  Table t{"Nearest neighbors of \"" + o.word + "\" in " + m.name, {"rank", "neighbor", "score"}, {}};
  char buf[32];
  for (std::size_t i = 0; i < set.entries.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.6f", set.entries[i].score);
    t.rows.push_back({std::to_string(i + 1), set.entries[i].token, buf});
  }
  const auto md = render_markdown(t);
  run.write("neighbors.csv", render_csv(t));
  run.write("neighbors.md", md);
  run.manifest().parameters["model"] = m.name;
  run.manifest().parameters["word"] = o.word;
  run.manifest().parameters["k"] = std::to_string(k);
  run.finish();
  out << md;
  return kOk;
}

int cmd_clean(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.input_dir.empty() || !fs::is_directory(o.input_dir))
    throw ArgumentError("input directory not found: " + o.input_dir);
  if (!o.config.empty()) require_file(o.config, "config");

  Run run("clean", o);
  PipelineConfig config;
  if (!o.config.empty()) {
    run.manifest().add_input(o.config);
    config = load_config(o.config);
  }
  config.workers = o.jobs;

  Diagnostics diag;
  const auto docs = read_documents(o.input_dir, &diag);
  for (const auto& d : docs) run.manifest().add_input(fs::path(o.input_dir) / d.doc_id);
  const auto result = run_pipeline(docs, config);
  for (const auto& w : diag.warnings) err << w << "\n";
  for (const auto& w : result.warnings) err << w << "\n";

  for (const auto& p : write_corpus(result, run.dir(), config.corpus_name)) run.record(p);
  const auto md = render_markdown(corpus_stats_table(result.stats, config.corpus_name));
  run.write("clean.md", md);
  auto& p = run.manifest().parameters;
  p["languages"] = join(config.languages);
  p["confidence_threshold"] = number(config.confidence_threshold);
  p["cover_delimiter"] = config.cover_delimiter;
  p["convert_numbers"] = config.convert_numbers ? "true" : "false";
  p["corpus"] = config.corpus_name;
  p["documents"] = std::to_string(result.documents);
  p["unknown_lines"] = std::to_string(result.unknown_lines);
  for (const auto& [lang, rep] : result.dedup) p["dedup_dropped." + lang] = std::to_string(rep.dropped);
  run.finish();
  out << md;
  return kOk;
}

// <corpus>.<lang>.txt -> (corpus, lang)
std::pair<std::string, std::string> corpus_file_parts(const fs::path& path) {
  const auto stem = path.stem().string();
  const auto dot = stem.rfind('.');
  if (path.extension() != ".txt" || dot == std::string::npos || dot == 0 || dot + 1 == stem.size())
    throw ArgumentError("corpus file must be named <corpus>.<lang>.txt: " + path.string());
  return {stem.substr(0, dot), stem.substr(dot + 1)};
}

std::vector<std::string> read_lines(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(std::move(line));
  return lines;
}

int cmd_stats(const Options& o, std::ostream& out, std::ostream&) {
  if (o.corpus_files.empty()) throw ArgumentError("at least one corpus file is required");
  std::string corpus;
  std::vector<std::pair<fs::path, std::string>> files;
  for (const auto& f : o.corpus_files) {
    require_file(f, "corpus file");
    const auto [name, lang] = corpus_file_parts(f);
    if (corpus.empty()) corpus = name;
    files.emplace_back(f, lang);
  }

  Run run("stats", o);
  std::vector<CorpusStats> stats;
  for (const auto& [path, lang] : files) {
    run.manifest().add_input(path);
    const auto lines = read_lines(path);
    auto sources = path;
    sources.replace_extension(".sources");
    std::size_t n_files = 0;
    if (fs::exists(sources)) {
      run.manifest().add_input(sources);
      std::set<std::string> ids;
      for (auto& l : read_lines(sources))
        if (!l.empty()) ids.insert(std::move(l));
      n_files = ids.size();
    }
    stats.push_back(compute_stats(lang, lines, n_files));
  }

  std::ostringstream csv;
  write_stats_csv(csv, stats);
  const auto md = render_markdown(corpus_stats_table(stats, corpus));
  run.write("stats.csv", csv.str());
  run.write("stats.md", md);
  run.manifest().parameters["corpus"] = corpus;
  run.finish();
  out << md;
  return kOk;
}

void add_model_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--model", o.models, "Embedding model as [name=]path to a .vec file (repeatable)");
  cmd->add_option("--out-dir", o.out_dir, "Directory for tables and manifest")->capture_default_str();
  cmd->add_option("--jobs", o.jobs, "Worker threads (0 = all cores)");
}

void add_thesaurus_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--thesaurus", o.thesaurus, "Thesaurus file (.nt or .tsv)");
  cmd->add_option("--lang", o.lang, "Label language")->capture_default_str();
  cmd->add_flag("--no-lowercase", o.no_lowercase, "Match labels case-sensitively");
}

void add_cache_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--cache-dir", o.cache_dir, "Neighbor cache directory (default: $EMBEVAL_CACHE_DIR or <out-dir>/cache)");
  cmd->add_flag("--refresh", o.refresh, "Recompute and rewrite cached neighborhoods");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Intrinsic evaluation of word embeddings against a thesaurus", "embeval"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  auto* clean = app.add_subcommand("clean", "Clean a directory of .txt documents into per-language corpus files");
  clean->add_option("input", o.input_dir, "Input directory")->required();
  clean->add_option("--config", o.config, "Pipeline config (key=value)");
  clean->add_option("--out-dir", o.out_dir, "Output directory")->capture_default_str();
  clean->add_option("--jobs", o.jobs, "Worker threads (0 = all cores)");

  auto* stats = app.add_subcommand("stats", "Recount corpus statistics");
  stats->add_option("files", o.corpus_files, "Corpus files <corpus>.<lang>.txt")->required();
  stats->add_option("--out-dir", o.out_dir, "Output directory")->capture_default_str();

  auto* cov = app.add_subcommand("coverage", "Thesaurus keyword coverage of model vocabularies");
  add_model_options(cov, o);
  add_thesaurus_options(cov, o);
  cov->add_option("--s", o.s, "Similarity threshold in (0,1] (repeatable)")->delimiter(',');

  auto* div = app.add_subcommand("diversity", "Pairwise neighborhood diversity between models");
  add_model_options(div, o);
  add_thesaurus_options(div, o);
  add_cache_options(div, o);
  div->add_option("--k", o.k, "Neighborhood size (repeatable)")->delimiter(',');
  div->add_option("--denominator", o.denominator, "Diversity denominator")
      ->check(CLI::IsMember({"evaluated", "total"}))
      ->capture_default_str();

  auto* rel = app.add_subcommand("relations", "Relational coverage of thesaurus relations");
  add_model_options(rel, o);
  add_thesaurus_options(rel, o);
  add_cache_options(rel, o);
  rel->add_option("--k", o.k, "Neighborhood size (repeatable)")->delimiter(',');
  rel->add_flag("--single-word-only", o.single_word_only, "Drop pairs with a multi-word label");
  rel->add_option("--oov-policy", o.oov_policy, "Out-of-vocabulary descriptors")
      ->check(CLI::IsMember({"miss", "skip"}))
      ->capture_default_str();

  auto* nb = app.add_subcommand("neighbors", "Nearest neighbors of one word");
  add_model_options(nb, o);
  nb->add_option("--word", o.word, "Query word")->required();
  nb->add_option("--k", o.k, "Neighborhood size");

  std::vector<std::string> argv_storage{"embeval"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kArgumentError;
  }

  try {
    if (*clean) return cmd_clean(o, out, err);
    if (*stats) return cmd_stats(o, out, err);
    if (*cov) return cmd_coverage(o, out, err);
    if (*div) return cmd_diversity(o, out, err);
    if (*rel) return cmd_relations(o, out, err);
    if (*nb) return cmd_neighbors(o, out, err);
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << "\n";
    return kArgumentError;
  } catch (const UnknownTokenError& e) {
    err << "error: " << e.what() << "\n";
    return kArgumentError;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kParseError;
  } catch (const InvariantError& e) {
    err << "invariant violated: " << e.what() << "\n";
    return kInvariantError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}

}  // namespace embeval::cli
