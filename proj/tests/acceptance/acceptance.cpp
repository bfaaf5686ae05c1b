// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "embeval/corpus_pipeline.hpp"
#include "embeval/knn_engine.hpp"
#include "embeval/language_id.hpp"
#include "embeval/metrics.hpp"
#include "embeval/report.hpp"
#include "embeval/text_similarity.hpp"
#include "embeval/unicode.hpp"
#include "fixtures.hpp"
#include "synthetic.hpp"

namespace fs = std::filesystem;
using namespace embeval;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Keyword kw(const std::string& label) { return Keyword{label, prepare_tokens(label, false)}; }

std::vector<Keyword> keywords_of(const std::vector<std::string>& labels) {
  std::vector<Keyword> out;
  for (const auto& l : labels) out.push_back(kw(l));
  return out;
}

std::vector<std::string> unique_words(std::mt19937_64& rng, std::size_t n, std::size_t min_len, std::size_t max_len,
                                      int letters) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  while (out.size() < n) {
    auto w = oracle::random_word(rng, min_len, max_len, letters);
    if (seen.insert(w).second) out.push_back(std::move(w));
  }
  return out;
}

// ---- criteria ---------------------------------------------------------------

Outcome edit_distance_oracle() {
  std::mt19937_64 rng(101);
  const auto t0 = Clock::now();
  std::size_t mismatches = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto a = oracle::random_unicode(rng, 24);
    const auto b = oracle::random_unicode(rng, 24);
    const auto ua = oracle::u32_to_utf8(a), ub = oracle::u32_to_utf8(b);
    if (edit_distance_sub2(a, b) != oracle::edit_distance_sub2(a, b)) ++mismatches;
    if (edit_distance_sub2(ua, ub) != oracle::edit_distance_sub2(a, b)) ++mismatches;
    if (ratio(ua, ub) != oracle::ratio(a, b)) ++mismatches;
  }
  const double t = seconds_since(t0);
  return {mismatches == 0 && t < 10.0, "10000 pairs, " + std::to_string(mismatches) + " mismatches, " + fmt("%.2f s", t)};
}

Outcome knn_oracle() {
  std::mt19937_64 rng(202);
  const auto t0 = Clock::now();
  std::size_t mismatches = 0, queries = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto om = oracle::random_model(rng, 200, 16);
    const NeighborIndex idx(fixtures::to_embedding(om, "m"));
    const std::size_t k = std::uniform_int_distribution<std::size_t>(1, om.vocab.size())(rng);
    for (std::size_t q = 0; q < om.vocab.size(); ++q) {
      ++queries;
      const auto got = idx.top_k(om.vocab[q], k);
      const auto want = oracle::top_k(om, q, k);
      bool same = got.entries.size() == want.size();
      for (std::size_t i = 0; same && i < want.size(); ++i)
        same = got.entries[i].token == want[i].token && got.entries[i].score == want[i].score;
      if (!same) ++mismatches;
    }
  }
  const double t = seconds_since(t0);
  return {mismatches == 0 && t < 60.0, "1000 models, " + std::to_string(queries) + " queries, " +
                                           std::to_string(mismatches) + " mismatches, " + fmt("%.2f s", t)};
}

Outcome coverage_fixture() {
  const std::vector<std::string> vocab{"sozial", "ungleichheit", "macht"};
  const VocabularyIndex idx(vocab);
  const auto kws = keywords_of({"soziale ungleichheit", "macht", "armut"});
  const auto exact = format_percent(coverage("m", idx, kws, 1.0).c);
  const auto fuzzy = format_percent(coverage("m", idx, kws, 0.9).c);
  return {exact == "33.33" && fuzzy == "66.67", "c(s=1.0)=" + exact + ", c(s=0.9)=" + fuzzy};
}

Outcome coverage_monotonicity() {
  std::mt19937_64 rng(404);
  std::size_t violations = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto vocab = unique_words(rng, 200, 3, 12, 8);
    std::vector<std::string> labels;
    for (int i = 0; i < 40; ++i) {
      auto l = oracle::random_word(rng, 3, 12, 8);
      if (i % 5 == 0) l += " " + oracle::random_word(rng, 3, 10, 8);
      labels.push_back(l);
    }
    const VocabularyIndex idx(vocab);
    const auto kws = keywords_of(labels);
    double last = 100.0;
    for (double s : {0.85, 0.9, 0.95, 1.0}) {
      const double c = coverage("m", idx, kws, s).c;
      if (c > last) ++violations;
      last = c;
    }
  }
  return {violations == 0, "100 fixtures, " + std::to_string(violations) + " violations"};
}

Outcome diversity_laws() {
  std::mt19937_64 rng(505);
  std::size_t self = 0, asym = 0, increase = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto oa = oracle::random_model(rng, 120, 8);
    auto ob = oracle::random_model(rng, 120, 8);
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < 60; ++i) labels.push_back("w" + std::to_string(i));
    const auto kws = keywords_of(labels);
    const NeighborIndex a(fixtures::to_embedding(oa, "a")), b(fixtures::to_embedding(ob, "b"));
    double last = 100.0;
    for (std::size_t k : {1, 5, 10, 50}) {
      if (format_percent(diversity(a, a, kws, k).d) != "0.00") ++self;
      const double ab = diversity(a, b, kws, k).d;
      if (ab != diversity(b, a, kws, k).d) ++asym;
      if (ab > last) ++increase;
      last = ab;
    }
  }
  return {self + asym + increase == 0, "d(A,A)!=0: " + std::to_string(self) + ", asymmetric: " +
                                           std::to_string(asym) + ", increases in k: " + std::to_string(increase)};
}

Outcome relational_monotonicity() {
  // Planted: "herrschaft" is the third neighbor of "macht".
  const auto basis = [](std::initializer_list<std::pair<std::size_t, float>> parts) {
    std::vector<float> v(6, 0.0f);
    for (auto [i, x] : parts) v[i] = x;
    return v;
  };
  const auto planted = fixtures::planted("R", {{"macht", basis({{0, 1}})},
                                               {"gewalt", basis({{0, 1}, {1, 0.1f}})},
                                               {"staat", basis({{0, 1}, {2, 0.2f}})},
                                               {"herrschaft", basis({{0, 1}, {3, 0.3f}})},
                                               {"armut", basis({{4, 1}})},
                                               {"haus", basis({{5, 1}})}});
  const NeighborIndex pidx(planted);
  const std::vector<DescriptorPair> pair{{"Macht", "Herrschaft", RelationType::related, "de"}};
  const bool at2 = relational_coverage(pidx, pair, 2)[2].n_found == 1;
  const bool at10 = relational_coverage(pidx, pair, 10)[2].n_found == 1;

  std::mt19937_64 rng(606);
  std::size_t decreases = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto om = oracle::random_model(rng, 120, 8);
    std::vector<DescriptorPair> pairs;
    std::uniform_int_distribution<std::size_t> pick(0, om.vocab.size() + 5);
    for (int i = 0; i < 40; ++i)
      pairs.push_back({"w" + std::to_string(pick(rng)), "w" + std::to_string(pick(rng)), kAllRelations[i % 4], "de"});
    const NeighborIndex idx(fixtures::to_embedding(om, "m"));
    std::vector<double> last(4, 0.0);
    for (std::size_t k : {1, 2, 5, 10, 20, 50, 100}) {
      const auto rs = relational_coverage(idx, pairs, k);
      for (std::size_t t = 0; t < 4; ++t) {
        if (rs[t].r < last[t]) ++decreases;
        last[t] = rs[t].r;
      }
    }
  }
  return {!at2 && at10 && decreases == 0, std::string("planted k=2 ") + (at2 ? "found" : "not found") +
                                              ", k=10 " + (at10 ? "found" : "not found") +
                                              "; decreases in k: " + std::to_string(decreases)};
}

Outcome metric_equivalence() {
  std::mt19937_64 rng(707);
  std::size_t checks = 0, mismatches = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto oa = oracle::random_model(rng, 50, 6);
    const auto ob = oracle::random_model(rng, 50, 6);
    const NeighborIndex a(fixtures::to_embedding(oa, "a")), b(fixtures::to_embedding(ob, "b"));

    std::vector<std::string> labels;
    std::uniform_int_distribution<std::size_t> pick(0, 55);
    for (int i = 0; i < 20; ++i) {
      std::string l = "W" + std::to_string(pick(rng));
      if (i % 6 == 0) l += (i % 12 == 0 ? " w" : "-w") + std::to_string(pick(rng));
      labels.push_back(l);
    }
    const auto kws = keywords_of(labels);
    for (double s : {0.6, 0.8, 0.9, 1.0}) {
      ++checks;
      if (coverage(fixtures::to_embedding(oa, "a"), kws, s).c != oracle::coverage(oa.vocab, labels, s)) ++mismatches;
    }
    synthetic::Pairs plain;
    std::vector<DescriptorPair> pairs;
    for (int i = 0; i < 15; ++i) {
      const std::string d = "w" + std::to_string(pick(rng)), c = "w" + std::to_string(pick(rng));
      const DescriptorPair p{d, c, RelationType::broader, "de"};
      if (std::find(pairs.begin(), pairs.end(), p) != pairs.end()) continue;
      pairs.push_back(p);
      plain.emplace_back(d, c);
    }
    for (std::size_t k : {1, 3, 10, 40}) {
      checks += 2;
      if (diversity(a, b, kws, k).d != oracle::diversity(oa, ob, labels, k)) ++mismatches;
      if (relational_coverage(a, pairs, k)[0].r != oracle::relational(oa, plain, k)) ++mismatches;
    }
  }
  return {mismatches == 0, std::to_string(checks) + " metric values, " + std::to_string(mismatches) + " mismatches"};
}

Outcome pipeline_idempotence() {
  auto config = load_config(fixtures::path("pipeline.conf"));
  const auto docs = read_documents(fixtures::path("corpus"));
  const auto first = run_pipeline(docs, config);
  const auto again = run_pipeline(docs, config);
  bool deterministic = first.lines == again.lines;

  bool idempotent = true, clean = true;
  config.cover_delimiter.clear();
  for (const auto& [lang, lines] : first.lines) {
    std::string text;
    for (const auto& l : lines) {
      text += l + "\n";
      clean = clean && l.find("  ") == std::string::npos && l.find('\t') == std::string::npos &&
              unicode::to_lower(l) == l;
    }
    const std::vector<InputDocument> one{{"rerun", text}};
    const auto second = run_pipeline(one, config);
    idempotent = idempotent && second.lines.count(lang) && second.lines.at(lang) == lines;
  }
  const auto de = first.dedup.count("de") ? first.dedup.at("de").dropped : 0;
  const auto en = first.dedup.count("en") ? first.dedup.at("en").dropped : 0;
  const bool dedup = de == 2 && en == 1;
  return {deterministic && idempotent && clean && dedup,
          std::string("idempotent: ") + (idempotent && deterministic ? "yes" : "no") + ", clean: " +
              (clean ? "yes" : "no") + ", duplicates dropped de=" + std::to_string(de) + " en=" + std::to_string(en) +
              " (planted 2/1)"};
}

Outcome language_routing() {
  const auto c = TrigramClassifier::with_builtin_profiles();
  std::istringstream in(fixtures::read(fixtures::path("langid_200.tsv")));
  std::size_t total = 0, correct = 0;
  for (std::string line; std::getline(in, line);) {
    const auto tab = line.find('\t');
    if (tab == std::string::npos) continue;
    ++total;
    if (c.classify(line.substr(tab + 1)).lang == line.substr(0, tab)) ++correct;
  }
  const double acc = total ? static_cast<double>(correct) / static_cast<double>(total) : 0.0;
  return {total == 200 && acc >= 0.95,
          std::to_string(correct) + "/" + std::to_string(total) + " lines (" + fmt("%.1f%%", 100.0 * acc) + ")"};
}

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string("\"") + EMBEVAL_CLI_PATH + "\" " + args + " >>\"" + log.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome end_to_end() {
  const auto t0 = Clock::now();
  const auto dir = fixtures::scratch("acceptance_e2e");
  const auto log = dir / "cli.log";
  const auto corpus = dir / "corpus";
  if (run_cli("clean \"" + fixtures::path("corpus").string() + "\" --config \"" +
                  fixtures::path("pipeline.conf").string() + "\" --out-dir \"" + corpus.string() + "\"",
              log) != 0)
    return {false, "clean failed, see " + log.string()};

  // Tiny models over the cleaned German vocabulary plus thesaurus words.
  std::set<std::string> words(synthetic::thesaurus_words().begin(), synthetic::thesaurus_words().end());
  {
    std::istringstream in(fixtures::read(corpus / "fixture.de.txt"));
    for (std::string tok; in >> tok;) words.insert(tok);
  }
  std::string models;
  for (int m = 0; m < 3; ++m) {
    std::mt19937_64 rng(900 + m);
    std::uniform_int_distribution<int> comp(-3, 3);
    oracle::Model om;
    om.dim = 8;
    for (const auto& w : words) {
      om.vocab.push_back(w);
      for (std::size_t d = 0; d < om.dim; ++d) om.rows.push_back(static_cast<float>(comp(rng)));
    }
    const auto path = dir / ("m" + std::to_string(m) + ".vec");
    synthetic::write_vec(path, om);
    models += " --model \"m" + std::to_string(m) + "=" + path.string() + "\"";
  }
  const auto th = " --thesaurus \"" + fixtures::path("thesaurus/figure1.nt").string() + "\"";

  const auto cache = " --cache-dir \"" + (dir / "cache").string() + "\"";
  const std::vector<std::pair<std::string, std::string>> commands{
      {"coverage", "coverage" + models + th + " --s 0.9 --s 0.95 --s 1.0"},
      {"diversity", "diversity" + models + th + " --k 10 --k 50 --k 200" + cache},
      {"relations", "relations" + models + th + " --k 10 --k 50 --k 200" + cache},
  };
  std::map<std::string, std::string> first;
  for (int pass = 0; pass < 2; ++pass) {
    const auto out = dir / ("out" + std::to_string(pass));
    for (const auto& [name, args] : commands)
      if (run_cli(args + " --out-dir \"" + out.string() + "\"", log) != 0)
        return {false, name + " failed, see " + log.string()};
    for (const auto& [name, args] : commands) {
      for (const char* ext : {".csv", ".md"}) {
        const auto file = out / (name + ext);
        if (!fs::exists(file)) return {false, "missing " + file.string()};
        const auto bytes = fixtures::read(file);
        if (pass == 0) first[name + ext] = bytes;
        else if (bytes != first[name + ext]) return {false, name + ext + " differs on rerun"};
      }
      if (!fs::exists(out / (name + ".manifest.json"))) return {false, "missing manifest for " + name};
    }
  }

  // Table shapes.
  const auto lines = [](const std::string& s) { return std::count(s.begin(), s.end(), '\n'); };
  const bool cov_shape = lines(first["coverage.csv"]) == 5 && first["coverage.csv"].find("Vocab size,") != std::string::npos;
  const bool div_shape = lines(first["diversity.csv"]) == 1 + 3 * 3 &&
                         first["diversity.csv"].rfind("top-k,Model,m0,m1,m2\n", 0) == 0;
  const bool rel_shape = lines(first["relations.csv"]) == 1 + 3 * 3 &&
                         first["relations.csv"].rfind("top-k,Model,bro,nar,rel,alt\n", 0) == 0;
  const double t = seconds_since(t0);
  const bool ok = cov_shape && div_shape && rel_shape && t < 60.0;
  return {ok, std::string("tables ") + (cov_shape && div_shape && rel_shape ? "well-shaped" : "MALFORMED") +
                  ", rerun byte-identical, " + fmt("%.2f s", t)};
}

Outcome pruning_soundness() {
  std::mt19937_64 rng(1111);
  std::size_t mismatches = 0, queries = 0;
  double pruned_s = 0, unpruned_s = 0;
  for (int v = 0; v < 100; ++v) {
    const auto vocab = unique_words(rng, 10000, 3, 14, 12);
    const VocabularyIndex idx(vocab);
    std::vector<std::string> qs;
    std::uniform_int_distribution<std::size_t> pick(0, vocab.size() - 1);
    std::uniform_int_distribution<int> letter(0, 11);
    for (int i = 0; i < 10; ++i) {
      auto w = vocab[pick(rng)];
      if (i % 3 == 1) w[std::uniform_int_distribution<std::size_t>(0, w.size() - 1)(rng)] = static_cast<char>('a' + letter(rng));
      if (i % 3 == 2) w = oracle::random_word(rng, 3, 14, 12);
      qs.push_back(w);
    }
    for (double s : {0.9, 0.95}) {
      for (const auto& q : qs) {
        ++queries;
        const auto t0 = Clock::now();
        const auto p = idx.best_match(q, s);
        const double tp = seconds_since(t0);
        const auto t1 = Clock::now();
        const auto u = idx.best_match_unpruned(q, s);
        const double tu = seconds_since(t1);
        if (p != u) ++mismatches;
        if (s == 0.95) {
          pruned_s += tp;
          unpruned_s += tu;
        }
      }
    }
  }
  const double speedup = pruned_s > 0 ? unpruned_s / pruned_s : 0.0;
  return {mismatches == 0 && speedup >= 5.0, std::to_string(queries) + " queries over 100x10k vocabularies, " +
                                                 std::to_string(mismatches) + " mismatches, speedup at s=0.95 " +
                                                 fmt("%.1fx", speedup)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"Edit-distance oracle", edit_distance_oracle},
      {"k-NN oracle", knn_oracle},
      {"Coverage fixture", coverage_fixture},
      {"Coverage monotonicity", coverage_monotonicity},
      {"Diversity laws", diversity_laws},
      {"Relational monotonicity and planted fixture", relational_monotonicity},
      {"Brute-force metric equivalence", metric_equivalence},
      {"Pipeline idempotence and cleanliness", pipeline_idempotence},
      {"Language routing", language_routing},
      {"End-to-end", end_to_end},
      {"Pruning soundness", pruning_soundness},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.ok) ++failed;
    std::cout << (o.ok ? "[PASS]" : "[FAIL]") << " [PRIMARY] " << (i + 1) << ". " << criteria[i].first << ": "
              << o.detail << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
