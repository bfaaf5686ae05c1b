#include <doctest.h>

#include <cstdlib>
#include <sstream>

#include "cli.hpp"
#include "fixtures.hpp"
#include "synthetic.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = embeval::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::vector<std::vector<std::string>> csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(fixtures::read(p));
  for (std::string line; std::getline(in, line);) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

struct Workspace {
  fs::path dir;
  oracle::Model a, b;
  std::string thesaurus = fixtures::path("thesaurus/figure1.nt").string();

  explicit Workspace(const std::string& name) : dir(fixtures::scratch(name)) {
    a = synthetic::model(1, 40, 6);
    b = synthetic::model(2, 40, 6);
    synthetic::write_vec(dir / "a.vec", a);
    synthetic::write_vec(dir / "b.vec", b);
  }
  std::string model(const std::string& n) const { return n + "=" + (dir / (n + ".vec")).string(); }
  std::string out(const std::string& n) const { return (dir / n).string(); }
};

}  // namespace

TEST_CASE("coverage on one model matches the oracle") {
  Workspace ws("cli_cov");
  const auto r = invoke({"coverage", "--model", ws.model("a"), "--thesaurus", ws.thesaurus, "--s", "1.0",
                          "--out-dir", ws.out("o")});
  REQUIRE(r.code == 0);
  const auto rows = csv(fs::path(ws.out("o")) / "coverage.csv");
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == std::vector<std::string>{"", "a"});
  CHECK(rows[1] == std::vector<std::string>{"Vocab size", std::to_string(ws.a.vocab.size())});
  CHECK(rows[2] == std::vector<std::string>{"s=1.0", pct(oracle::coverage(ws.a.vocab, synthetic::figure_keywords(), 1.0))});
  CHECK(fs::exists(fs::path(ws.out("o")) / "coverage.md"));
  CHECK(fs::exists(fs::path(ws.out("o")) / "coverage.manifest.json"));
}

TEST_CASE("coverage with three thresholds has one column per threshold") {
  Workspace ws("cli_cov3");
  const auto r = invoke({"coverage", "--model", ws.model("a"), "--model", ws.model("b"), "--thesaurus",
                          ws.thesaurus, "--s", "0.9", "--s", "0.95", "--s", "1.0", "--out-dir", ws.out("o")});
  REQUIRE(r.code == 0);
  const auto rows = csv(fs::path(ws.out("o")) / "coverage.csv");
  REQUIRE(rows.size() == 5);
  CHECK(rows[1][0] == "Vocab size");
  CHECK(rows[2][0] == "s=0.9");
  CHECK(rows[3][0] == "s=0.95");
  CHECK(rows[4][0] == "s=1.0");
  for (std::size_t j = 0; j < 3; ++j) {
    const double s = j == 0 ? 0.9 : j == 1 ? 0.95 : 1.0;
    CHECK(rows[2 + j][1] == pct(oracle::coverage(ws.a.vocab, synthetic::figure_keywords(), s)));
    CHECK(rows[2 + j][2] == pct(oracle::coverage(ws.b.vocab, synthetic::figure_keywords(), s)));
  }
}

TEST_CASE("argument errors exit 2 before writing anything") {
  Workspace ws("cli_args");
  const auto o = ws.out("o");
  CHECK(invoke({"coverage", "--model", ws.model("a"), "--thesaurus", ws.thesaurus, "--s", "1.5", "--out-dir", o}).code == 2);
  CHECK(invoke({"coverage", "--model", ws.model("a"), "--thesaurus", ws.thesaurus, "--s", "0", "--out-dir", o}).code == 2);
  CHECK(invoke({"diversity", "--model", ws.model("a"), "--thesaurus", ws.thesaurus, "--out-dir", o}).code == 2);
  CHECK(invoke({"diversity", "--model", ws.model("a"), "--model", "a=" + (ws.dir / "b.vec").string(),
                 "--thesaurus", ws.thesaurus, "--out-dir", o}).code == 2);
  CHECK(invoke({"relations", "--model", ws.model("a"), "--thesaurus", "missing.nt", "--out-dir", o}).code == 2);
  CHECK(invoke({"relations", "--model", ws.model("a"), "--thesaurus", ws.thesaurus, "--k", "0", "--out-dir", o}).code == 2);
  CHECK(invoke({"relations", "--model", ws.model("a"), "--thesaurus", ws.thesaurus, "--oov-policy", "x"}).code == 2);
  CHECK(invoke({"neighbors", "--model", ws.model("a"), "--word", "nichtda", "--out-dir", o}).code == 2);
  CHECK(invoke({"stats", (ws.dir / "a.vec").string(), "--out-dir", o}).code == 2);
  CHECK(invoke({"bogus"}).code == 2);
  CHECK(invoke({}).code == 2);
  CHECK_FALSE(fs::exists(fs::path(o) / "coverage.csv"));
  CHECK_FALSE(fs::exists(fs::path(o) / "diversity.csv"));
  CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("parse errors exit 3") {
  Workspace ws("cli_parse");
  std::ofstream(ws.dir / "bad.vec") << "2 3\nx 1 2 3\nx 1 2 3\n";
  std::ofstream(ws.dir / "bad.nt") << "<a> <b> broken\n";
  CHECK(invoke({"coverage", "--model", (ws.dir / "bad.vec").string(), "--thesaurus", ws.thesaurus, "--out-dir",
                 ws.out("o")}).code == 3);
  CHECK(invoke({"coverage", "--model", ws.model("a"), "--thesaurus", (ws.dir / "bad.nt").string(), "--out-dir",
                 ws.out("o")}).code == 3);
}

TEST_CASE("diversity: 2x2 matrix, zero diagonal, oracle values, byte-identical rerun from cache") {
  Workspace ws("cli_div");
  const std::vector<std::string> args{"diversity", "--model", ws.model("a"), "--model", ws.model("b"),
                                      "--thesaurus", ws.thesaurus, "--k", "10", "--out-dir", ws.out("o")};
  REQUIRE(invoke(args).code == 0);
  const auto dir = fs::path(ws.out("o"));
  const auto first_csv = fixtures::read(dir / "diversity.csv");
  const auto first_md = fixtures::read(dir / "diversity.md");
  CHECK(fs::exists(dir / "cache" / "a.k10.neighbors.tsv"));

  const auto rows = csv(dir / "diversity.csv");
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == std::vector<std::string>{"top-k", "Model", "a", "b"});
  const auto d = pct(oracle::diversity(ws.a, ws.b, synthetic::figure_keywords(), 10));
  CHECK(rows[1] == std::vector<std::string>{"10", "a", "0.00", d});
  CHECK(rows[2] == std::vector<std::string>{"", "b", d, "0.00"});
  CHECK(first_md.find("| 10 | a | - | " + d + " |") != std::string::npos);

  REQUIRE(invoke(args).code == 0);
  CHECK(fixtures::read(dir / "diversity.csv") == first_csv);
  CHECK(fixtures::read(dir / "diversity.md") == first_md);

  auto refresh = args;
  refresh.push_back("--refresh");
  REQUIRE(invoke(refresh).code == 0);
  CHECK(fixtures::read(dir / "diversity.csv") == first_csv);
}

TEST_CASE("diversity k list yields one block per k") {
  Workspace ws("cli_div3");
  REQUIRE(invoke({"diversity", "--model", ws.model("a"), "--model", ws.model("b"), "--thesaurus", ws.thesaurus,
                   "--k", "10,50,200", "--out-dir", ws.out("o")}).code == 0);
  const auto rows = csv(fs::path(ws.out("o")) / "diversity.csv");
  REQUIRE(rows.size() == 7);
  CHECK(rows[1][0] == "10");
  CHECK(rows[3][0] == "50");
  CHECK(rows[5][0] == "200");
  for (std::size_t i = 0; i < 3; ++i) {
    const std::size_t k = i == 0 ? 10 : i == 1 ? 50 : 200;
    CHECK(rows[1 + 2 * i][3] == pct(oracle::diversity(ws.a, ws.b, synthetic::figure_keywords(), k)));
  }
}

TEST_CASE("a changed model makes its cache stale until --refresh") {
  Workspace ws("cli_stale");
  const auto cache = ws.out("cache");
  const std::vector<std::string> args{"diversity", "--model", ws.model("a"), "--model", ws.model("b"),
                                      "--thesaurus", ws.thesaurus, "--k", "5", "--cache-dir", cache,
                                      "--out-dir", ws.out("o")};
  REQUIRE(invoke(args).code == 0);
  const auto c = synthetic::model(3, 40, 6);
  synthetic::write_vec(ws.dir / "a.vec", c);
  const auto stale = invoke(args);
  CHECK(stale.code == 2);
  CHECK(stale.err.find("--refresh") != std::string::npos);
  auto refresh = args;
  refresh.push_back("--refresh");
  REQUIRE(invoke(refresh).code == 0);
  const auto rows = csv(fs::path(ws.out("o")) / "diversity.csv");
  CHECK(rows[1][3] == pct(oracle::diversity(c, ws.b, synthetic::figure_keywords(), 5)));
}

TEST_CASE("cache directory from the environment") {
  Workspace ws("cli_env");
  ::setenv("EMBEVAL_CACHE_DIR", ws.out("envcache").c_str(), 1);
  const auto r = invoke({"relations", "--model", ws.model("a"), "--thesaurus", ws.thesaurus, "--k", "3",
                          "--out-dir", ws.out("o")});
  ::unsetenv("EMBEVAL_CACHE_DIR");
  REQUIRE(r.code == 0);
  CHECK(fs::exists(fs::path(ws.out("envcache")) / "a.k3.neighbors.tsv"));
}

TEST_CASE("relations: bro nar rel alt columns with oracle values") {
  Workspace ws("cli_rel");
  REQUIRE(invoke({"relations", "--model", ws.model("a"), "--model", ws.model("b"), "--thesaurus", ws.thesaurus,
                   "--k", "2,10", "--out-dir", ws.out("o")}).code == 0);
  const auto rows = csv(fs::path(ws.out("o")) / "relations.csv");
  REQUIRE(rows.size() == 5);
  CHECK(rows[0] == std::vector<std::string>{"top-k", "Model", "bro", "nar", "rel", "alt"});
  const oracle::Model* models[] = {&ws.a, &ws.b};
  for (std::size_t ki = 0; ki < 2; ++ki)
    for (std::size_t m = 0; m < 2; ++m) {
      const auto& row = rows[1 + 2 * ki + m];
      CHECK(row[1] == (m == 0 ? "a" : "b"));
      for (int t = 0; t < 4; ++t)
        CHECK(row[2 + t] == pct(oracle::relational(*models[m], synthetic::figure_pairs(t), ki == 0 ? 2 : 10)));
    }
}

TEST_CASE("relations: single-word filter empties bro and nar, flagged n=0") {
  Workspace ws("cli_rel1");
  REQUIRE(invoke({"relations", "--model", ws.model("a"), "--thesaurus", ws.thesaurus, "--k", "10",
                   "--single-word-only", "--out-dir", ws.out("o")}).code == 0);
  const auto rows = csv(fs::path(ws.out("o")) / "relations.csv");
  CHECK(rows[1][2] == "0.00");
  CHECK(rows[1][3] == "0.00");
  const auto detail = csv(fs::path(ws.out("o")) / "relations.detail.csv");
  REQUIRE(detail.size() == 5);
  CHECK(detail[1][3] == "0");
  CHECK(detail[1].back() == "n=0");
  CHECK(detail[3][3] == "1");
}

TEST_CASE("neighbors prints k rows in descending score") {
  Workspace ws("cli_nb");
  const auto r = invoke({"neighbors", "--model", ws.model("a"), "--word", ws.a.vocab[0], "--k", "3", "--out-dir",
                          ws.out("o")});
  REQUIRE(r.code == 0);
  const auto rows = csv(fs::path(ws.out("o")) / "neighbors.csv");
  REQUIRE(rows.size() == 4);
  const auto want = oracle::top_k(ws.a, 0, 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(rows[1 + i][0] == std::to_string(i + 1));
    CHECK(rows[1 + i][1] == want[i].token);
    if (i) CHECK(std::stod(rows[1 + i][2]) <= std::stod(rows[i][2]));
  }
  CHECK(r.out.find(want[0].token) != std::string::npos);
}

TEST_CASE("clean then stats") {
  Workspace ws("cli_clean");
  const auto out = fs::path(ws.out("corpus"));
  const auto r = invoke({"clean", fixtures::path("corpus").string(), "--config",
                          fixtures::path("pipeline.conf").string(), "--out-dir", out.string()});
  REQUIRE(r.code == 0);
  for (const char* f : {"fixture.de.txt", "fixture.en.txt", "fixture.de.sources", "fixture.stats.csv",
                        "clean.md", "clean.manifest.json"})
    CHECK(fs::exists(out / f));

  const auto s = invoke({"stats", (out / "fixture.de.txt").string(), (out / "fixture.en.txt").string(),
                          "--out-dir", ws.out("stats")});
  REQUIRE(s.code == 0);
  CHECK(fixtures::read(fs::path(ws.out("stats")) / "stats.csv") == fixtures::read(out / "fixture.stats.csv"));
  const auto rows = csv(fs::path(ws.out("stats")) / "stats.csv");
  CHECK(rows[1][0] == "de");
  CHECK(rows[1][1] == "30");
  CHECK(rows[2][1] == "35");
}

TEST_CASE("a corrupt cache is a parse error") {
  Workspace ws("cli_corrupt");
  const auto cache = fs::path(ws.out("cache"));
  fs::create_directories(cache);
  std::ofstream(cache / "a.k5.neighbors.tsv") << "garbage\n";
  CHECK(invoke({"relations", "--model", ws.model("a"), "--thesaurus", ws.thesaurus, "--k", "5", "--cache-dir",
                cache.string(), "--out-dir", ws.out("o")}).code == 3);
}
