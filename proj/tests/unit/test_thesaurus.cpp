#include <doctest.h>

#include <sstream>

#include "embeval/error.hpp"
#include "embeval/thesaurus.hpp"
#include "fixtures.hpp"

using namespace embeval;

namespace {

const std::string kBase = "http://lod.gesis.org/thesoz/concept/";
const std::string kSkos = "http://www.w3.org/2004/02/skos/core#";

Thesaurus nt(const std::string& text) {
  std::istringstream in(text);
  return parse_ntriples_skos(in);
}

std::size_t nt_error_line(const std::string& text) {
  try {
    nt(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

std::string triple(const std::string& s, const std::string& p, const std::string& o) {
  return "<" + kBase + s + "> <" + kSkos + p + "> " + o + " .\n";
}

using P = std::pair<std::string, std::string>;

std::vector<P> pairs_of(const Thesaurus& th, RelationType t, bool single = false) {
  std::vector<P> out;
  for (const auto& p : descriptor_pairs(th, t, "de", single)) out.emplace_back(p.descriptor_label, p.concept_label);
  return out;
}

}  // namespace

TEST_CASE("relation names") {
  for (auto t : kAllRelations) CHECK(relation_from_string(to_string(t)) == t);
  CHECK(short_name(RelationType::broader) == "bro");
  CHECK(short_name(RelationType::altLabel) == "alt");
  CHECK_FALSE(relation_from_string("exactMatch").has_value());
}

TEST_CASE("figure fixture parses identically from N-Triples and TSV") {
  const auto a = load_thesaurus(fixtures::path("thesaurus/figure1.nt").string());
  const auto b = load_thesaurus(fixtures::path("thesaurus/figure1.tsv").string());
  CHECK(a.same_content(b));
  CHECK(a.concepts().size() == 5);
  CHECK(a.stats().triples == 12);

  const auto* ineq = a.find(kBase + "ineq");
  REQUIRE(ineq);
  CHECK(ineq->is_descriptor);
  CHECK(ineq->pref_label("de")->text == "soziale Ungleichheit");
  CHECK(ineq->pref_label("en")->text == "social inequality");
  CHECK(ineq->pref_label("fr") == nullptr);
  REQUIRE(ineq->alt_labels.size() == 1);
  CHECK(ineq->alt_labels[0].text == "Ungleichheit");
}

TEST_CASE("broader and narrower are closed under inversion; related is not") {
  const auto th = load_thesaurus(fixtures::path("thesaurus/figure1.nt").string());
  CHECK(th.targets(kBase + "struct", RelationType::narrower) == std::vector<std::string>{kBase + "ineq"});
  CHECK(th.targets(kBase + "poverty", RelationType::broader) == std::vector<std::string>{kBase + "ineq"});
  CHECK(th.targets(kBase + "ineq", RelationType::narrower).size() == 2);
  CHECK(th.targets(kBase + "discrim", RelationType::related).empty());
}

TEST_CASE("keywords") {
  const auto th = load_thesaurus(fixtures::path("thesaurus/figure1.nt").string());
  std::vector<std::string> labels;
  for (const auto& k : keywords(th, "de")) labels.push_back(k.label);
  CHECK(labels == std::vector<std::string>{"Armut", "Bildungsungleichheit", "Diskriminierung", "Sozialstruktur",
                                           "Ungleichheit", "Verarmung", "soziale Ungleichheit"});
  const auto en = keywords(th, "en");
  REQUIRE(en.size() == 1);
  CHECK(en[0].tokens == std::vector<std::string>{"social", "inequality"});
  CHECK(keywords(th, "fr").empty());
}

TEST_CASE("descriptor pairs per relation") {
  const auto th = load_thesaurus(fixtures::path("thesaurus/figure1.tsv").string());
  CHECK(pairs_of(th, RelationType::broader) ==
        std::vector<P>{{"Armut", "soziale Ungleichheit"},
                       {"Bildungsungleichheit", "soziale Ungleichheit"},
                       {"soziale Ungleichheit", "Sozialstruktur"}});
  CHECK(pairs_of(th, RelationType::narrower) ==
        std::vector<P>{{"Sozialstruktur", "soziale Ungleichheit"},
                       {"soziale Ungleichheit", "Armut"},
                       {"soziale Ungleichheit", "Bildungsungleichheit"}});
  CHECK(pairs_of(th, RelationType::related) == std::vector<P>{{"Armut", "Diskriminierung"}});
  CHECK(pairs_of(th, RelationType::altLabel) ==
        std::vector<P>{{"Armut", "Verarmung"}, {"soziale Ungleichheit", "Ungleichheit"}});

  CHECK(pairs_of(th, RelationType::broader, true).empty());
  CHECK(pairs_of(th, RelationType::narrower, true).empty());
  CHECK(pairs_of(th, RelationType::related, true).size() == 1);
  CHECK(pairs_of(th, RelationType::altLabel, true) == std::vector<P>{{"Armut", "Verarmung"}});

  PairReport rep;
  descriptor_pairs(th, RelationType::broader, "en", false, &rep);
  CHECK(rep.missing_label == 3);
  PairReport multi;
  descriptor_pairs(th, RelationType::broader, "de", true, &multi);
  CHECK(multi.multi_word == 3);
}

TEST_CASE("is_multi_word") {
  CHECK(is_multi_word("soziale Ungleichheit"));
  CHECK_FALSE(is_multi_word("Armut"));
  CHECK_FALSE(is_multi_word("Arbeits-markt"));
  CHECK_FALSE(is_multi_word("  Armut "));
}

TEST_CASE("N-Triples literal handling") {
  const auto th = nt(triple("x", "prefLabel", R"("Straße \"alt\"\tneu"@DE-at)") +
                     triple("x", "altLabel", R"("ohne Sprache")") +
                     triple("x", "altLabel", R"("typed"^^<http://www.w3.org/2001/XMLSchema#string>)") +
                     "# comment\n\n" +
                     "<" + kBase + "x> <" + kSkos + "exactMatch> <" + kBase + "y> .\n");
  const auto* c = th.find(kBase + "x");
  REQUIRE(c);
  REQUIRE(c->pref_labels.size() == 1);
  CHECK(c->pref_labels[0].text == "Stra\xC3\x9F" "e \"alt\"\tneu");
  CHECK(c->pref_labels[0].lang == "de");
  CHECK(c->alt_labels.empty());
  CHECK(th.stats().untagged_literals == 2);
  CHECK(th.stats().skipped_predicates == 1);
}

TEST_CASE("N-Triples errors carry line numbers") {
  CHECK(nt_error_line(triple("x", "prefLabel", "\"a\"@de") + "<a> <b> \"unterminated .\n") == 2);
  CHECK(nt_error_line("<" + kBase + "x> <" + kSkos + "prefLabel> \"a\"@de\n") == 1);
  CHECK(nt_error_line("garbage\n") == 1);
  CHECK_THROWS_AS(nt(""), ParseError);
  CHECK_THROWS_AS(nt("# only a comment\n"), ParseError);
}

TEST_CASE("TSV errors") {
  auto tsv = [](const std::string& text) {
    std::istringstream in(text);
    return parse_tsv(in);
  };
  CHECK_THROWS_AS(tsv("s\tp\to\n"), ParseError);
  CHECK_THROWS_AS(tsv("subject\tpredicate\tobject\tlang\nx\tprefLabel\tA\n"), ParseError);
  CHECK_THROWS_AS(tsv("subject\tpredicate\tobject\tlang\nx\tclosely\ty\t\n"), ParseError);
  const auto th = tsv("subject\tpredicate\tobject\tlang\nx\tprefLabel\tA\tde\n");
  CHECK(th.concepts().size() == 1);
}

TEST_CASE("builder closure is idempotent with explicit inverse edges") {
  Thesaurus::Builder b;
  b.add_pref_label("a", "A", "de");
  b.add_pref_label("b", "B", "de");
  b.add_relation("a", RelationType::broader, "b");
  b.add_relation("b", RelationType::narrower, "a");
  const auto th = std::move(b).build();
  CHECK(th.relations().size() == 2);
}

TEST_CASE("TSV edge cases") {
  std::istringstream header_only("subject\tpredicate\tobject\tlang\n");
  CHECK(parse_tsv(header_only).concepts().empty());
  std::istringstream bad("subject\tpredicate\tobject\tlang\nx\tprefLabel\tA\tde\nx\tclosely\ty\t\n");
  try {
    parse_tsv(bad);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("a label shared by two concepts is one keyword") {
  Thesaurus::Builder b;
  b.add_pref_label("a", "Macht", "de");
  b.add_alt_label("a", "Herrschaft", "de");
  b.add_pref_label("b", "Herrschaft", "de");
  const auto th = std::move(b).build();
  const auto k = keywords(th, "de");
  REQUIRE(k.size() == 2);
  CHECK(k[0].label == "Herrschaft");
  CHECK(k[1].label == "Macht");
}
