#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace embeval {

enum class RelationType { broader, narrower, related, altLabel };

inline constexpr RelationType kAllRelations[] = {RelationType::broader, RelationType::narrower,
                                                 RelationType::related, RelationType::altLabel};

std::string_view to_string(RelationType type);
std::optional<RelationType> relation_from_string(std::string_view name);

// Short column names used in report tables: bro, nar, rel, alt.
std::string_view short_name(RelationType type);

struct Label {
  std::string text;
  std::string lang;  // lowercase two-letter primary subtag

  auto operator<=>(const Label&) const = default;
};

struct Concept {
  std::string id;
  std::vector<Label> pref_labels;
  std::vector<Label> alt_labels;
  bool is_descriptor = false;  // carries at least one prefLabel

  // First prefLabel in the language, if any.
  const Label* pref_label(std::string_view lang) const;

  bool operator==(const Concept&) const = default;
};

// Concept-to-concept edge. altLabel relations are implicit in Concept::alt_labels.
struct Relation {
  std::string source;
  RelationType type;
  std::string target;

  auto operator<=>(const Relation&) const = default;
};

struct ParseStats {
  std::size_t triples = 0;
  std::size_t skipped_predicates = 0;
  std::size_t untagged_literals = 0;
};

// Concepts and typed relations, immutable after parsing. broader and
// narrower edges are stored closed under inversion.
class Thesaurus {
 public:
  class Builder;

  const std::map<std::string, Concept, std::less<>>& concepts() const noexcept { return concepts_; }
  const Concept* find(std::string_view id) const;

  // Targets of `type` edges leaving `id` (broader/narrower/related only).
  std::vector<std::string> targets(std::string_view id, RelationType type) const;
  const std::set<Relation>& relations() const noexcept { return relations_; }

  const ParseStats& stats() const noexcept { return stats_; }

  // Logical equality (ignores parse statistics).
  bool same_content(const Thesaurus& other) const {
    return concepts_ == other.concepts_ && relations_ == other.relations_;
  }

 private:
  std::map<std::string, Concept, std::less<>> concepts_;
  std::set<Relation> relations_;
  ParseStats stats_;
};

class Thesaurus::Builder {
 public:
  void add_pref_label(const std::string& concept_id, std::string text, std::string lang);
  void add_alt_label(const std::string& concept_id, std::string text, std::string lang);
  void add_relation(const std::string& source, RelationType type, const std::string& target);
  ParseStats& stats() { return th_.stats_; }
  Thesaurus build() &&;

 private:
  Thesaurus th_;
};

// N-Triples subset with full SKOS predicate IRIs. Unrecognized predicates are
// skipped and counted. Throws ParseError (with line) on malformed lines and
// on input without any triple.
Thesaurus parse_ntriples_skos(std::istream& in);

// Header "subject\tpredicate\tobject\tlang"; predicate is one of prefLabel,
// altLabel, broader, narrower, related.
Thesaurus parse_tsv(std::istream& in);

// Chooses the parser by extension (.nt -> N-Triples, otherwise TSV).
Thesaurus load_thesaurus(const std::string& path);

struct Keyword {
  std::string label;                // verbatim
  std::vector<std::string> tokens;  // whitespace split

  bool operator==(const Keyword&) const = default;
};

// All pref and alt labels in `lang`, deduplicated, sorted by label.
std::vector<Keyword> keywords(const Thesaurus& th, std::string_view lang);

struct DescriptorPair {
  std::string descriptor_label;
  std::string concept_label;
  RelationType type;
  std::string lang;

  auto operator<=>(const DescriptorPair&) const = default;
};

struct PairReport {
  std::size_t missing_label = 0;  // endpoint without a label in the language
  std::size_t multi_word = 0;     // dropped by single_word_only
};

// (descriptor prefLabel, related label) pairs for one relation type, sorted
// and deduplicated. altLabel pairs a descriptor with each of its alt labels.
std::vector<DescriptorPair> descriptor_pairs(const Thesaurus& th, RelationType type,
                                             std::string_view lang, bool single_word_only,
                                             PairReport* report = nullptr);

// Multi-word = contains whitespace after trimming. Hyphenated labels are single words.
bool is_multi_word(std::string_view label);

}  // namespace embeval
