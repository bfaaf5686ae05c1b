#include "embeval/thesaurus.hpp"

#include <algorithm>
#include <fstream>
#include <istream>

#include "embeval/error.hpp"
#include "embeval/unicode.hpp"

namespace embeval {

namespace {

constexpr std::string_view kSkos = "http://www.w3.org/2004/02/skos/core#";

}  // namespace

std::string_view to_string(RelationType type) {
  switch (type) {
    case RelationType::broader: return "broader";
    case RelationType::narrower: return "narrower";
    case RelationType::related: return "related";
    case RelationType::altLabel: return "altLabel";
  }
  return "?";
}

std::string_view short_name(RelationType type) {
  switch (type) {
    case RelationType::broader: return "bro";
    case RelationType::narrower: return "nar";
    case RelationType::related: return "rel";
    case RelationType::altLabel: return "alt";
  }
  return "?";
}

std::optional<RelationType> relation_from_string(std::string_view name) {
  for (auto t : kAllRelations)
    if (to_string(t) == name || short_name(t) == name) return t;
  return std::nullopt;
}

const Label* Concept::pref_label(std::string_view lang) const {
  for (const auto& l : pref_labels)
    if (l.lang == lang) return &l;
  return nullptr;
}

const Concept* Thesaurus::find(std::string_view id) const {
  const auto it = concepts_.find(id);
  return it == concepts_.end() ? nullptr : &it->second;
}

std::vector<std::string> Thesaurus::targets(std::string_view id, RelationType type) const {
  std::vector<std::string> out;
  const Relation lo{std::string(id), type, std::string()};
  for (auto it = relations_.lower_bound(lo); it != relations_.end() && it->source == id && it->type == type; ++it)
    out.push_back(it->target);
  return out;
}

namespace {

// Lowercased primary subtag; empty when the tag is not a two-letter code.
std::string normalize_lang(std::string_view tag) {
  std::string out;
  for (char c : tag) {
    if (c == '-' || c == '_') break;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (out.size() != 2 || !std::all_of(out.begin(), out.end(), [](char c) { return c >= 'a' && c <= 'z'; }))
    return {};
  return out;
}

void push_unique(std::vector<Label>& labels, Label label) {
  if (std::find(labels.begin(), labels.end(), label) == labels.end()) labels.push_back(std::move(label));
}

}  // namespace

void Thesaurus::Builder::add_pref_label(const std::string& concept_id, std::string text, std::string lang) {
  auto lang_norm = normalize_lang(lang);
  text = std::string(unicode::trim(text));
  if (lang_norm.empty() || text.empty()) {
    ++th_.stats_.untagged_literals;
    return;
  }
  auto& c = th_.concepts_[concept_id];
  c.id = concept_id;
  c.is_descriptor = true;
  push_unique(c.pref_labels, {std::move(text), std::move(lang_norm)});
}

void Thesaurus::Builder::add_alt_label(const std::string& concept_id, std::string text, std::string lang) {
  auto lang_norm = normalize_lang(lang);
  text = std::string(unicode::trim(text));
  if (lang_norm.empty() || text.empty()) {
    ++th_.stats_.untagged_literals;
    return;
  }
  auto& c = th_.concepts_[concept_id];
  c.id = concept_id;
  push_unique(c.alt_labels, {std::move(text), std::move(lang_norm)});
}

void Thesaurus::Builder::add_relation(const std::string& source, RelationType type, const std::string& target) {
  if (type == RelationType::altLabel) throw InvariantError("altLabel is a label, not a concept edge");
  th_.relations_.insert({source, type, target});
  if (type == RelationType::broader) th_.relations_.insert({target, RelationType::narrower, source});
  if (type == RelationType::narrower) th_.relations_.insert({target, RelationType::broader, source});
}

Thesaurus Thesaurus::Builder::build() && { return std::move(th_); }

namespace {

struct Term {
  enum Kind { iri, literal, blank } kind;
  std::string value;
  std::string lang;
};

class LineScanner {
 public:
  LineScanner(std::string_view line, std::size_t line_no) : s_(line), line_no_(line_no) {}

  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }
  bool at_end() {
    skip_ws();
    return pos_ >= s_.size();
  }
  bool peek(char c) {
    skip_ws();
    return pos_ < s_.size() && s_[pos_] == c;
  }

  Term term() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of line");
    const char c = s_[pos_];
    if (c == '<') {
      const auto end = s_.find('>', pos_);
      if (end == std::string_view::npos) fail("unterminated IRI");
      Term t{Term::iri, std::string(s_.substr(pos_ + 1, end - pos_ - 1)), {}};
      pos_ = end + 1;
      return t;
    }
    if (c == '_' && pos_ + 1 < s_.size() && s_[pos_ + 1] == ':') {
      const auto start = pos_;
      while (pos_ < s_.size() && s_[pos_] != ' ' && s_[pos_] != '\t') ++pos_;
      return {Term::blank, std::string(s_.substr(start, pos_ - start)), {}};
    }
    if (c == '"') return literal();
    fail("expected IRI, blank node or literal");
  }

  void expect_dot() {
    skip_ws();
    if (pos_ >= s_.size() || s_[pos_] != '.') fail("missing terminating '.'");
    ++pos_;
    if (!at_end() && s_[pos_] != '#') fail("trailing content after '.'");
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_no_); }

  Term literal() {
    ++pos_;  // opening quote
    std::string out;
    for (;;) {
      if (pos_ >= s_.size()) fail("unterminated literal");
      const char c = s_[pos_++];
      if (c == '"') break;
      if (c != '\\') {
        out.push_back(c);
        continue;
      }
      if (pos_ >= s_.size()) fail("dangling escape");
      const char e = s_[pos_++];
      switch (e) {
        case 't': out.push_back('\t'); break;
        case 'n': out.push_back('\n'); break;
        case 'r': out.push_back('\r'); break;
        case 'b': out.push_back('\b'); break;
        case 'f': out.push_back('\f'); break;
        case '"': out.push_back('"'); break;
        case '\'': out.push_back('\''); break;
        case '\\': out.push_back('\\'); break;
        case 'u':
        case 'U': {
          const std::size_t digits = e == 'u' ? 4 : 8;
          if (pos_ + digits > s_.size()) fail("short \\u escape");
          char32_t cp = 0;
          for (std::size_t i = 0; i < digits; ++i) {
            const char h = s_[pos_++];
            cp <<= 4;
            if (h >= '0' && h <= '9') cp |= static_cast<char32_t>(h - '0');
            else if (h >= 'a' && h <= 'f') cp |= static_cast<char32_t>(h - 'a' + 10);
            else if (h >= 'A' && h <= 'F') cp |= static_cast<char32_t>(h - 'A' + 10);
            else fail("bad hex digit in escape");
          }
          unicode::append_utf8(out, cp);
          break;
        }
        default: fail(std::string("unknown escape \\") + e);
      }
    }
    Term t{Term::literal, std::move(out), {}};
    if (pos_ < s_.size() && s_[pos_] == '@') {
      const auto start = ++pos_;
      while (pos_ < s_.size() && s_[pos_] != ' ' && s_[pos_] != '\t' && s_[pos_] != '.') ++pos_;
      t.lang = std::string(s_.substr(start, pos_ - start));
    } else if (pos_ + 1 < s_.size() && s_[pos_] == '^' && s_[pos_ + 1] == '^') {
      pos_ += 2;
      const auto end = s_.find('>', pos_);
      if (end == std::string_view::npos) fail("unterminated datatype IRI");
      pos_ = end + 1;
    }
    return t;
  }

  std::string_view s_;
  std::size_t line_no_;
  std::size_t pos_ = 0;
};

std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

}  // namespace

Thesaurus parse_ntriples_skos(std::istream& in) {
  Thesaurus::Builder b;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = unicode::trim(strip_cr(raw));
    if (line.empty() || line.front() == '#') continue;
    LineScanner sc(line, line_no);
    const Term subj = sc.term();
    const Term pred = sc.term();
    const Term obj = sc.term();
    sc.expect_dot();
    if (subj.kind == Term::literal || pred.kind != Term::iri) throw ParseError("invalid triple shape", line_no);
    ++b.stats().triples;

    if (!pred.value.starts_with(kSkos)) {
      ++b.stats().skipped_predicates;
      continue;
    }
    const auto local = std::string_view(pred.value).substr(kSkos.size());
    if (local == "prefLabel" || local == "altLabel") {
      if (obj.kind != Term::literal) throw ParseError("label object must be a literal", line_no);
      if (local == "prefLabel") b.add_pref_label(subj.value, obj.value, obj.lang);
      else b.add_alt_label(subj.value, obj.value, obj.lang);
    } else if (const auto rel = relation_from_string(local); rel && *rel != RelationType::altLabel &&
                                                          local == to_string(*rel)) {
      if (obj.kind == Term::literal) throw ParseError("relation object must be an IRI", line_no);
      b.add_relation(subj.value, *rel, obj.value);
    } else {
      ++b.stats().skipped_predicates;
    }
  }
  if (b.stats().triples == 0) throw ParseError("no triples in input");
  return std::move(b).build();
}

Thesaurus parse_tsv(std::istream& in) {
  Thesaurus::Builder b;
  std::string raw;
  std::size_t line_no = 0;
  if (!std::getline(in, raw)) throw ParseError("empty input; expected TSV header", 1);
  ++line_no;
  if (strip_cr(raw) != "subject\tpredicate\tobject\tlang")
    throw ParseError("expected header 'subject<TAB>predicate<TAB>object<TAB>lang'", 1);
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = strip_cr(raw);
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::size_t start = 0;
    for (;;) {
      const auto tab = line.find('\t', start);
      cols.emplace_back(line.substr(start, tab == std::string_view::npos ? std::string_view::npos : tab - start));
      if (tab == std::string_view::npos) break;
      start = tab + 1;
    }
    if (cols.size() != 4) throw ParseError("expected 4 columns, got " + std::to_string(cols.size()), line_no);
    ++b.stats().triples;
    const auto& pred = cols[1];
    if (pred == "prefLabel") {
      b.add_pref_label(cols[0], cols[2], cols[3]);
    } else if (pred == "altLabel") {
      b.add_alt_label(cols[0], cols[2], cols[3]);
    } else if (pred == "broader" || pred == "narrower" || pred == "related") {
      b.add_relation(cols[0], *relation_from_string(pred), cols[2]);
    } else {
      throw ParseError("unknown predicate '" + pred + "'", line_no);
    }
  }
  return std::move(b).build();
}

Thesaurus load_thesaurus(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  try {
    if (path.ends_with(".nt")) return parse_ntriples_skos(in);
    return parse_tsv(in);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

bool is_multi_word(std::string_view label) { return unicode::contains_whitespace(unicode::trim(label)); }

std::vector<Keyword> keywords(const Thesaurus& th, std::string_view lang) {
  std::set<std::string> labels;
  for (const auto& [id, c] : th.concepts()) {
    for (const auto& l : c.pref_labels)
      if (l.lang == lang) labels.insert(l.text);
    for (const auto& l : c.alt_labels)
      if (l.lang == lang) labels.insert(l.text);
  }
  std::vector<Keyword> out;
  out.reserve(labels.size());
  for (const auto& l : labels) out.push_back({l, unicode::split_whitespace(l)});
  return out;
}

std::vector<DescriptorPair> descriptor_pairs(const Thesaurus& th, RelationType type, std::string_view lang,
                                             bool single_word_only, PairReport* report) {
  PairReport local;
  PairReport& rep = report ? *report : local;
  rep = PairReport{};
  std::set<DescriptorPair> pairs;
  const auto add = [&](const std::string& descriptor, const std::string& other) {
    if (single_word_only && (is_multi_word(descriptor) || is_multi_word(other))) {
      ++rep.multi_word;
      return;
    }
    pairs.insert({descriptor, other, type, std::string(lang)});
  };

  for (const auto& [id, c] : th.concepts()) {
    if (!c.is_descriptor) continue;
    const Label* dl = c.pref_label(lang);
    if (type == RelationType::altLabel) {
      for (const auto& alt : c.alt_labels) {
        if (alt.lang != lang) continue;
        if (!dl) {
          ++rep.missing_label;
          continue;
        }
        add(dl->text, alt.text);
      }
      continue;
    }
    for (const auto& target_id : th.targets(id, type)) {
      const Concept* t = th.find(target_id);
      const Label* tl = t ? t->pref_label(lang) : nullptr;
      if (!dl || !tl) {
        ++rep.missing_label;
        continue;
      }
      add(dl->text, tl->text);
    }
  }
  return {pairs.begin(), pairs.end()};
}

}  // namespace embeval
