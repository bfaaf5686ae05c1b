#include "embeval/corpus_pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <regex>
#include <set>
#include <sstream>

#include "embeval/digest.hpp"
#include "embeval/error.hpp"
#include "embeval/parallel.hpp"
#include "embeval/unicode.hpp"

namespace embeval {

namespace {

bool is_hyphen(char32_t cp) { return cp == U'-' || cp == 0x2010 || cp == 0x2011; }
constexpr char32_t kSoftHyphen = 0x00AD;

bool is_opener(char32_t cp) {
  switch (cp) {
    case U'(': case U'[': case U'"': case U'\'': case 0x201E: case 0x201C: case 0x2018: case 0x00AB:
      return true;
    default:
      return false;
  }
}

bool is_closer(char32_t cp) {
  switch (cp) {
    case U'.': case U',': case U';': case U':': case U'!': case U'?': case U')': case U']': case U'"':
    case U'\'': case 0x201D: case 0x2019: case 0x201C: case 0x00BB:
      return true;
    default:
      return false;
  }
}

bool is_token_punct(char32_t cp) {
  switch (cp) {
    case U'.': case U',': case U'(': case U')': case U'"': case U'\'': case U':': case U';': case U'?':
    case U'!': case 0x201E: case 0x201C: case 0x201D: case 0x2018: case 0x2019: case 0x00AB: case 0x00BB:
      return true;
    default:
      return false;
  }
}

}  // namespace

std::string strip_cover(std::string_view text, std::string_view delimiter_pattern, Diagnostics* diag) {
  const std::regex re{std::string(delimiter_pattern), std::regex::ECMAScript};
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    const bool last = end == std::string_view::npos;
    if (last) end = text.size();
    auto line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (std::regex_search(line.begin(), line.end(), re)) return std::string(last ? std::string_view{} : text.substr(end + 1));
    if (last) break;
    start = end + 1;
  }
  if (diag && !unicode::trim(text).empty()) diag->warn("cover delimiter '" + std::string(delimiter_pattern) + "' not found; text kept");
  return std::string(text);
}

std::string join_hyphenated_breaks(std::string_view text) {
  const auto t = unicode::decode(text);
  std::u32string out;
  out.reserve(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const char32_t c = t[i];
    if ((is_hyphen(c) || c == kSoftHyphen) && !out.empty() && unicode::is_letter(out.back())) {
      std::size_t j = i + 1;
      while (j < t.size() && (t[j] == U' ' || t[j] == U'\t')) ++j;
      if (j < t.size() && t[j] == U'\r') ++j;
      if (j < t.size() && t[j] == U'\n') {
        ++j;
        while (j < t.size() && (t[j] == U' ' || t[j] == U'\t')) ++j;
        if (j < t.size() && unicode::is_letter(t[j])) {
          i = j - 1;
          continue;
        }
      }
    }
    out.push_back(c);
  }
  return unicode::encode(out);
}

std::string dehyphenate(std::string_view text) {
  std::string out;
  const auto joined = join_hyphenated_breaks(text);
  out.reserve(joined.size());
  for (char32_t cp : unicode::decode(joined)) {
    if (cp == kSoftHyphen) continue;
    if (cp == U'\n' || cp == U'\r' || is_hyphen(cp)) cp = U' ';
    unicode::append_utf8(out, cp);
  }
  return out;
}

std::string split_camel_case(std::string_view text) {
  const auto t = unicode::decode(text);
  std::u32string out;
  out.reserve(t.size() + 8);
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i > 0 && unicode::is_lower(t[i - 1]) && unicode::is_upper(t[i])) out.push_back(U' ');
    out.push_back(t[i]);
  }
  return unicode::encode(out);
}

namespace {

constexpr const char* kDeOnes[] = {"",       "ein",    "zwei",     "drei",     "vier",     "fünf",    "sechs",
                                   "sieben", "acht",   "neun",     "zehn",     "elf",      "zwölf",   "dreizehn",
                                   "vierzehn", "fünfzehn", "sechzehn", "siebzehn", "achtzehn", "neunzehn"};
constexpr const char* kDeTens[] = {"", "", "zwanzig", "dreißig", "vierzig", "fünfzig", "sechzig", "siebzig", "achtzig",
                                   "neunzig"};

constexpr const char* kEnOnes[] = {"",        "one",     "two",       "three",    "four",     "five",    "six",
                                   "seven",   "eight",   "nine",      "ten",      "eleven",   "twelve",  "thirteen",
                                   "fourteen", "fifteen", "sixteen",  "seventeen", "eighteen", "nineteen"};
constexpr const char* kEnTens[] = {"", "", "twenty", "thirty", "forty", "fifty", "sixty", "seventy", "eighty", "ninety"};

// `final` selects "eins" over the combining form "ein".
std::string de_below_100(std::uint32_t n, bool final) {
  if (n == 0) return {};
  if (n == 1) return final ? "eins" : "ein";
  if (n < 20) return kDeOnes[n];
  const std::string tens = kDeTens[n / 10];
  if (n % 10 == 0) return tens;
  return std::string(kDeOnes[n % 10]) + "und" + tens;
}

std::string de_below_1000(std::uint32_t n, bool final) {
  std::string out;
  if (n >= 100) out += std::string(kDeOnes[n / 100]) + "hundert";
  return out + de_below_100(n % 100, final);
}

std::string en_below_100(std::uint32_t n) {
  if (n < 20) return kEnOnes[n];
  std::string out = kEnTens[n / 10];
  if (n % 10) out += std::string("-") + kEnOnes[n % 10];
  return out;
}

std::string en_below_1000(std::uint32_t n) {
  std::string out;
  if (n >= 100) {
    out = std::string(kEnOnes[n / 100]) + " hundred";
    if (n % 100) out += " ";
  }
  return out + (n % 100 ? en_below_100(n % 100) : "");
}

}  // namespace

std::string number_words(std::uint32_t n, std::string_view lang) {
  if (n >= 1'000'000) throw ArgumentError("number_words supports values below one million");
  if (lang == "de") {
    if (n == 0) return "null";
    std::string out;
    if (n >= 1000) out = de_below_1000(n / 1000, false) + "tausend";
    return out + de_below_1000(n % 1000, true);
  }
  if (lang == "en") {
    if (n == 0) return "zero";
    std::string out;
    if (n >= 1000) {
      out = en_below_1000(n / 1000) + " thousand";
      if (n % 1000) out += " ";
    }
    return out + (n % 1000 ? en_below_1000(n % 1000) : "");
  }
  throw ArgumentError("no numeral table for language '" + std::string(lang) + "'");
}

std::string numbers_to_words(std::string_view text, std::string_view lang) {
  if (lang != "de" && lang != "en") return std::string(text);
  const auto t = unicode::decode(text);
  std::u32string out;
  out.reserve(t.size());
  std::size_t i = 0;
  while (i < t.size()) {
    if (unicode::is_space(t[i])) {
      out.push_back(t[i++]);
      continue;
    }
    std::size_t j = i;
    while (j < t.size() && !unicode::is_space(t[j])) ++j;
    std::size_t b = i;
    while (b < j && is_opener(t[b])) ++b;
    std::size_t e = j;
    while (e > b && is_closer(t[e - 1])) --e;
    const std::size_t len = e - b;
    bool numeric = len > 0 && len <= 6 && (len == 1 || t[b] != U'0');
    for (std::size_t p = b; numeric && p < e; ++p) numeric = t[p] >= U'0' && t[p] <= U'9';
    if (numeric) {
      std::uint32_t v = 0;
      for (std::size_t p = b; p < e; ++p) v = v * 10 + static_cast<std::uint32_t>(t[p] - U'0');
      out.append(t, i, b - i);
      out += unicode::decode(number_words(v, lang));
      out.append(t, e, j - e);
    } else {
      out.append(t, i, j - i);
    }
    i = j;
  }
  return unicode::encode(out);
}

std::string normalize_ws_lower(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char32_t cp : unicode::decode(text)) {
    if (unicode::is_space(cp)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    unicode::append_utf8(out, unicode::to_lower(cp));
  }
  return out;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  for (const auto& piece : unicode::split_whitespace(text)) {
    const auto t = unicode::decode(piece);
    std::size_t b = 0;
    std::size_t e = t.size();
    while (b < e && is_token_punct(t[b])) out.push_back(unicode::encode(t.substr(b++, 1)));
    std::size_t tail = e;
    while (tail > b && is_token_punct(t[tail - 1])) --tail;
    if (tail > b) out.push_back(unicode::encode(t.substr(b, tail - b)));
    for (std::size_t p = tail; p < e; ++p) out.push_back(unicode::encode(t.substr(p, 1)));
  }
  return out;
}

bool SentenceDeduplicator::insert(std::string_view sentence) {
  auto& bucket = seen_[fnv1a64(sentence)];
  for (const auto& s : bucket) {
    if (s == sentence) {
      ++report_.dropped;
      return false;
    }
  }
  if (!bucket.empty()) ++report_.hash_collisions;
  bucket.emplace_back(sentence);
  ++report_.kept;
  return true;
}

std::vector<std::string> dedup_sentences(std::span<const std::string> lines, DedupReport* report) {
  SentenceDeduplicator dedup;
  std::vector<std::string> out;
  for (const auto& l : lines)
    if (dedup.insert(l)) out.push_back(l);
  if (report) *report = dedup.report();
  return out;
}

PipelineConfig parse_config(std::istream& in) {
  PipelineConfig cfg;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    auto line = unicode::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected key=value", line_no);
    const auto key = unicode::trim(line.substr(0, eq));
    const std::string value(unicode::trim(line.substr(eq + 1)));
    if (key == "languages") {
      cfg.languages.clear();
      std::stringstream ss(value);
      std::string lang;
      while (std::getline(ss, lang, ','))
        if (auto l = unicode::trim(lang); !l.empty()) cfg.languages.emplace_back(l);
      if (cfg.languages.empty()) throw ParseError("languages must not be empty", line_no);
    } else if (key == "confidence_threshold") {
      try {
        cfg.confidence_threshold = std::stod(value);
      } catch (const std::exception&) {
        throw ParseError("bad confidence_threshold '" + value + "'", line_no);
      }
      if (cfg.confidence_threshold < 0.0 || cfg.confidence_threshold > 1.0)
        throw ParseError("confidence_threshold must be in [0, 1]", line_no);
    } else if (key == "cover_delimiter") {
      cfg.cover_delimiter = value;
      try {
        std::regex probe(value);
      } catch (const std::regex_error& e) {
        throw ParseError("bad cover_delimiter regex: " + std::string(e.what()), line_no);
      }
    } else if (key == "convert_numbers") {
      if (value == "true" || value == "1" || value == "yes") cfg.convert_numbers = true;
      else if (value == "false" || value == "0" || value == "no") cfg.convert_numbers = false;
      else throw ParseError("convert_numbers must be true or false", line_no);
    } else if (key == "corpus") {
      if (value.empty()) throw ParseError("corpus name must not be empty", line_no);
      cfg.corpus_name = value;
    } else {
      throw ParseError("unknown key '" + std::string(key) + "'", line_no);
    }
  }
  return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config " + path.string());
  return parse_config(in);
}

CorpusDocument clean_document(const InputDocument& doc, const PipelineConfig& config,
                              const LanguageClassifier& classifier) {
  CorpusDocument out;
  out.doc_id = doc.doc_id;
  Diagnostics diag;
  std::string text = config.cover_delimiter.empty() ? doc.text : strip_cover(doc.text, config.cover_delimiter, &diag);
  for (auto& w : diag.warnings) out.warnings.push_back(doc.doc_id + ": " + w);

  // Lines stay the unit for language routing and deduplication, so only
  // hyphenated breaks are joined across lines.
  text = join_hyphenated_breaks(text);
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string line = split_camel_case(dehyphenate(std::string_view(text).substr(start, end - start)));
    start = end + 1;
    if (unicode::trim(line).empty()) continue;

    const auto guess = classifier.classify(line);
    if (std::find(config.languages.begin(), config.languages.end(), guess.lang) == config.languages.end()) {
      ++out.unknown_lines;
      continue;
    }
    // Numeral words may carry hyphens ("forty-two"); the corpus keeps none.
    if (config.convert_numbers) line = dehyphenate(numbers_to_words(line, guess.lang));
    const auto tokens = tokenize(normalize_ws_lower(line));
    if (tokens.empty()) continue;
    std::string joined;
    for (const auto& tok : tokens) {
      if (!joined.empty()) joined.push_back(' ');
      joined += tok;
    }
    out.line_langs.push_back(guess.lang);
    out.cleaned_lines.push_back(std::move(joined));
  }
  return out;
}

CorpusStats compute_stats(const std::string& lang, std::span<const std::string> lines, std::size_t files) {
  CorpusStats st;
  st.lang = lang;
  st.files = files;
  std::set<std::string_view> vocab;
  std::size_t bytes = 0;
  for (const auto& l : lines) {
    bytes += l.size() + 1;
    std::size_t i = 0;
    while (i < l.size()) {
      while (i < l.size() && l[i] == ' ') ++i;
      std::size_t j = i;
      while (j < l.size() && l[j] != ' ') ++j;
      if (j > i) {
        ++st.tokens;
        vocab.insert(std::string_view(l).substr(i, j - i));
      }
      i = j;
    }
  }
  st.vocabulary = vocab.size();
  st.megabytes = static_cast<double>(bytes) / (1024.0 * 1024.0);
  return st;
}

PipelineResult run_pipeline(std::span<const InputDocument> documents, const PipelineConfig& config,
                            const LanguageClassifier& classifier) {
  std::vector<CorpusDocument> cleaned(documents.size());
  parallel_for(documents.size(), config.workers,
               [&](std::size_t i) { cleaned[i] = clean_document(documents[i], config, classifier); });

  PipelineResult result;
  result.documents = documents.size();
  std::map<std::string, SentenceDeduplicator> dedup;
  for (const auto& lang : config.languages) {
    result.lines[lang];
    result.sources[lang];
  }
  for (auto& doc : cleaned) {
    result.unknown_lines += doc.unknown_lines;
    for (auto& w : doc.warnings) result.warnings.push_back(std::move(w));
    std::set<std::string> contributed;
    for (std::size_t i = 0; i < doc.cleaned_lines.size(); ++i) {
      const auto& lang = doc.line_langs[i];
      contributed.insert(lang);
      if (dedup[lang].insert(doc.cleaned_lines[i])) result.lines[lang].push_back(std::move(doc.cleaned_lines[i]));
    }
    for (const auto& lang : contributed) result.sources[lang].push_back(doc.doc_id);
  }
  for (const auto& lang : config.languages) {
    result.dedup[lang] = dedup[lang].report();
    const auto& lines = result.lines[lang];
    if (lines.empty()) result.warnings.push_back("no output lines for language '" + lang + "'");
    result.stats.push_back(compute_stats(lang, lines, result.sources[lang].size()));
  }
  return result;
}

PipelineResult run_pipeline(std::span<const InputDocument> documents, const PipelineConfig& config) {
  auto classifier = TrigramClassifier::with_builtin_profiles(config.confidence_threshold);
  classifier.restrict_to(config.languages);
  return run_pipeline(documents, config, classifier);
}

std::vector<InputDocument> read_documents(const std::filesystem::path& dir, Diagnostics* diag) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw ParseError("not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.path().extension() == ".txt") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  std::vector<InputDocument> docs;
  for (const auto& p : files) {
    std::ifstream in(p, std::ios::binary);
    if (!in) {
      if (diag) diag->warn("cannot read " + p.string() + "; skipped");
      continue;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    docs.push_back({p.filename().string(), ss.str()});
  }
  return docs;
}

void write_stats_csv(std::ostream& out, std::span<const CorpusStats> stats) {
  out << "lang,tokens,vocabulary,files,megabytes\n";
  char buf[64];
  for (const auto& s : stats) {
    std::snprintf(buf, sizeof buf, "%.6f", s.megabytes);
    out << s.lang << ',' << s.tokens << ',' << s.vocabulary << ',' << s.files << ',' << buf << '\n';
  }
}

std::vector<std::filesystem::path> write_corpus(const PipelineResult& result, const std::filesystem::path& out_dir,
                                                const std::string& corpus_name) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  std::vector<fs::path> written;
  const auto write_lines = [&](const fs::path& p, const std::vector<std::string>& lines) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    for (const auto& l : lines) out << l << '\n';
    written.push_back(p);
  };
  for (const auto& st : result.stats) {
    write_lines(out_dir / (corpus_name + "." + st.lang + ".txt"), result.lines.at(st.lang));
    write_lines(out_dir / (corpus_name + "." + st.lang + ".sources"), result.sources.at(st.lang));
  }
  const auto stats_path = out_dir / (corpus_name + ".stats.csv");
  std::ofstream out(stats_path, std::ios::binary | std::ios::trunc);
  write_stats_csv(out, result.stats);
  written.push_back(stats_path);
  return written;
}

}  // namespace embeval
