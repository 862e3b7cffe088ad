#include "refgeo/corpus.hpp"

#include <omp.h>

#include <algorithm>
#include <cctype>
#include <unordered_map>

#include "json.hpp"
#include "refgeo/textio.hpp"

namespace refgeo {

namespace {

using nlohmann::json;

const std::unordered_map<std::string, DocType>& doc_type_table() {
  static const std::unordered_map<std::string, DocType> table = {
      {"article", DocType::Article},
      {"journal article", DocType::Article},
      {"book", DocType::Book},
      {"book chapter", DocType::BookChapter},
      {"chapter", DocType::BookChapter},
      {"conference paper", DocType::ConferencePaper},
      {"proceedings paper", DocType::ConferencePaper},
      {"conference proceedings", DocType::ConferencePaper},
      {"note", DocType::Note},
      {"letter", DocType::Letter},
      {"dissertation", DocType::Dissertation},
      {"thesis", DocType::Dissertation},
      {"news", DocType::News},
      {"news item", DocType::News},
      {"news media", DocType::News},
      {"other", DocType::Other},
  };
  return table;
}

// Country names seen in address lines, keyed lowercase with punctuation
// stripped. Covers the usual synonyms for the major publishing countries;
// constituent UK countries fold into GB.
const std::unordered_map<std::string, std::string>& country_alias_table() {
  static const std::unordered_map<std::string, std::string> table = {
      {"usa", "US"},
      {"united states", "US"},
      {"united states of america", "US"},
      {"china", "CN"},
      {"peoples r china", "CN"},
      {"peoples republic of china", "CN"},
      {"pr china", "CN"},
      {"mainland china", "CN"},
      {"japan", "JP"},
      {"uk", "GB"},
      {"united kingdom", "GB"},
      {"great britain", "GB"},
      {"england", "GB"},
      {"scotland", "GB"},
      {"wales", "GB"},
      {"north ireland", "GB"},
      {"northern ireland", "GB"},
      {"germany", "DE"},
      {"federal republic of germany", "DE"},
      {"france", "FR"},
      {"canada", "CA"},
      {"italy", "IT"},
      {"india", "IN"},
      {"south korea", "KR"},
      {"republic of korea", "KR"},
      {"korea", "KR"},
      {"spain", "ES"},
      {"australia", "AU"},
      {"brazil", "BR"},
      {"russian federation", "RU"},
      {"russia", "RU"},
      {"taiwan", "TW"},
      {"netherlands", "NL"},
      {"the netherlands", "NL"},
      {"holland", "NL"},
      {"turkey", "TR"},
      {"poland", "PL"},
      {"sweden", "SE"},
      {"switzerland", "CH"},
      {"iran", "IR"},
  };
  return table;
}

std::string strip_punct_lower(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (c == '.' || c == '\'' || c == ',') continue;
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return normalize_spaces(out);
}

std::string stringify_scalar(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  return {};
}

// One reference object: either {"id": ...} or {"author","year","volume","page"}.
bool parse_ref_entry(const json& j, ReferenceEntry& out) {
  if (!j.is_object()) return false;
  bool any = false;
  if (auto it = j.find("id"); it != j.end() && it->is_string() &&
                              !it->get<std::string>().empty()) {
    out.resolved_id = it->get<std::string>();
    any = true;
  }
  auto author_it = j.find("author");
  auto year_it = j.find("year");
  if (author_it != j.end() && author_it->is_string() && year_it != j.end() &&
      year_it->is_number_integer()) {
    std::string author = trim(author_it->get<std::string>());
    if (!author.empty()) {
      auto key = std::make_unique<MatchKey>();
      key->author = author;
      key->year = year_it->get<int>();
      if (auto v = j.find("volume"); v != j.end()) key->volume = trim(stringify_scalar(*v));
      if (auto p = j.find("page"); p != j.end()) key->page = trim(stringify_scalar(*p));
      out.key = std::move(key);
      any = true;
    }
  }
  return any;
}

struct LineResult {
  bool present = false;  // false only where a block slot went unused
  ValidationResult v;
};

LineResult parse_line(std::string_view line, ValidityWindow window) {
  LineResult out;
  out.present = true;
  json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) {
    out.v.ok = false;
    out.v.reason = RejectReason::BadJson;
    return out;
  }
  RawRecord raw;
  if (auto it = j.find("id"); it != j.end() && it->is_string()) {
    std::string id = it->get<std::string>();
    if (!id.empty()) raw.id = std::move(id);
  }
  if (auto it = j.find("year"); it != j.end() && it->is_number_integer())
    raw.year = it->get<int>();
  if (auto it = j.find("type"); it != j.end() && it->is_string())
    raw.type = it->get<std::string>();
  if (auto it = j.find("categories"); it != j.end() && it->is_array()) {
    for (const auto& c : *it)
      if (c.is_string()) raw.categories.push_back(c.get<std::string>());
  }
  if (auto it = j.find("countries"); it != j.end() && it->is_array()) {
    for (const auto& c : *it)
      if (c.is_string()) raw.countries.push_back(c.get<std::string>());
  }
  if (auto it = j.find("refs"); it != j.end() && it->is_array()) {
    raw.references.reserve(it->size());
    for (const auto& r : *it) {
      ReferenceEntry entry;
      if (parse_ref_entry(r, entry)) {
        raw.references.push_back(std::move(entry));
      } else {
        raw.dropped_refs++;
      }
    }
  }
  if (auto it = j.find("author"); it != j.end() && it->is_string())
    raw.author = trim(it->get<std::string>());
  if (auto it = j.find("volume"); it != j.end())
    raw.volume = trim(stringify_scalar(*it));
  if (auto it = j.find("page"); it != j.end())
    raw.page = trim(stringify_scalar(*it));

  out.v = validate_record(raw, window);
  return out;
}

void append_json_string(std::string& out, const std::string& s) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

}  // namespace

const char* doc_type_name(DocType t) {
  switch (t) {
    case DocType::Article: return "article";
    case DocType::Book: return "book";
    case DocType::BookChapter: return "book-chapter";
    case DocType::ConferencePaper: return "conference-paper";
    case DocType::Note: return "note";
    case DocType::Letter: return "letter";
    case DocType::Dissertation: return "dissertation";
    case DocType::News: return "news";
    case DocType::Other: return "other";
  }
  return "other";
}

DocType parse_doc_type(const std::string& raw, bool* known) {
  std::string k = to_lower_ascii(trim(raw));
  for (char& c : k)
    if (c == '-' || c == '_') c = ' ';
  k = normalize_spaces(k);
  const auto& table = doc_type_table();
  auto it = table.find(k);
  if (known) *known = it != table.end();
  return it != table.end() ? it->second : DocType::Other;
}

std::string normalize_country(const std::string& raw) {
  std::string t = trim(raw);
  // Alias names win over the bare two-letter path ("UK" is a name for GB,
  // not an ISO code).
  const auto& table = country_alias_table();
  auto it = table.find(strip_punct_lower(t));
  if (it != table.end()) return it->second;
  if (t.size() == 2 && std::isalpha(static_cast<unsigned char>(t[0])) &&
      std::isalpha(static_cast<unsigned char>(t[1]))) {
    t[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(t[0])));
    t[1] = static_cast<char>(std::toupper(static_cast<unsigned char>(t[1])));
    return t;
  }
  return {};
}

std::string MatchKey::canonical() const {
  std::string out = to_lower_ascii(normalize_spaces(author));
  out += '\x1f';
  out += std::to_string(year);
  out += '\x1f';
  out += trim(volume);
  out += '\x1f';
  out += trim(page);
  return out;
}

MatchKey ArticleRecord::match_key() const {
  MatchKey k;
  k.author = author;
  k.year = publication_year;
  k.volume = volume;
  k.page = page;
  return k;
}

const char* reject_reason_name(RejectReason r) {
  switch (r) {
    case RejectReason::BadJson: return "bad_json";
    case RejectReason::MissingId: return "missing_id";
    case RejectReason::DuplicateId: return "duplicate_id";
    case RejectReason::MissingYear: return "missing_year";
    case RejectReason::YearOutOfWindow: return "year_out_of_window";
    case RejectReason::EmptyCategories: return "empty_categories";
  }
  return "bad_json";
}

ValidationResult validate_record(const RawRecord& raw, ValidityWindow window) {
  ValidationResult out;
  if (!raw.id) {
    out.reason = RejectReason::MissingId;
    return out;
  }
  if (!raw.year) {
    out.reason = RejectReason::MissingYear;
    return out;
  }
  if (*raw.year < window.min_year || *raw.year > window.max_year) {
    out.reason = RejectReason::YearOutOfWindow;
    return out;
  }
  if (raw.categories.empty()) {
    out.reason = RejectReason::EmptyCategories;
    return out;
  }

  ArticleRecord rec;
  rec.id = *raw.id;
  rec.publication_year = *raw.year;
  bool repaired = raw.dropped_refs > 0;

  bool type_known = true;
  rec.document_type =
      raw.type ? parse_doc_type(*raw.type, &type_known) : DocType::Other;
  if (!type_known || !raw.type) repaired = true;

  // categories: first-occurrence order, duplicates dropped
  for (const auto& c : raw.categories) {
    std::string t = trim(c);
    if (t.empty()) continue;
    if (std::find(rec.subject_categories.begin(), rec.subject_categories.end(),
                  t) == rec.subject_categories.end())
      rec.subject_categories.push_back(t);
  }
  if (rec.subject_categories.empty()) {
    out.reason = RejectReason::EmptyCategories;
    return out;
  }

  for (const auto& c : raw.countries) {
    std::string code = normalize_country(c);
    if (code.empty()) {
      repaired = true;  // unknown name dropped
      continue;
    }
    rec.countries.push_back(std::move(code));
  }
  std::sort(rec.countries.begin(), rec.countries.end());
  rec.countries.erase(std::unique(rec.countries.begin(), rec.countries.end()),
                      rec.countries.end());

  rec.references = raw.references;
  rec.author = raw.author;
  rec.volume = raw.volume;
  rec.page = raw.page;

  out.ok = true;
  out.record = std::move(rec);
  out.repaired = repaired;
  return out;
}

Corpus parse_corpus(const std::string& input, ValidityWindow window, int workers) {
  // Line boundaries (a trailing fragment without '\n' counts as a line).
  std::vector<std::pair<std::size_t, std::size_t>> lines;
  {
    std::size_t pos = 0;
    while (pos < input.size()) {
      std::size_t nl = input.find('\n', pos);
      std::size_t end = nl == std::string::npos ? input.size() : nl;
      std::size_t e = end;
      if (e > pos && input[e - 1] == '\r') --e;
      lines.emplace_back(pos, e);
      pos = end + 1;
      if (nl == std::string::npos) break;
    }
  }

  const std::size_t n_lines = lines.size();
  constexpr std::size_t kBlock = 4096;  // fixed shard size: result never depends on worker count
  const std::size_t n_blocks = (n_lines + kBlock - 1) / kBlock;
  std::vector<std::vector<LineResult>> blocks(n_blocks);

  const int nt = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(nt)
  for (std::size_t b = 0; b < n_blocks; ++b) {
    std::size_t lo = b * kBlock;
    std::size_t hi = std::min(lo + kBlock, n_lines);
    auto& out = blocks[b];
    out.resize(hi - lo);
    for (std::size_t i = lo; i < hi; ++i) {
      std::string_view line(input.data() + lines[i].first,
                            lines[i].second - lines[i].first);
      out[i - lo] = parse_line(line, window);
    }
  }

  Corpus corpus;
  corpus.ingest_stats.total_lines = n_lines;
  corpus.articles.reserve(n_lines);
  std::unordered_map<std::string, std::uint32_t> seen;
  seen.reserve(n_lines * 2);
  std::uint64_t line_no = 0;
  for (auto& block : blocks) {
    for (auto& lr : block) {
      ++line_no;
      if (!lr.v.ok) {
        corpus.ingest_stats.rejects.push_back({line_no, lr.v.reason});
        continue;
      }
      auto [it, inserted] = seen.emplace(
          lr.v.record.id, static_cast<std::uint32_t>(corpus.articles.size()));
      if (!inserted) {
        corpus.ingest_stats.rejects.push_back({line_no, RejectReason::DuplicateId});
        continue;
      }
      corpus.ingest_stats.accepted++;
      if (lr.v.repaired) corpus.ingest_stats.repaired++;
      corpus.articles.push_back(std::move(lr.v.record));
    }
  }
  return corpus;
}

std::unordered_map<std::string, std::uint32_t> Corpus::id_index() const {
  std::unordered_map<std::string, std::uint32_t> index;
  index.reserve(articles.size() * 2);
  for (std::uint32_t i = 0; i < articles.size(); ++i) index.emplace(articles[i].id, i);
  return index;
}

const ArticleRecord* Corpus::find(const std::string& id) const {
  for (const auto& a : articles)
    if (a.id == id) return &a;
  return nullptr;
}

void resolve_references(Corpus& corpus) {
  auto ids = corpus.id_index();

  std::unordered_map<std::string, std::vector<std::uint32_t>> by_key;
  for (std::uint32_t i = 0; i < corpus.articles.size(); ++i) {
    const auto& a = corpus.articles[i];
    if (a.has_match_key()) by_key[a.match_key().canonical()].push_back(i);
  }

  std::uint64_t resolved = 0, ambiguous = 0, unmatched = 0, dangling = 0;
  const std::int64_t n = static_cast<std::int64_t>(corpus.articles.size());
#pragma omp parallel for schedule(dynamic, 512) \
    reduction(+ : resolved, ambiguous, unmatched, dangling)
  for (std::int64_t i = 0; i < n; ++i) {
    for (auto& ref : corpus.articles[i].references) {
      if (!ref.resolved() && ref.key) {
        auto it = by_key.find(ref.key->canonical());
        if (it == by_key.end()) {
          unmatched++;
        } else if (it->second.size() > 1) {
          ambiguous++;
        } else {
          ref.resolved_id = corpus.articles[it->second[0]].id;
          resolved++;
        }
      }
      if (ref.resolved() && !ids.count(ref.resolved_id)) dangling++;
    }
  }

  corpus.ingest_stats.resolved_by_key = resolved;
  corpus.ingest_stats.ambiguous_keys = ambiguous;
  corpus.ingest_stats.unmatched_keys = unmatched;
  corpus.ingest_stats.dangling_ids = dangling;
}

void append_record_line(std::string& out, const ArticleRecord& a) {
  out += "{\"id\":";
  append_json_string(out, a.id);
  out += ",\"year\":";
  out += std::to_string(a.publication_year);
  out += ",\"type\":";
  append_json_string(out, doc_type_name(a.document_type));
  out += ",\"categories\":[";
  for (std::size_t i = 0; i < a.subject_categories.size(); ++i) {
    if (i) out += ',';
    append_json_string(out, a.subject_categories[i]);
  }
  out += "],\"countries\":[";
  for (std::size_t i = 0; i < a.countries.size(); ++i) {
    if (i) out += ',';
    append_json_string(out, a.countries[i]);
  }
  out += ']';
  if (!a.author.empty()) {
    out += ",\"author\":";
    append_json_string(out, a.author);
  }
  if (!a.volume.empty()) {
    out += ",\"volume\":";
    append_json_string(out, a.volume);
  }
  if (!a.page.empty()) {
    out += ",\"page\":";
    append_json_string(out, a.page);
  }
  out += ",\"refs\":[";
  for (std::size_t i = 0; i < a.references.size(); ++i) {
    if (i) out += ',';
    const auto& r = a.references[i];
    if (r.resolved()) {
      out += "{\"id\":";
      append_json_string(out, r.resolved_id);
      out += '}';
    } else {
      out += "{\"author\":";
      append_json_string(out, r.key->author);
      out += ",\"year\":";
      out += std::to_string(r.key->year);
      out += ",\"volume\":";
      append_json_string(out, r.key->volume);
      out += ",\"page\":";
      append_json_string(out, r.key->page);
      out += '}';
    }
  }
  out += "]}\n";
}

std::string serialize_corpus(const Corpus& corpus) {
  std::string out;
  out.reserve(corpus.articles.size() * 160);
  for (const auto& a : corpus.articles) append_record_line(out, a);
  return out;
}

bool same_articles(const Corpus& a, const Corpus& b) {
  if (a.articles.size() != b.articles.size()) return false;
  auto index = b.id_index();
  for (const auto& ra : a.articles) {
    auto it = index.find(ra.id);
    if (it == index.end()) return false;
    const auto& rb = b.articles[it->second];
    std::string la, lb;
    append_record_line(la, ra);
    append_record_line(lb, rb);
    if (la != lb) return false;
  }
  return true;
}

}  // namespace refgeo
