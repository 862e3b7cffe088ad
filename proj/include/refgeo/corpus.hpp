#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace refgeo {

enum class DocType : std::uint8_t {
  Article,
  Book,
  BookChapter,
  ConferencePaper,
  Note,
  Letter,
  Dissertation,
  News,
  Other,
};

const char* doc_type_name(DocType t);
// Lowercased/aliased lookup ("proceedings-paper" -> ConferencePaper).
// Unknown strings map to Other; `known` reports whether the tag was
// recognized.
DocType parse_doc_type(const std::string& raw, bool* known = nullptr);

// (surname, year, volume, first page) lookup key for references that arrive
// without a target id. Surname is whitespace-normalized and lowercased.
struct MatchKey {
  std::string author;
  int year = 0;
  std::string volume;
  std::string page;

  std::string canonical() const;
  bool operator==(const MatchKey&) const = default;
};

struct ReferenceEntry {
  std::string resolved_id;            // empty when unresolved
  std::unique_ptr<MatchKey> key;      // null when the entry came with an id only

  ReferenceEntry() = default;
  ReferenceEntry(const ReferenceEntry& o)
      : resolved_id(o.resolved_id),
        key(o.key ? std::make_unique<MatchKey>(*o.key) : nullptr) {}
  ReferenceEntry& operator=(const ReferenceEntry& o) {
    resolved_id = o.resolved_id;
    key = o.key ? std::make_unique<MatchKey>(*o.key) : nullptr;
    return *this;
  }
  ReferenceEntry(ReferenceEntry&&) = default;
  ReferenceEntry& operator=(ReferenceEntry&&) = default;

  bool resolved() const { return !resolved_id.empty(); }
};

struct ArticleRecord {
  std::string id;
  int publication_year = 0;
  DocType document_type = DocType::Other;
  std::vector<std::string> subject_categories;
  std::vector<std::string> countries;  // ISO alpha-2, uppercased, deduplicated, sorted
  std::vector<ReferenceEntry> references;
  // Optional bibliographic key fields of the article itself; give the record
  // a MatchKey other references can resolve against.
  std::string author;
  std::string volume;
  std::string page;

  bool has_match_key() const { return !author.empty(); }
  MatchKey match_key() const;
};

enum class RejectReason : std::uint8_t {
  BadJson,
  MissingId,
  DuplicateId,
  MissingYear,
  YearOutOfWindow,
  EmptyCategories,
};

const char* reject_reason_name(RejectReason r);

struct RejectedLine {
  std::uint64_t line_number = 0;  // 1-based
  RejectReason reason = RejectReason::BadJson;
};

struct IngestStats {
  std::uint64_t total_lines = 0;
  std::uint64_t accepted = 0;
  std::uint64_t repaired = 0;  // accepted after a lossy fix
  std::vector<RejectedLine> rejects;
  // resolve_references bookkeeping
  std::uint64_t dangling_ids = 0;     // resolved_id not present in the corpus
  std::uint64_t resolved_by_key = 0;
  std::uint64_t ambiguous_keys = 0;   // >= 2 candidate articles
  std::uint64_t unmatched_keys = 0;

  std::uint64_t rejected() const { return rejects.size(); }
};

struct Corpus {
  std::vector<ArticleRecord> articles;  // input order
  IngestStats ingest_stats;

  std::unordered_map<std::string, std::uint32_t> id_index() const;
  const ArticleRecord* find(const std::string& id) const;
};

struct ValidityWindow {
  int min_year = 1900;
  int max_year = 2100;
};

// One object per line. Malformed lines are rejected with their line number,
// never silently dropped: accepted + rejected == total input lines.
// `workers` controls the parse shard count; the result is identical for any
// value.
Corpus parse_corpus(const std::string& input, ValidityWindow window = {},
                    int workers = 0);

// A line parsed from JSON but not yet validated.
struct RawRecord {
  std::optional<std::string> id;
  std::optional<int> year;
  std::optional<std::string> type;
  std::vector<std::string> categories;
  std::vector<std::string> countries;
  std::vector<ReferenceEntry> references;
  std::string author, volume, page;
  std::uint32_t dropped_refs = 0;  // entries with neither id nor usable key
};

struct ValidationResult {
  bool ok = false;
  ArticleRecord record;                          // set when ok
  RejectReason reason = RejectReason::BadJson;   // set when !ok
  bool repaired = false;  // a lossy fix was applied (dropped token, unknown type)
};

// Normalizes one record: country codes uppercased/aliased/deduplicated,
// unknown document types mapped to "other", year checked against the window.
ValidationResult validate_record(const RawRecord& raw, ValidityWindow window = {});

// Country normalization used by record validation: 2-letter tokens are
// uppercased, known country names map through the alias table, unknown
// tokens are dropped. Returns empty when the token is unknown.
std::string normalize_country(const std::string& raw);

// Fills in resolved ids for references whose match key hits exactly one
// article. Ambiguous and unmatched keys stay unresolved and are counted.
// Idempotent. Also counts dangling resolved ids.
void resolve_references(Corpus& corpus);

// Canonical newline-delimited serialization (fixed field order, sorted
// country codes). parse(serialize(c)) reproduces c exactly.
std::string serialize_corpus(const Corpus& corpus);
void append_record_line(std::string& out, const ArticleRecord& a);

// Content equality on the id-indexed article set (ingest bookkeeping
// excluded); used by order-insensitivity tests.
bool same_articles(const Corpus& a, const Corpus& b);

}  // namespace refgeo
