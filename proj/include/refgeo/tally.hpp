#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "refgeo/citegraph.hpp"
#include "refgeo/corpus.hpp"

namespace refgeo {

// One cleaned (citing elite article -> cited article) link. Cited article is
// of document type article, published 1980 or later, with a non-empty
// country set; these hold by construction.
struct RefInstance {
  std::uint32_t citing_index = 0;
  std::uint32_t cited_index = 0;
  int citing_year = 0;
  int cited_year = 0;
};

struct RemovalStats {
  std::uint64_t raw_entries = 0;            // reference entries on elite articles
  std::uint64_t duplicates_collapsed = 0;   // repeat targets within one citing article
  std::uint64_t self_references_removed = 0;
  std::uint64_t unresolved = 0;             // no in-corpus target (incl. dangling ids)
  std::uint64_t candidates = 0;             // distinct resolved targets entering the filters
  std::uint64_t removed_non_article = 0;    // filter 1
  std::uint64_t removed_no_country = 0;     // filter 2
  std::uint64_t removed_pre_cutoff = 0;     // filter 3 (cited before the year cutoff)
  std::uint64_t surviving = 0;

  std::uint64_t removed_total() const {
    return removed_non_article + removed_no_country + removed_pre_cutoff;
  }
  double removal_pct() const {
    return candidates ? 100.0 * static_cast<double>(removed_total()) /
                            static_cast<double>(candidates)
                      : 0.0;
  }
  // Alternative reading that counts unresolved entries as removals too.
  double removal_pct_with_unresolved() const {
    std::uint64_t base = candidates + unresolved;
    return base ? 100.0 *
                      static_cast<double>(removed_total() + unresolved) /
                      static_cast<double>(base)
                : 0.0;
  }
};

struct ExtractOptions {
  bool exclude_self_references = false;
  int min_cited_year = 1980;
};

// Collects cleaned references from elite articles. Filters run in order:
// 1) cited document type must be article, 2) cited country set non-empty,
// 3) cited year >= cutoff; each removed reference is attributed to the first
// filter that fails. Duplicate targets within one citing article collapse to
// a single instance. Output order: elite articles in corpus order, references
// in list order.
struct ExtractResult {
  std::vector<RefInstance> refs;
  RemovalStats stats;
};

ExtractResult extract_references(const EliteSet& elite, const Corpus& corpus,
                                 ExtractOptions options = {});

struct CountryTally {
  struct Entry {
    double fractional_count = 0.0;
    long long full_count = 0;
    double fractional_share_pct = 0.0;
    double full_share_pct = 0.0;
  };
  std::map<std::string, Entry> by_country;
  std::uint64_t items = 0;         // each distributes exactly 1.0
  long long full_total = 0;
};

// An item with n distinct countries contributes 1/n to each and one full
// count per country. Exact integer bookkeeping per (country, n) keeps the
// result independent of item order and shard count; the fractional value is
// materialized once at the end. Item with an empty set ->
// std::invalid_argument.
CountryTally fractional_tally(const std::vector<const std::vector<std::string>*>& items);
CountryTally fractional_tally(const std::vector<std::vector<std::string>>& items);

enum class ShareSort : std::uint8_t { ByShareDesc, ByCountryAsc };

struct ShareRow {
  std::string country;
  long long full_count = 0;
  double fractional_count = 0.0;
  double fractional_share_pct = 0.0;
};

// Default order: descending fractional share, ties by country code.
std::vector<ShareRow> share_table(const CountryTally& tally,
                                  ShareSort sort = ShareSort::ByShareDesc);

// Countries whose fractional share strictly exceeds the threshold, in
// decreasing share order.
std::vector<std::string> country_threshold_filter(const CountryTally& tally,
                                                  double min_share_percent);

}  // namespace refgeo
