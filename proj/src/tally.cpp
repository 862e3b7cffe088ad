#include "refgeo/tally.hpp"

#include <omp.h>

#include <algorithm>
#include <array>
#include <map>
#include <stdexcept>
#include <unordered_map>

namespace refgeo {

ExtractResult extract_references(const EliteSet& elite, const Corpus& corpus,
                                 ExtractOptions options) {
  ExtractResult out;
  auto ids = corpus.id_index();

  std::vector<std::uint32_t> targets;
  for (std::uint32_t idx : elite.elite_indices) {
    const auto& citing = corpus.articles[idx];
    out.stats.raw_entries += citing.references.size();

    targets.clear();
    for (const auto& ref : citing.references) {
      if (!ref.resolved()) {
        out.stats.unresolved++;
        continue;
      }
      auto it = ids.find(ref.resolved_id);
      if (it == ids.end()) {
        out.stats.unresolved++;  // dangling id: cannot be typed or located
        continue;
      }
      targets.push_back(it->second);
    }
    std::sort(targets.begin(), targets.end());
    auto uniq_end = std::unique(targets.begin(), targets.end());
    out.stats.duplicates_collapsed += targets.end() - uniq_end;
    targets.erase(uniq_end, targets.end());

    for (std::uint32_t t : targets) {
      if (options.exclude_self_references && t == idx) {
        out.stats.self_references_removed++;
        continue;
      }
      out.stats.candidates++;
      const auto& cited = corpus.articles[t];
      if (cited.document_type != DocType::Article) {
        out.stats.removed_non_article++;
        continue;
      }
      if (cited.countries.empty()) {
        out.stats.removed_no_country++;
        continue;
      }
      if (cited.publication_year < options.min_cited_year) {
        out.stats.removed_pre_cutoff++;
        continue;
      }
      out.refs.push_back({idx, t, citing.publication_year, cited.publication_year});
    }
  }
  out.stats.surviving = out.refs.size();
  return out;
}

namespace {

// Integer bookkeeping: per (country, item-country-count) tallies. Merging is
// exact, so results are independent of item order and shard count; division
// by the denominator happens once at the end.
constexpr std::size_t kMaxDenomSlots = 64;

struct DenomCounts {
  std::array<long long, kMaxDenomSlots + 1> slots{};
  std::map<std::size_t, long long> overflow;

  void add(std::size_t denom) {
    if (denom <= kMaxDenomSlots) slots[denom]++;
    else overflow[denom]++;
  }
  void merge(const DenomCounts& o) {
    for (std::size_t d = 1; d <= kMaxDenomSlots; ++d) slots[d] += o.slots[d];
    for (const auto& [d, c] : o.overflow) overflow[d] += c;
  }
  double fractional() const {
    double sum = 0.0;
    for (std::size_t d = 1; d <= kMaxDenomSlots; ++d)
      if (slots[d]) sum += static_cast<double>(slots[d]) / static_cast<double>(d);
    for (const auto& [d, c] : overflow)
      sum += static_cast<double>(c) / static_cast<double>(d);
    return sum;
  }
  long long full() const {
    long long sum = 0;
    for (std::size_t d = 1; d <= kMaxDenomSlots; ++d) sum += slots[d];
    for (const auto& [d, c] : overflow) sum += c;
    return sum;
  }
};

}  // namespace

CountryTally fractional_tally(
    const std::vector<const std::vector<std::string>*>& items) {
  for (const auto* item : items)
    if (item->empty())
      throw std::invalid_argument("fractional_tally: item with empty country set");

  const std::int64_t n = static_cast<std::int64_t>(items.size());
  const int nt = omp_get_max_threads();
  std::vector<std::map<std::string, DenomCounts>> partials(nt);

#pragma omp parallel num_threads(nt)
  {
    auto& local = partials[omp_get_thread_num()];
#pragma omp for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
      const auto& countries = *items[i];
      const std::size_t denom = countries.size();
      for (const auto& c : countries) local[c].add(denom);
    }
  }

  std::map<std::string, DenomCounts> merged;
  for (const auto& partial : partials)
    for (const auto& [country, counts] : partial) merged[country].merge(counts);

  CountryTally tally;
  tally.items = items.size();
  for (const auto& [country, counts] : merged) {
    CountryTally::Entry e;
    e.fractional_count = counts.fractional();
    e.full_count = counts.full();
    tally.full_total += e.full_count;
    tally.by_country.emplace(country, e);
  }
  if (tally.items) {
    for (auto& [country, e] : tally.by_country) {
      e.fractional_share_pct =
          100.0 * e.fractional_count / static_cast<double>(tally.items);
      e.full_share_pct = 100.0 * static_cast<double>(e.full_count) /
                         static_cast<double>(tally.full_total);
    }
  }
  return tally;
}

CountryTally fractional_tally(const std::vector<std::vector<std::string>>& items) {
  std::vector<const std::vector<std::string>*> ptrs;
  ptrs.reserve(items.size());
  for (const auto& item : items) ptrs.push_back(&item);
  return fractional_tally(ptrs);
}

std::vector<ShareRow> share_table(const CountryTally& tally, ShareSort sort) {
  std::vector<ShareRow> rows;
  rows.reserve(tally.by_country.size());
  for (const auto& [country, e] : tally.by_country)
    rows.push_back({country, e.full_count, e.fractional_count, e.fractional_share_pct});
  if (sort == ShareSort::ByShareDesc) {
    std::sort(rows.begin(), rows.end(), [](const ShareRow& a, const ShareRow& b) {
      if (a.fractional_share_pct != b.fractional_share_pct)
        return a.fractional_share_pct > b.fractional_share_pct;
      return a.country < b.country;
    });
  }
  return rows;
}

std::vector<std::string> country_threshold_filter(const CountryTally& tally,
                                                  double min_share_percent) {
  std::vector<std::string> out;
  for (const auto& row : share_table(tally, ShareSort::ByShareDesc))
    if (row.fractional_share_pct > min_share_percent) out.push_back(row.country);
  return out;
}

}  // namespace refgeo
