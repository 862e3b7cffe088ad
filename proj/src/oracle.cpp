#include "refgeo/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace refgeo {

// Everything below recomputes the pipeline's outputs with plain loops over
// std::map/std::set keyed by article id; no interning, no shared kernels.

namespace {

struct OracleRef {
  std::string citing_id;
  std::string cited_id;
  int citing_year = 0;
  int cited_year = 0;
  std::vector<std::string> citing_countries;
  std::vector<std::string> cited_countries;
};

bool in_set(const std::vector<std::string>& sorted_set, const std::string& v) {
  return std::find(sorted_set.begin(), sorted_set.end(), v) != sorted_set.end();
}

// z such that the standard normal CDF at z equals q, by bisection on erfcl.
long double z_for(long double q) {
  long double lo = 0.0L, hi = 40.0L;
  for (int i = 0; i < 200; ++i) {
    long double mid = (lo + hi) / 2;
    long double cdf = 0.5L * erfcl(-mid / sqrtl(2.0L));
    if (cdf < q) lo = mid;
    else hi = mid;
  }
  return (lo + hi) / 2;
}

ConfidenceInterval wilson(long double successes, long double n, long double level) {
  long double p = successes / n;
  long double z = z_for(1.0L - (1.0L - level) / 2.0L);
  long double z2 = z * z;
  long double center = (p + z2 / (2 * n)) / (1 + z2 / n);
  long double half = (z / (1 + z2 / n)) * sqrtl(p * (1 - p) / n + z2 / (4 * n * n));
  ConfidenceInterval ci;
  ci.point = static_cast<double>(p);
  ci.level = static_cast<double>(level);
  ci.lower = static_cast<double>(center - half < 0 ? 0 : center - half);
  ci.upper = static_cast<double>(center + half > 1 ? 1 : center + half);
  return ci;
}

struct SimpleTally {
  std::map<std::string, double> fractional;
  std::map<std::string, long long> full;
  long long items = 0;
  long long full_total = 0;

  void add(const std::vector<std::string>& countries) {
    items++;
    double piece = 1.0 / static_cast<double>(countries.size());
    for (const auto& c : countries) {
      fractional[c] += piece;
      full[c] += 1;
      full_total++;
    }
  }
  double share(const std::string& c) const {
    auto it = fractional.find(c);
    if (it == fractional.end() || items == 0) return 0.0;
    return 100.0 * it->second / static_cast<double>(items);
  }
};

std::vector<ShareRow> tally_rows(const SimpleTally& t) {
  std::vector<ShareRow> rows;
  for (const auto& [country, frac] : t.fractional) {
    ShareRow r;
    r.country = country;
    r.fractional_count = frac;
    r.full_count = t.full.at(country);
    r.fractional_share_pct =
        t.items ? 100.0 * frac / static_cast<double>(t.items) : 0.0;
    rows.push_back(std::move(r));
  }
  std::sort(rows.begin(), rows.end(), [](const ShareRow& a, const ShareRow& b) {
    if (a.fractional_share_pct != b.fractional_share_pct)
      return a.fractional_share_pct > b.fractional_share_pct;
    return a.country < b.country;
  });
  return rows;
}

}  // namespace

IndicatorBundle oracle_indicators(const Corpus& corpus, const RunConfig& config) {
  IndicatorBundle out;

  std::map<std::string, const ArticleRecord*> by_id;
  for (const auto& a : corpus.articles) by_id.emplace(a.id, &a);

  // Inbound counts: distinct resolved targets per citing article in the window.
  const CitingWindow window = config.citing_window();
  std::map<std::string, long long> inbound;
  for (const auto& a : corpus.articles) {
    if (!window.contains(a.publication_year)) continue;
    std::set<std::string> targets;
    for (const auto& ref : a.references)
      if (ref.resolved() && by_id.count(ref.resolved_id))
        targets.insert(ref.resolved_id);
    for (const auto& t : targets) inbound[t]++;
  }
  auto count_of = [&inbound](const std::string& id) -> long long {
    auto it = inbound.find(id);
    return it == inbound.end() ? 0 : it->second;
  };

  // Cells and top-fraction selection.
  std::map<CellKey, std::vector<std::string>> cells;
  for (const auto& a : corpus.articles) {
    if (a.document_type != DocType::Article) continue;
    for (const auto& cat : a.subject_categories)
      cells[{cat, a.publication_year}].push_back(a.id);
  }
  std::set<std::string> elite_ids;
  for (auto& [key, ids] : cells) {
    std::sort(ids.begin(), ids.end(), [&](const std::string& x, const std::string& y) {
      long long cx = count_of(x), cy = count_of(y);
      if (cx != cy) return cx > cy;
      return x < y;
    });
    std::size_t k = static_cast<std::size_t>(
        std::ceil(config.elite_fraction * static_cast<double>(ids.size())));
    k = std::min(std::max<std::size_t>(k, 1), ids.size());
    long long kth = count_of(ids[k - 1]);
    std::size_t take = k;
    if (config.tie_policy == TiePolicy::IncludeTies)
      while (take < ids.size() && count_of(ids[take]) >= kth) ++take;
    for (std::size_t i = 0; i < take; ++i) elite_ids.insert(ids[i]);
    out.cell_thresholds[key] = static_cast<std::uint32_t>(kth);
  }
  out.elite_ids.assign(elite_ids.begin(), elite_ids.end());

  // Cleaned references from elite articles, reading the articles in id order.
  std::vector<OracleRef> refs;
  RemovalStats& rm = out.removal;
  for (const auto& id : out.elite_ids) {
    const ArticleRecord& citing = *by_id.at(id);
    rm.raw_entries += citing.references.size();
    std::set<std::string> seen;
    for (const auto& ref : citing.references) {
      if (!ref.resolved() || !by_id.count(ref.resolved_id)) {
        rm.unresolved++;
        continue;
      }
      if (seen.count(ref.resolved_id)) {
        rm.duplicates_collapsed++;
        continue;
      }
      seen.insert(ref.resolved_id);
      if (config.exclude_self_references && ref.resolved_id == id) {
        rm.self_references_removed++;
        continue;
      }
      rm.candidates++;
      const ArticleRecord& cited = *by_id.at(ref.resolved_id);
      if (cited.document_type != DocType::Article) {
        rm.removed_non_article++;
        continue;
      }
      if (cited.countries.empty()) {
        rm.removed_no_country++;
        continue;
      }
      if (cited.publication_year < 1980) {
        rm.removed_pre_cutoff++;
        continue;
      }
      refs.push_back({id, cited.id, citing.publication_year, cited.publication_year,
                      citing.countries, cited.countries});
    }
  }
  rm.surviving = refs.size();

  // Whole-period share tables.
  SimpleTally pub_tally;
  for (const auto& a : corpus.articles)
    if (a.document_type == DocType::Article && !a.countries.empty())
      pub_tally.add(a.countries);
  SimpleTally ref_tally;
  for (const auto& r : refs) ref_tally.add(r.cited_countries);
  out.article_shares = tally_rows(pub_tally);
  out.reference_shares = tally_rows(ref_tally);

  for (const auto& row : out.article_shares)
    if (row.fractional_share_pct > config.country_threshold_pct)
      out.threshold_countries.push_back(row.country);

  // Per-year series.
  std::map<int, SimpleTally> ref_years, pub_years;
  for (const auto& r : refs) ref_years[r.citing_year].add(r.cited_countries);
  for (const auto& a : corpus.articles)
    if (a.document_type == DocType::Article && !a.countries.empty())
      pub_years[a.publication_year].add(a.countries);

  auto to_series = [](const std::map<int, SimpleTally>& by_year) {
    ShareSeries s;
    for (const auto& [year, t] : by_year) {
      s.totals[year] = {t.full_total, static_cast<double>(t.items)};
      for (const auto& [country, frac] : t.fractional)
        s.by_country[country][year] = {
            t.full.at(country), frac,
            100.0 * frac / static_cast<double>(t.items)};
    }
    return s;
  };
  out.ref_series = to_series(ref_years);
  out.pub_series = to_series(pub_years);

  // Confidence intervals for the requested countries.
  for (const auto& country : config.ci_countries) {
    auto it = out.ref_series.by_country.find(country);
    if (it == out.ref_series.by_country.end()) continue;
    for (const auto& [year, cell] : it->second) {
      const auto& totals = out.ref_series.totals.at(year);
      long double s, n;
      if (config.ci_counting_mode == CountingMode::Full) {
        s = static_cast<long double>(cell.full_count);
        n = static_cast<long double>(totals.full_count);
      } else {
        s = static_cast<long double>(cell.fractional_count);
        n = static_cast<long double>(totals.fractional_count);
      }
      if (n < 1) continue;
      out.ci_series[country][year] = wilson(s, n, config.ci_level);
    }
  }

  // Lagged ratios for the threshold countries.
  for (const auto& country : out.threshold_countries) {
    auto it = out.ref_series.by_country.find(country);
    if (it == out.ref_series.by_country.end()) continue;
    for (const auto& [year, cell] : it->second) {
      auto pit = pub_years.find(year - config.lag_years);
      double pub = pit == pub_years.end() ? 0.0 : pit->second.share(country);
      if (pub > 0.0)
        out.ratio_series[country][year] = cell.share_pct / pub;
      else
        out.ratio_omitted++;
    }
  }

  // Summary rows: mean, sample sd, last minus first, three descending ranks.
  for (const auto& [country, series] : out.ratio_series) {
    RatioSummaryRow row;
    row.country = country;
    double sum = 0.0;
    for (const auto& [y, v] : series) sum += v;
    row.mean = sum / static_cast<double>(series.size());
    if (series.size() >= 2) {
      double ss = 0.0;
      for (const auto& [y, v] : series) ss += (v - row.mean) * (v - row.mean);
      row.sd = std::sqrt(ss / static_cast<double>(series.size() - 1));
      row.sd_defined = true;
    }
    row.delta = series.rbegin()->second - series.begin()->second;
    row.cls = row.mean >= 1.2   ? PerformerClass::High
              : row.mean >= 0.8 ? PerformerClass::Average
                                : PerformerClass::Low;
    out.ratio_summary.push_back(std::move(row));
  }
  {
    auto rank_by = [&](auto key, int RatioSummaryRow::* field) {
      std::vector<std::size_t> idx(out.ratio_summary.size());
      for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
      std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        auto [da, va] = key(out.ratio_summary[a]);
        auto [db, vb] = key(out.ratio_summary[b]);
        if (da != db) return da;
        if (da && va != vb) return va > vb;
        return out.ratio_summary[a].country < out.ratio_summary[b].country;
      });
      for (std::size_t r = 0; r < idx.size(); ++r)
        out.ratio_summary[idx[r]].*field = static_cast<int>(r + 1);
    };
    rank_by([](const RatioSummaryRow& r) { return std::pair(true, r.mean); },
            &RatioSummaryRow::rank_mean);
    rank_by([](const RatioSummaryRow& r) { return std::pair(r.sd_defined, r.sd); },
            &RatioSummaryRow::rank_sd);
    rank_by([](const RatioSummaryRow& r) { return std::pair(true, r.delta); },
            &RatioSummaryRow::rank_delta);
    std::sort(out.ratio_summary.begin(), out.ratio_summary.end(),
              [](const RatioSummaryRow& a, const RatioSummaryRow& b) {
                return a.rank_mean < b.rank_mean;
              });
  }

  // Domestic decomposition and its moving average.
  std::set<int> ref_years_present;
  for (const auto& r : refs) ref_years_present.insert(r.citing_year);
  for (const auto& country : out.threshold_countries) {
    DomesticSeries series;
    for (int year : ref_years_present) {
      long long qualifying = 0, domestic = 0;
      for (const auto& r : refs) {
        if (r.citing_year != year) continue;
        bool q = config.domestic_citing_mode == DomesticMode::PurelyDomesticElite
                     ? (r.citing_countries.size() == 1 &&
                        r.citing_countries[0] == country)
                     : in_set(r.citing_countries, country);
        if (!q) continue;
        qualifying++;
        if (in_set(r.cited_countries, country)) domestic++;
      }
      if (qualifying == 0) {
        series.omitted++;
        continue;
      }
      auto pit = pub_years.find(year - config.lag_years);
      double pub = pit == pub_years.end() ? 0.0 : pit->second.share(country);
      if (!(pub > 0.0)) {
        series.omitted++;
        continue;
      }
      DomesticPoint p;
      p.domestic_share = static_cast<double>(domestic) / static_cast<double>(qualifying);
      p.pub_share = pub / 100.0;
      p.ratio = p.domestic_share / p.pub_share;
      series.points[year] = p;
    }
    out.domestic[country] = series;

    if (!series.points.empty()) {
      std::vector<std::pair<int, double>> pts;
      for (const auto& [y, p] : series.points) pts.emplace_back(y, p.ratio);
      std::map<int, double> ma;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        double sum = 0.0;
        int cnt = 0;
        for (std::size_t j = i + 1 >= static_cast<std::size_t>(config.ma_window)
                                 ? i + 1 - config.ma_window
                                 : 0;
             j <= i; ++j) {
          sum += pts[j].second;
          cnt++;
        }
        ma[pts[i].first] = sum / cnt;
      }
      out.domestic_smoothed[country] = std::move(ma);
    }
  }

  return out;
}

}  // namespace refgeo
