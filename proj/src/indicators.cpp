#include "refgeo/indicators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace refgeo {

namespace {

// Inverse standard normal CDF: Acklam's rational approximation polished with
// one Newton step against the erfc-based CDF. Accurate to ~1e-15 over (0,1).
double normal_quantile(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double x;
  if (p < plow) {
    double q = std::sqrt(-2 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  } else if (p <= 1 - plow) {
    double q = p - 0.5, r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
  } else {
    double q = std::sqrt(-2 * std::log(1 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  // Newton polish: Phi(x) = erfc(-x/sqrt(2))/2
  double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
  double u = e * std::sqrt(2.0 * M_PI) * std::exp(x * x / 2.0);
  return x - u / (1 + x * u / 2);
}

}  // namespace

double ShareSeries::share(const std::string& country, int year) const {
  auto c = by_country.find(country);
  if (c == by_country.end()) return 0.0;
  auto y = c->second.find(year);
  return y == c->second.end() ? 0.0 : y->second.share_pct;
}

bool ShareSeries::has(const std::string& country, int year) const {
  auto c = by_country.find(country);
  return c != by_country.end() && c->second.count(year);
}

namespace {

ShareSeries series_from_year_items(
    const std::map<int, std::vector<const std::vector<std::string>*>>& by_year) {
  ShareSeries out;
  for (const auto& [year, items] : by_year) {
    CountryTally tally = fractional_tally(items);
    out.totals[year] = {tally.full_total, static_cast<double>(tally.items)};
    for (const auto& [country, e] : tally.by_country)
      out.by_country[country][year] = {e.full_count, e.fractional_count,
                                       e.fractional_share_pct};
  }
  return out;
}

}  // namespace

ShareSeries yearly_share_series(const std::vector<RefInstance>& refs,
                                const Corpus& corpus) {
  std::map<int, std::vector<const std::vector<std::string>*>> by_year;
  for (const auto& r : refs)
    by_year[r.citing_year].push_back(&corpus.articles[r.cited_index].countries);
  return series_from_year_items(by_year);
}

ShareSeries publication_share_series(const Corpus& corpus) {
  std::map<int, std::vector<const std::vector<std::string>*>> by_year;
  for (const auto& a : corpus.articles) {
    if (a.document_type != DocType::Article || a.countries.empty()) continue;
    by_year[a.publication_year].push_back(&a.countries);
  }
  return series_from_year_items(by_year);
}

ConfidenceInterval proportion_ci(double successes, double n, double level) {
  if (!(n >= 1.0)) throw std::invalid_argument("proportion_ci: n must be >= 1");
  if (successes < 0.0 || successes > n)
    throw std::invalid_argument("proportion_ci: successes must be in [0, n]");
  if (!(level > 0.0 && level < 1.0))
    throw std::invalid_argument("proportion_ci: level must be in (0, 1)");

  const double p = successes / n;
  const double z = normal_quantile(1.0 - (1.0 - level) / 2.0);
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half =
      (z / denom) * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));

  ConfidenceInterval ci;
  ci.point = p;
  ci.level = level;
  ci.lower = std::max(0.0, center - half);
  ci.upper = std::min(1.0, center + half);
  return ci;
}

RatioSeries lagged_ratio_series(const ShareSeries& ref_shares,
                                const ShareSeries& pub_shares, int lag,
                                const std::vector<std::string>* countries) {
  if (lag < 0) throw std::invalid_argument("lagged_ratio_series: lag must be >= 0");
  RatioSeries out;
  for (const auto& [country, years] : ref_shares.by_country) {
    if (countries && std::find(countries->begin(), countries->end(), country) ==
                         countries->end())
      continue;
    for (const auto& [year, cell] : years) {
      double pub = pub_shares.share(country, year - lag);
      if (pub > 0.0) {
        out.by_country[country][year] = cell.share_pct / pub;
      } else {
        out.omitted++;
      }
    }
  }
  return out;
}

const char* performer_class_name(PerformerClass c) {
  switch (c) {
    case PerformerClass::High: return "high";
    case PerformerClass::Average: return "average";
    case PerformerClass::Low: return "low";
  }
  return "low";
}

PerformerClass classify_performers(double mean) {
  if (mean >= 1.2) return PerformerClass::High;
  if (mean >= 0.8) return PerformerClass::Average;
  return PerformerClass::Low;
}

std::vector<RatioSummaryRow> ratio_summary(const RatioSeries& series) {
  std::vector<RatioSummaryRow> rows;
  for (const auto& [country, by_year] : series.by_country) {
    if (by_year.empty()) continue;
    RatioSummaryRow row;
    row.country = country;
    const std::size_t n = by_year.size();
    double sum = 0.0;
    for (const auto& [year, v] : by_year) sum += v;
    row.mean = sum / static_cast<double>(n);
    if (n >= 2) {
      double ss = 0.0;
      for (const auto& [year, v] : by_year) ss += (v - row.mean) * (v - row.mean);
      row.sd = std::sqrt(ss / static_cast<double>(n - 1));
      row.sd_defined = true;
    }
    row.delta = by_year.rbegin()->second - by_year.begin()->second;
    row.cls = classify_performers(row.mean);
    rows.push_back(std::move(row));
  }

  auto assign_ranks = [&rows](auto value_of, auto rank_field) {
    std::vector<std::size_t> order(rows.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      auto [da, va] = value_of(rows[a]);
      auto [db, vb] = value_of(rows[b]);
      if (da != db) return da;          // defined values rank before undefined
      if (da && va != vb) return va > vb;
      return rows[a].country < rows[b].country;
    });
    for (std::size_t r = 0; r < order.size(); ++r)
      rows[order[r]].*rank_field = static_cast<int>(r + 1);
  };
  assign_ranks([](const RatioSummaryRow& r) { return std::pair(true, r.mean); },
               &RatioSummaryRow::rank_mean);
  assign_ranks(
      [](const RatioSummaryRow& r) { return std::pair(r.sd_defined, r.sd); },
      &RatioSummaryRow::rank_sd);
  assign_ranks([](const RatioSummaryRow& r) { return std::pair(true, r.delta); },
               &RatioSummaryRow::rank_delta);

  std::sort(rows.begin(), rows.end(),
            [](const RatioSummaryRow& a, const RatioSummaryRow& b) {
              return a.rank_mean < b.rank_mean;
            });
  return rows;
}

std::map<int, double> moving_average(const std::map<int, double>& series,
                                     int window) {
  if (window < 1) throw std::invalid_argument("moving_average: window must be >= 1");
  std::vector<std::pair<int, double>> points(series.begin(), series.end());
  std::map<int, double> out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    std::size_t lo = i + 1 >= static_cast<std::size_t>(window)
                         ? i + 1 - static_cast<std::size_t>(window)
                         : 0;
    double sum = 0.0;
    for (std::size_t j = lo; j <= i; ++j) sum += points[j].second;
    out[points[i].first] = sum / static_cast<double>(i - lo + 1);
  }
  return out;
}

DomesticSeries domestic_ratio(const std::string& country,
                              const std::vector<RefInstance>& refs,
                              const Corpus& corpus,
                              const ShareSeries& pub_shares, DomesticMode mode,
                              int lag) {
  auto has_country = [&country](const std::vector<std::string>& set) {
    return std::binary_search(set.begin(), set.end(), country);
  };

  std::map<int, std::pair<long long, long long>> per_year;  // qualifying, domestic
  std::map<int, bool> years_seen;
  for (const auto& r : refs) {
    years_seen[r.citing_year] = true;
    const auto& citing = corpus.articles[r.citing_index].countries;
    bool qualifies = mode == DomesticMode::PurelyDomesticElite
                         ? (citing.size() == 1 && citing[0] == country)
                         : has_country(citing);
    if (!qualifies) continue;
    auto& [q, d] = per_year[r.citing_year];
    q++;
    if (has_country(corpus.articles[r.cited_index].countries)) d++;
  }

  DomesticSeries out;
  for (const auto& [year, seen] : years_seen) {
    auto it = per_year.find(year);
    if (it == per_year.end() || it->second.first == 0) {
      out.omitted++;  // no qualifying refs that year
      continue;
    }
    double pub = pub_shares.share(country, year - lag) / 100.0;
    if (!(pub > 0.0)) {
      out.omitted++;
      continue;
    }
    DomesticPoint p;
    p.domestic_share = static_cast<double>(it->second.second) /
                       static_cast<double>(it->second.first);
    p.pub_share = pub;
    p.ratio = p.domestic_share / p.pub_share;
    out.points[year] = p;
  }
  return out;
}

}  // namespace refgeo
