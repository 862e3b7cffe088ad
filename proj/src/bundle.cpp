#include "refgeo/bundle.hpp"

#include <cmath>
#include <sstream>

namespace refgeo {

namespace {

struct Differ {
  std::vector<std::string> diffs;
  double tol;

  explicit Differ(double t) : tol(t) {}

  bool near(double a, double b) const {
    double scale = std::max({1.0, std::abs(a), std::abs(b)});
    return std::abs(a - b) <= tol * scale;
  }

  template <typename... Args>
  void report(Args&&... args) {
    if (diffs.size() >= 64) return;
    std::ostringstream os;
    (os << ... << args);
    diffs.push_back(os.str());
  }

  void num(const std::string& where, double a, double b) {
    if (!near(a, b)) report(where, ": ", a, " vs ", b);
  }
  void exact(const std::string& where, long long a, long long b) {
    if (a != b) report(where, ": ", a, " vs ", b);
  }
  void text(const std::string& where, const std::string& a, const std::string& b) {
    if (a != b) report(where, ": '", a, "' vs '", b, "'");
  }
};

void compare_rows(Differ& d, const char* label, const std::vector<ShareRow>& a,
                  const std::vector<ShareRow>& b) {
  if (a.size() != b.size()) {
    d.report(label, ": row count ", a.size(), " vs ", b.size());
    return;
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::string where = std::string(label) + "[" + std::to_string(i) + "]";
    d.text(where + ".country", a[i].country, b[i].country);
    d.exact(where + ".full", a[i].full_count, b[i].full_count);
    d.num(where + ".fractional", a[i].fractional_count, b[i].fractional_count);
    d.num(where + ".share", a[i].fractional_share_pct, b[i].fractional_share_pct);
  }
}

void compare_series(Differ& d, const char* label, const ShareSeries& a,
                    const ShareSeries& b) {
  if (a.totals.size() != b.totals.size())
    d.report(label, ".totals: year count ", a.totals.size(), " vs ", b.totals.size());
  for (const auto& [year, ta] : a.totals) {
    auto it = b.totals.find(year);
    if (it == b.totals.end()) {
      d.report(label, ".totals: year ", year, " missing on one side");
      continue;
    }
    d.exact(std::string(label) + ".totals.full@" + std::to_string(year),
            ta.full_count, it->second.full_count);
    d.num(std::string(label) + ".totals.fractional@" + std::to_string(year),
          ta.fractional_count, it->second.fractional_count);
  }
  if (a.by_country.size() != b.by_country.size())
    d.report(label, ": country count ", a.by_country.size(), " vs ",
             b.by_country.size());
  for (const auto& [country, ya] : a.by_country) {
    auto it = b.by_country.find(country);
    if (it == b.by_country.end()) {
      d.report(label, ": country ", country, " missing on one side");
      continue;
    }
    if (ya.size() != it->second.size()) {
      d.report(label, ".", country, ": year count ", ya.size(), " vs ",
               it->second.size());
      continue;
    }
    for (const auto& [year, ca] : ya) {
      auto yit = it->second.find(year);
      if (yit == it->second.end()) {
        d.report(label, ".", country, "@", year, " missing on one side");
        continue;
      }
      std::string where =
          std::string(label) + "." + country + "@" + std::to_string(year);
      d.exact(where + ".full", ca.full_count, yit->second.full_count);
      d.num(where + ".fractional", ca.fractional_count, yit->second.fractional_count);
      d.num(where + ".share", ca.share_pct, yit->second.share_pct);
    }
  }
}

void compare_year_maps(Differ& d, const std::string& label,
                       const std::map<int, double>& a,
                       const std::map<int, double>& b) {
  if (a.size() != b.size()) {
    d.report(label, ": size ", a.size(), " vs ", b.size());
    return;
  }
  for (const auto& [year, va] : a) {
    auto it = b.find(year);
    if (it == b.end()) d.report(label, "@", year, " missing on one side");
    else d.num(label + "@" + std::to_string(year), va, it->second);
  }
}

}  // namespace

std::vector<std::string> compare_bundles(const IndicatorBundle& a,
                                         const IndicatorBundle& b, double tol) {
  Differ d(tol);

  if (a.elite_ids != b.elite_ids)
    d.report("elite_ids differ (", a.elite_ids.size(), " vs ", b.elite_ids.size(), ")");
  if (a.cell_thresholds != b.cell_thresholds) d.report("cell_thresholds differ");
  if (a.threshold_countries != b.threshold_countries)
    d.report("threshold_countries differ");

  compare_rows(d, "article_shares", a.article_shares, b.article_shares);
  compare_rows(d, "reference_shares", a.reference_shares, b.reference_shares);

  d.exact("removal.raw_entries", a.removal.raw_entries, b.removal.raw_entries);
  d.exact("removal.duplicates", a.removal.duplicates_collapsed,
          b.removal.duplicates_collapsed);
  d.exact("removal.self_refs", a.removal.self_references_removed,
          b.removal.self_references_removed);
  d.exact("removal.unresolved", a.removal.unresolved, b.removal.unresolved);
  d.exact("removal.candidates", a.removal.candidates, b.removal.candidates);
  d.exact("removal.non_article", a.removal.removed_non_article,
          b.removal.removed_non_article);
  d.exact("removal.no_country", a.removal.removed_no_country,
          b.removal.removed_no_country);
  d.exact("removal.pre_cutoff", a.removal.removed_pre_cutoff,
          b.removal.removed_pre_cutoff);
  d.exact("removal.surviving", a.removal.surviving, b.removal.surviving);

  compare_series(d, "ref_series", a.ref_series, b.ref_series);
  compare_series(d, "pub_series", a.pub_series, b.pub_series);

  if (a.ci_series.size() != b.ci_series.size())
    d.report("ci_series: country count differs");
  for (const auto& [country, years] : a.ci_series) {
    auto it = b.ci_series.find(country);
    if (it == b.ci_series.end()) {
      d.report("ci_series: ", country, " missing on one side");
      continue;
    }
    for (const auto& [year, ci] : years) {
      auto yit = it->second.find(year);
      if (yit == it->second.end()) {
        d.report("ci_series.", country, "@", year, " missing on one side");
        continue;
      }
      std::string where = "ci." + country + "@" + std::to_string(year);
      d.num(where + ".point", ci.point, yit->second.point);
      d.num(where + ".lower", ci.lower, yit->second.lower);
      d.num(where + ".upper", ci.upper, yit->second.upper);
    }
  }

  if (a.ratio_series.size() != b.ratio_series.size())
    d.report("ratio_series: country count ", a.ratio_series.size(), " vs ",
             b.ratio_series.size());
  for (const auto& [country, series] : a.ratio_series) {
    auto it = b.ratio_series.find(country);
    if (it == b.ratio_series.end())
      d.report("ratio_series: ", country, " missing on one side");
    else
      compare_year_maps(d, "ratio." + country, series, it->second);
  }
  d.exact("ratio_omitted", a.ratio_omitted, b.ratio_omitted);

  if (a.ratio_summary.size() != b.ratio_summary.size()) {
    d.report("ratio_summary: row count ", a.ratio_summary.size(), " vs ",
             b.ratio_summary.size());
  } else {
    for (std::size_t i = 0; i < a.ratio_summary.size(); ++i) {
      const auto& ra = a.ratio_summary[i];
      const auto& rb = b.ratio_summary[i];
      std::string where = "summary[" + std::to_string(i) + "]";
      d.text(where + ".country", ra.country, rb.country);
      d.num(where + ".mean", ra.mean, rb.mean);
      if (ra.sd_defined != rb.sd_defined)
        d.report(where, ".sd_defined differs for ", ra.country);
      else if (ra.sd_defined)
        d.num(where + ".sd", ra.sd, rb.sd);
      d.num(where + ".delta", ra.delta, rb.delta);
      d.exact(where + ".rank_mean", ra.rank_mean, rb.rank_mean);
      d.exact(where + ".rank_sd", ra.rank_sd, rb.rank_sd);
      d.exact(where + ".rank_delta", ra.rank_delta, rb.rank_delta);
      d.text(where + ".class", performer_class_name(ra.cls),
             performer_class_name(rb.cls));
    }
  }

  if (a.domestic.size() != b.domestic.size())
    d.report("domestic: country count ", a.domestic.size(), " vs ",
             b.domestic.size());
  for (const auto& [country, sa] : a.domestic) {
    auto it = b.domestic.find(country);
    if (it == b.domestic.end()) {
      d.report("domestic: ", country, " missing on one side");
      continue;
    }
    const auto& sb = it->second;
    d.exact("domestic." + country + ".omitted", sa.omitted, sb.omitted);
    if (sa.points.size() != sb.points.size()) {
      d.report("domestic.", country, ": point count ", sa.points.size(), " vs ",
               sb.points.size());
      continue;
    }
    for (const auto& [year, pa] : sa.points) {
      auto yit = sb.points.find(year);
      if (yit == sb.points.end()) {
        d.report("domestic.", country, "@", year, " missing on one side");
        continue;
      }
      std::string where = "domestic." + country + "@" + std::to_string(year);
      d.num(where + ".share", pa.domestic_share, yit->second.domestic_share);
      d.num(where + ".pub", pa.pub_share, yit->second.pub_share);
      d.num(where + ".ratio", pa.ratio, yit->second.ratio);
    }
  }

  if (a.domestic_smoothed.size() != b.domestic_smoothed.size())
    d.report("domestic_smoothed: country count differs");
  for (const auto& [country, series] : a.domestic_smoothed) {
    auto it = b.domestic_smoothed.find(country);
    if (it == b.domestic_smoothed.end())
      d.report("domestic_smoothed: ", country, " missing on one side");
    else
      compare_year_maps(d, "smoothed." + country, series, it->second);
  }

  return std::move(d.diffs);
}

}  // namespace refgeo
