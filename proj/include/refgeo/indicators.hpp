#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "refgeo/corpus.hpp"
#include "refgeo/tally.hpp"

namespace refgeo {

struct YearCell {
  long long full_count = 0;
  double fractional_count = 0.0;
  double share_pct = 0.0;
};

struct YearTotals {
  long long full_count = 0;
  double fractional_count = 0.0;
};

// Per-country, per-year fractional shares; years with no items are absent.
struct ShareSeries {
  std::map<std::string, std::map<int, YearCell>> by_country;
  std::map<int, YearTotals> totals;

  double share(const std::string& country, int year) const;  // 0 when absent
  bool has(const std::string& country, int year) const;
};

// Reference shares grouped by the citing article's publication year.
ShareSeries yearly_share_series(const std::vector<RefInstance>& refs,
                                const Corpus& corpus);

// Publication shares over all corpus records of document type article with
// country information, grouped by publication year.
ShareSeries publication_share_series(const Corpus& corpus);

struct ConfidenceInterval {
  double point = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double level = 0.95;
};

// Wilson score interval for a binomial proportion. successes may be
// fractional (fractional counting mode). Requires 0 <= successes <= n,
// n >= 1, level in (0,1); otherwise std::invalid_argument.
ConfidenceInterval proportion_ci(double successes, double n, double level);

struct RatioSeries {
  std::map<std::string, std::map<int, double>> by_country;
  std::uint64_t omitted = 0;  // (country, year) pairs lacking a usable denominator
};

// ratio(country, t) = ref share(t) / pub share(t - lag). Years where the
// publication share is zero or missing are omitted and counted. When
// `countries` is non-null only those countries are computed.
RatioSeries lagged_ratio_series(const ShareSeries& ref_shares,
                                const ShareSeries& pub_shares, int lag,
                                const std::vector<std::string>* countries = nullptr);

enum class PerformerClass : std::uint8_t { High, Average, Low };

const char* performer_class_name(PerformerClass c);

// high: mean >= 1.2; average: 0.8 <= mean < 1.2; low: mean < 0.8.
PerformerClass classify_performers(double mean);

struct RatioSummaryRow {
  std::string country;
  double mean = 0.0;
  bool sd_defined = false;  // false for single-observation series
  double sd = 0.0;          // sample standard deviation (n-1)
  double delta = 0.0;       // last-year ratio minus first-year ratio
  int rank_mean = 0;
  int rank_sd = 0;
  int rank_delta = 0;
  PerformerClass cls = PerformerClass::Low;
};

// Rows ordered by rank_mean. Ranks are assigned by descending value, ties by
// ascending country code; undefined sd ranks after all defined values.
std::vector<RatioSummaryRow> ratio_summary(const RatioSeries& series);

// Trailing mean over up to `window` most recent available points; same keys
// as the input. window >= 1 required.
std::map<int, double> moving_average(const std::map<int, double>& series,
                                     int window);

enum class DomesticMode : std::uint8_t { AllElite, PurelyDomesticElite };

struct DomesticPoint {
  double domestic_share = 0.0;   // proportion of the year's qualifying refs citing the country itself
  double pub_share = 0.0;        // country's world publication share at t - lag, proportion
  double ratio = 0.0;
};

struct DomesticSeries {
  std::map<int, DomesticPoint> points;
  std::uint64_t omitted = 0;  // years without qualifying refs or without a pub share
};

// Qualifying refs in year t: citing article's countries include `country`
// (PurelyDomesticElite: citing country set is exactly {country}). The
// numerator share is the full-counted fraction of those whose cited countries
// include `country`; the denominator is the country's fractional publication
// share of world articles in year t - lag.
DomesticSeries domestic_ratio(const std::string& country,
                              const std::vector<RefInstance>& refs,
                              const Corpus& corpus,
                              const ShareSeries& pub_shares, DomesticMode mode,
                              int lag);

}  // namespace refgeo
