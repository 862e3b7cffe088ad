#pragma once

#include <map>
#include <string>
#include <vector>

#include "refgeo/citegraph.hpp"
#include "refgeo/indicators.hpp"
#include "refgeo/tally.hpp"

namespace refgeo {

// Everything one analysis run produces, in memory. The parallel pipeline and
// the serial reference implementation both emit this shape so runs can be
// compared field by field.
struct IndicatorBundle {
  std::vector<std::string> elite_ids;  // sorted
  std::map<CellKey, std::uint32_t> cell_thresholds;

  std::vector<ShareRow> article_shares;
  std::vector<ShareRow> reference_shares;
  std::vector<std::string> threshold_countries;
  RemovalStats removal;

  ShareSeries ref_series;
  ShareSeries pub_series;
  std::map<std::string, std::map<int, ConfidenceInterval>> ci_series;

  std::map<std::string, std::map<int, double>> ratio_series;
  std::uint64_t ratio_omitted = 0;
  std::vector<RatioSummaryRow> ratio_summary;

  std::map<std::string, DomesticSeries> domestic;
  std::map<std::string, std::map<int, double>> domestic_smoothed;
};

// Field-by-field comparison: |a-b| <= tol * max(1, |a|, |b|) for numerics,
// exact equality for ids, ranks, classes, and counts. Returns human-readable
// mismatch descriptions; empty means equivalent.
std::vector<std::string> compare_bundles(const IndicatorBundle& a,
                                         const IndicatorBundle& b, double tol);

}  // namespace refgeo
