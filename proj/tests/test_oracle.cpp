#include "refgeo/oracle.hpp"

#include <cstdlib>
#include <string>
#include <vector>

#include "doctest.h"
#include "refgeo/pipeline.hpp"
#include "refgeo/synth.hpp"
#include "refgeo/textio.hpp"

using namespace refgeo;

namespace {

std::string golden_dir() {
  const char* env = std::getenv("REFGEO_GOLDEN");
  REQUIRE_MESSAGE(env != nullptr, "REFGEO_GOLDEN must point at tests/golden");
  return env;
}

Corpus load_golden_corpus() {
  Corpus c = parse_corpus(read_file(golden_dir() + "/corpus.jsonl"));
  resolve_references(c);
  return c;
}

RunConfig golden_config() {
  return load_config_file(golden_dir() + "/config.json");
}

}  // namespace

TEST_CASE("empty corpus: pipeline and reference agree on an empty bundle") {
  Corpus empty;
  RunConfig config;
  auto a = compute_bundle(empty, config);
  auto b = oracle_indicators(empty, config);
  CHECK(compare_bundles(a, b, 1e-9).empty());
  CHECK(a.elite_ids.empty());
  CHECK(a.article_shares.empty());
}

// The ten-record fixture is small enough to check every number by hand; the
// values asserted here were worked out manually and double-checked against
// the serial reference.
TEST_CASE("hand-computed fixture: pipeline numbers") {
  Corpus corpus = load_golden_corpus();
  RunConfig config = golden_config();
  REQUIRE(corpus.articles.size() == 10);
  REQUIRE(corpus.ingest_stats.rejected() == 0);

  IndicatorBundle bundle = compute_bundle(corpus, config);

  SUBCASE("elite set: every article-typed record tops its cell") {
    CHECK(bundle.elite_ids ==
          std::vector<std::string>{"A08", "A10", "E06", "E07", "E09", "P01",
                                   "P02", "P03", "P04"});
    CHECK(bundle.cell_thresholds.at({"PHYS", 2001}) == 4);
    CHECK(bundle.cell_thresholds.at({"CHEM", 2002}) == 3);
    CHECK(bundle.cell_thresholds.at({"PHYS", 2004}) == 0);
    CHECK(bundle.cell_thresholds.at({"CHEM", 2005}) == 0);
  }

  SUBCASE("removal stats") {
    const auto& rm = bundle.removal;
    CHECK(rm.raw_entries == 12);
    CHECK(rm.unresolved == 1);
    CHECK(rm.duplicates_collapsed == 1);
    CHECK(rm.candidates == 10);
    CHECK(rm.removed_non_article == 1);
    CHECK(rm.removed_no_country == 1);
    CHECK(rm.removed_pre_cutoff == 1);
    CHECK(rm.surviving == 7);
    CHECK(rm.removal_pct() == doctest::Approx(30.0));
    CHECK(rm.removal_pct_with_unresolved() == doctest::Approx(100.0 * 4 / 11));
  }

  SUBCASE("share tables") {
    REQUIRE(bundle.article_shares.size() == 4);
    CHECK(bundle.article_shares[0].country == "US");
    CHECK(bundle.article_shares[0].fractional_share_pct == doctest::Approx(37.5));
    CHECK(bundle.article_shares[1].country == "CN");
    CHECK(bundle.article_shares[1].fractional_share_pct == doctest::Approx(31.25));
    CHECK(bundle.article_shares[2].country == "DE");
    CHECK(bundle.article_shares[2].fractional_share_pct == doctest::Approx(18.75));
    CHECK(bundle.article_shares[3].country == "GB");
    CHECK(bundle.article_shares[3].fractional_share_pct == doctest::Approx(12.5));

    REQUIRE(bundle.reference_shares.size() == 2);
    CHECK(bundle.reference_shares[0].country == "US");
    CHECK(bundle.reference_shares[0].full_count == 7);
    CHECK(bundle.reference_shares[0].fractional_count == doctest::Approx(5.5));
    CHECK(bundle.reference_shares[0].fractional_share_pct ==
          doctest::Approx(100.0 * 5.5 / 7).epsilon(1e-12));
    CHECK(bundle.reference_shares[1].country == "CN");
    CHECK(bundle.reference_shares[1].fractional_count == doctest::Approx(1.5));
  }

  SUBCASE("reference share series by citing year") {
    CHECK(bundle.ref_series.share("US", 2004) == doctest::Approx(87.5));
    CHECK(bundle.ref_series.share("CN", 2004) == doctest::Approx(12.5));
    CHECK(bundle.ref_series.share("US", 2005) ==
          doctest::Approx(200.0 / 3).epsilon(1e-12));
    CHECK(bundle.ref_series.share("CN", 2005) ==
          doctest::Approx(100.0 / 3).epsilon(1e-12));
    CHECK(bundle.ref_series.totals.at(2004).full_count == 5);
    CHECK(bundle.ref_series.totals.at(2005).full_count == 5);
  }

  SUBCASE("lagged ratios and summary") {
    CHECK(bundle.ratio_series.at("US").at(2004) == doctest::Approx(0.875));
    CHECK(bundle.ratio_series.at("US").at(2005) ==
          doctest::Approx(4.0 / 3).epsilon(1e-12));
    CHECK(bundle.ratio_series.at("CN").at(2005) ==
          doctest::Approx(2.0 / 3).epsilon(1e-12));
    CHECK(bundle.ratio_series.at("CN").count(2004) == 0);
    CHECK(bundle.ratio_omitted == 1);

    REQUIRE(bundle.ratio_summary.size() == 2);
    const auto& us = bundle.ratio_summary[0];
    CHECK(us.country == "US");
    CHECK(us.mean == doctest::Approx((0.875 + 4.0 / 3) / 2).epsilon(1e-12));
    CHECK(us.sd == doctest::Approx(0.32409069).epsilon(1e-6));
    CHECK(us.delta == doctest::Approx(4.0 / 3 - 0.875).epsilon(1e-12));
    CHECK(us.rank_mean == 1);
    CHECK(us.cls == PerformerClass::Average);
    const auto& cn = bundle.ratio_summary[1];
    CHECK(cn.country == "CN");
    CHECK_FALSE(cn.sd_defined);
    CHECK(cn.rank_sd == 2);
    CHECK(cn.cls == PerformerClass::Low);
  }

  SUBCASE("confidence intervals on CN full counts") {
    REQUIRE(bundle.ci_series.count("CN"));
    const auto& cn = bundle.ci_series.at("CN");
    CHECK(cn.at(2004).point == doctest::Approx(0.2));  // 1 of 5
    CHECK(cn.at(2005).point == doctest::Approx(0.4));  // 2 of 5
    CHECK(cn.at(2004).lower >= 0.0);
    CHECK(cn.at(2004).upper <= 1.0);
  }

  SUBCASE("domestic decomposition") {
    const auto& us = bundle.domestic.at("US");
    REQUIRE(us.points.size() == 2);
    CHECK(us.points.at(2004).domestic_share == doctest::Approx(1.0));
    CHECK(us.points.at(2004).pub_share == doctest::Approx(1.0));
    CHECK(us.points.at(2004).ratio == doctest::Approx(1.0));
    CHECK(us.points.at(2005).pub_share == doctest::Approx(0.5));
    CHECK(us.points.at(2005).ratio == doctest::Approx(2.0));

    const auto& cn = bundle.domestic.at("CN");
    CHECK(cn.omitted == 1);  // 2004 has no CN publication share three years back
    CHECK(cn.points.at(2005).ratio == doctest::Approx(2.0));

    CHECK(bundle.domestic.at("DE").points.empty());
    CHECK(bundle.domestic.at("GB").points.empty());

    CHECK(bundle.domestic_smoothed.at("US").at(2004) == doctest::Approx(1.0));
    CHECK(bundle.domestic_smoothed.at("US").at(2005) == doctest::Approx(1.5));
    CHECK(bundle.domestic_smoothed.count("DE") == 0);
  }
}

TEST_CASE("hand-computed fixture: serial reference agrees field for field") {
  Corpus corpus = load_golden_corpus();
  RunConfig config = golden_config();
  auto pipeline = compute_bundle(corpus, config);
  auto reference = oracle_indicators(corpus, config);
  auto diffs = compare_bundles(pipeline, reference, 1e-9);
  for (const auto& d : diffs) MESSAGE(d);
  CHECK(diffs.empty());
}

TEST_CASE("seeded corpora: pipeline equals the serial reference") {
  for (std::uint64_t seed : {101u, 202u}) {
    SynthParams params;
    params.seed = seed;
    params.n_articles = 1200;
    params.mean_refs = 6;
    params.collab_prob = 0.25;
    params.attachment_exponent = seed % 2 ? 1.0 : 0.0;
    auto synth = generate_corpus(params);
    resolve_references(synth.corpus);

    RunConfig config;
    config.ci_countries = {"US", "CN"};
    config.tie_policy = seed % 2 ? TiePolicy::StrictRank : TiePolicy::IncludeTies;
    auto pipeline = compute_bundle(synth.corpus, config);
    auto reference = oracle_indicators(synth.corpus, config);
    auto diffs = compare_bundles(pipeline, reference, 1e-9);
    for (const auto& d : diffs) MESSAGE(d);
    CHECK(diffs.empty());
  }
}
