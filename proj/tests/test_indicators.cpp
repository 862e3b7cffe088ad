#include "refgeo/indicators.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "refgeo/textio.hpp"

using namespace refgeo;

namespace {

ArticleRecord article(const std::string& id, int year,
                      std::vector<std::string> countries) {
  ArticleRecord a;
  a.id = id;
  a.publication_year = year;
  a.document_type = DocType::Article;
  a.subject_categories = {"CAT"};
  a.countries = std::move(countries);
  std::sort(a.countries.begin(), a.countries.end());
  return a;
}

// Test-side closed-form Wilson evaluation in long double, with z from
// bisection; independent of the library path.
ConfidenceInterval wilson_oracle(long double s, long double n, long double level) {
  long double target = 1.0L - (1.0L - level) / 2.0L;
  long double lo = 0.0L, hi = 40.0L;
  for (int i = 0; i < 300; ++i) {
    long double mid = (lo + hi) / 2;
    if (0.5L * erfcl(-mid / sqrtl(2.0L)) < target) lo = mid;
    else hi = mid;
  }
  long double z = (lo + hi) / 2;
  long double p = s / n;
  long double z2 = z * z;
  long double center = (p + z2 / (2 * n)) / (1 + z2 / n);
  long double half = (z / (1 + z2 / n)) * sqrtl(p * (1 - p) / n + z2 / (4 * n * n));
  ConfidenceInterval ci;
  ci.point = static_cast<double>(p);
  ci.lower = static_cast<double>(center - half);
  ci.upper = static_cast<double>(center + half);
  return ci;
}

}  // namespace

TEST_CASE("yearly share series") {
  Corpus c;
  c.articles.push_back(article("T1", 2000, {"US"}));
  c.articles.push_back(article("T2", 2000, {"CN", "US"}));
  c.articles.push_back(article("E", 2005, {"US"}));

  SUBCASE("single year, single country: share 100") {
    std::vector<RefInstance> refs = {{2, 0, 2005, 2000}};
    auto s = yearly_share_series(refs, c);
    CHECK(s.share("US", 2005) == doctest::Approx(100.0));
  }
  SUBCASE("{US} and {US,CN} give 75/25") {
    std::vector<RefInstance> refs = {{2, 0, 2005, 2000}, {2, 1, 2005, 2000}};
    auto s = yearly_share_series(refs, c);
    CHECK(s.share("US", 2005) == doctest::Approx(75.0).epsilon(1e-12));
    CHECK(s.share("CN", 2005) == doctest::Approx(25.0).epsilon(1e-12));
    CHECK(s.totals.at(2005).full_count == 3);
    CHECK(s.totals.at(2005).fractional_count == doctest::Approx(2.0));
  }
  SUBCASE("shares sum to 100 within 1e-9 for every year") {
    std::vector<RefInstance> refs = {{2, 0, 2005, 2000},
                                     {2, 1, 2005, 2000},
                                     {2, 1, 2006, 2000},
                                     {2, 0, 2006, 2000}};
    auto s = yearly_share_series(refs, c);
    for (int year : {2005, 2006}) {
      double sum = 0.0;
      for (const auto& [country, years] : s.by_country) {
        auto it = years.find(year);
        if (it != years.end()) sum += it->second.share_pct;
      }
      CHECK(std::abs(sum - 100.0) <= 1e-9);
    }
  }
}

TEST_CASE("publication share series skips non-articles and no-country records") {
  Corpus c;
  c.articles.push_back(article("A", 2004, {"US"}));
  c.articles.push_back(article("B", 2004, {}));
  auto book = article("C", 2004, {"CN"});
  book.document_type = DocType::Book;
  c.articles.push_back(std::move(book));
  auto s = publication_share_series(c);
  CHECK(s.share("US", 2004) == doctest::Approx(100.0));
  CHECK_FALSE(s.has("CN", 2004));
}

TEST_CASE("Wilson score interval") {
  SUBCASE("zero successes: point and lower bound are zero") {
    auto ci = proportion_ci(0, 100, 0.95);
    CHECK(ci.point == 0.0);
    CHECK(ci.lower == 0.0);
    CHECK(ci.upper > 0.0);
  }
  SUBCASE("50/100 at 95%") {
    auto ci = proportion_ci(50, 100, 0.95);
    auto expect = wilson_oracle(50, 100, 0.95L);
    CHECK(std::abs(ci.lower - expect.lower) < 1e-12);
    CHECK(std::abs(ci.upper - expect.upper) < 1e-12);
    CHECK(ci.lower == doctest::Approx(0.4038).epsilon(5e-4));
    CHECK(ci.upper == doctest::Approx(0.5962).epsilon(5e-4));
  }
  SUBCASE("all successes: upper bound is one") {
    auto ci = proportion_ci(100, 100, 0.95);
    CHECK(ci.point == 1.0);
    CHECK(ci.upper == doctest::Approx(1.0));
    CHECK(ci.lower < 1.0);
  }
  SUBCASE("bad arguments throw") {
    CHECK_THROWS_AS(proportion_ci(1, 0, 0.95), std::invalid_argument);
    CHECK_THROWS_AS(proportion_ci(5, 4, 0.95), std::invalid_argument);
    CHECK_THROWS_AS(proportion_ci(1, 10, 1.0), std::invalid_argument);
  }
  SUBCASE("width shrinks with n at fixed proportion") {
    double prev = 2.0;
    for (double n : {10.0, 100.0, 1000.0}) {
      auto ci = proportion_ci(0.3 * n, n, 0.95);
      double width = ci.upper - ci.lower;
      CHECK(width < prev);
      prev = width;
    }
  }
  SUBCASE("matches the oracle across levels and proportions") {
    for (double level : {0.5, 0.9, 0.95, 0.99}) {
      for (double s : {1.0, 7.0, 19.0}) {
        auto ci = proportion_ci(s, 20, level);
        auto expect = wilson_oracle(s, 20, level);
        CHECK(std::abs(ci.lower - std::max(0.0, expect.lower)) < 1e-9);
        CHECK(std::abs(ci.upper - std::min(1.0, expect.upper)) < 1e-9);
      }
    }
  }
}

namespace {

ShareSeries series_of(
    const std::map<std::string, std::map<int, double>>& shares) {
  ShareSeries s;
  for (const auto& [country, years] : shares)
    for (const auto& [year, pct] : years)
      s.by_country[country][year] = {0, 0.0, pct};
  return s;
}

}  // namespace

TEST_CASE("lagged ratio series") {
  SUBCASE("identical shares with lag zero give all ones") {
    auto shares = series_of({{"US", {{2004, 40.0}, {2005, 41.0}, {2006, 39.0}}}});
    auto ratios = lagged_ratio_series(shares, shares, 0);
    for (const auto& [year, r] : ratios.by_country.at("US"))
      CHECK(r == doctest::Approx(1.0));
    CHECK(ratios.omitted == 0);
  }
  SUBCASE("aggregate arithmetic: 44.10 over 24.02 displays 1.84") {
    auto ref = series_of({{"US", {{2013, 44.10}}}});
    auto pub = series_of({{"US", {{2010, 24.02}}}});
    auto ratios = lagged_ratio_series(ref, pub, 3);
    double r = ratios.by_country.at("US").at(2013);
    CHECK(r == doctest::Approx(44.10 / 24.02).epsilon(1e-12));
    CHECK(format_display(r) == "1.84");
  }
  SUBCASE("hand-set four-year fixture") {
    auto ref = series_of({{"NL", {{2004, 10.0}, {2005, 12.0}, {2006, 9.0}, {2007, 8.0}}}});
    auto pub = series_of({{"NL", {{2001, 5.0}, {2002, 6.0}, {2003, 4.5}, {2004, 8.0}}}});
    auto ratios = lagged_ratio_series(ref, pub, 3);
    const auto& nl = ratios.by_country.at("NL");
    CHECK(nl.at(2004) == doctest::Approx(2.0));
    CHECK(nl.at(2005) == doctest::Approx(2.0));
    CHECK(nl.at(2006) == doctest::Approx(2.0));
    CHECK(nl.at(2007) == doctest::Approx(1.0));
  }
  SUBCASE("missing or zero publication share is omitted and counted") {
    auto ref = series_of({{"US", {{2004, 40.0}, {2005, 41.0}}}});
    auto pub = series_of({{"US", {{2001, 20.0}}}});  // nothing for 2002
    auto ratios = lagged_ratio_series(ref, pub, 3);
    CHECK(ratios.by_country.at("US").size() == 1);
    CHECK(ratios.omitted == 1);
  }
}

TEST_CASE("ratios are positive wherever both shares are nonzero") {
  auto ref = series_of({{"US", {{2004, 40.0}, {2005, 0.5}}},
                        {"CN", {{2004, 3.0}, {2005, 90.0}}}});
  auto pub = series_of({{"US", {{2001, 20.0}, {2002, 30.0}}},
                        {"CN", {{2001, 9.0}, {2002, 0.1}}}});
  auto ratios = lagged_ratio_series(ref, pub, 3);
  for (const auto& [country, series] : ratios.by_country)
    for (const auto& [year, r] : series) CHECK(r > 0.0);
}

TEST_CASE("performer classification boundaries") {
  CHECK(classify_performers(1.2) == PerformerClass::High);
  CHECK(classify_performers(1.1999) == PerformerClass::Average);
  CHECK(classify_performers(0.8) == PerformerClass::Average);
  CHECK(classify_performers(0.7999) == PerformerClass::Low);
  // Representative magnitudes for each band.
  CHECK(classify_performers(1.71) == PerformerClass::High);
  CHECK(classify_performers(0.99) == PerformerClass::Average);
  CHECK(classify_performers(0.50) == PerformerClass::Low);
}

TEST_CASE("ratio summary statistics") {
  SUBCASE("constant series") {
    RatioSeries s;
    for (int y = 2004; y <= 2013; ++y) s.by_country["US"][y] = 1.0;
    auto rows = ratio_summary(s);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].mean == doctest::Approx(1.0));
    CHECK(rows[0].sd == doctest::Approx(0.0));
    CHECK(rows[0].delta == doctest::Approx(0.0));
    CHECK(rows[0].sd_defined);
  }
  SUBCASE("two-point series: mean 1.0, sd sqrt(0.5), delta 1.0") {
    RatioSeries s;
    s.by_country["US"][2004] = 0.5;
    s.by_country["US"][2005] = 1.5;
    auto rows = ratio_summary(s);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].mean == doctest::Approx(1.0));
    CHECK(rows[0].sd == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
    CHECK(rows[0].delta == doctest::Approx(1.0));
  }
  SUBCASE("single observation: sd absent, delta zero") {
    RatioSeries s;
    s.by_country["US"][2004] = 0.9;
    auto rows = ratio_summary(s);
    REQUIRE(rows.size() == 1);
    CHECK_FALSE(rows[0].sd_defined);
    CHECK(rows[0].delta == doctest::Approx(0.0));
  }
  SUBCASE("ranks are permutations with deterministic ties") {
    RatioSeries s;
    s.by_country["US"][2004] = 1.7;
    s.by_country["US"][2005] = 1.8;
    s.by_country["CN"][2004] = 0.4;
    s.by_country["CN"][2005] = 0.6;
    s.by_country["DE"][2004] = 0.9;
    s.by_country["DE"][2005] = 1.1;
    auto rows = ratio_summary(s);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].country == "US");
    CHECK(rows[0].rank_mean == 1);
    CHECK(rows[0].cls == PerformerClass::High);
    CHECK(rows[1].country == "DE");
    CHECK(rows[1].cls == PerformerClass::Average);
    CHECK(rows[2].country == "CN");
    CHECK(rows[2].cls == PerformerClass::Low);
    std::vector<int> mean_ranks, sd_ranks, delta_ranks;
    for (const auto& r : rows) {
      mean_ranks.push_back(r.rank_mean);
      sd_ranks.push_back(r.rank_sd);
      delta_ranks.push_back(r.rank_delta);
    }
    std::sort(sd_ranks.begin(), sd_ranks.end());
    std::sort(delta_ranks.begin(), delta_ranks.end());
    CHECK(mean_ranks == std::vector<int>{1, 2, 3});
    CHECK(sd_ranks == std::vector<int>{1, 2, 3});
    CHECK(delta_ranks == std::vector<int>{1, 2, 3});
  }
}

TEST_CASE("moving average") {
  std::map<int, double> series = {{2004, 1.0}, {2005, 2.0}, {2006, 3.0}};
  SUBCASE("window three over 1,2,3 gives 1, 1.5, 2") {
    auto ma = moving_average(series, 3);
    CHECK(ma.at(2004) == doctest::Approx(1.0));
    CHECK(ma.at(2005) == doctest::Approx(1.5));
    CHECK(ma.at(2006) == doctest::Approx(2.0));
  }
  SUBCASE("window one is the identity") {
    CHECK(moving_average(series, 1) == series);
  }
  SUBCASE("constant series unchanged for any window") {
    std::map<int, double> flat = {{1, 2.5}, {2, 2.5}, {3, 2.5}, {4, 2.5}};
    for (int w : {1, 2, 3, 10}) CHECK(moving_average(flat, w) == flat);
  }
  SUBCASE("output stays within input bounds") {
    auto ma = moving_average(series, 2);
    for (const auto& [year, v] : ma) {
      CHECK(v >= 1.0);
      CHECK(v <= 3.0);
    }
  }
  SUBCASE("window must be positive") {
    CHECK_THROWS_AS(moving_average(series, 0), std::invalid_argument);
  }
  SUBCASE("window counts available points, not calendar years") {
    std::map<int, double> gappy = {{2004, 1.0}, {2007, 2.0}, {2012, 3.0}};
    auto ma = moving_average(gappy, 2);
    CHECK(ma.at(2004) == doctest::Approx(1.0));
    CHECK(ma.at(2007) == doctest::Approx(1.5));
    CHECK(ma.at(2012) == doctest::Approx(2.5));
  }
}

namespace {

// Six references in 2005, four of them domestic for US; lagged pub share set
// by hand: 2002 has {US},{US},{CN},{CN} so the US share is 50%.
struct DomesticFixture {
  Corpus corpus;
  std::vector<RefInstance> refs;
  ShareSeries pub;

  DomesticFixture() {
    corpus.articles.push_back(article("US1", 2002, {"US"}));
    corpus.articles.push_back(article("US2", 2002, {"US"}));
    corpus.articles.push_back(article("CN1", 2002, {"CN"}));
    corpus.articles.push_back(article("CN2", 2002, {"CN"}));
    corpus.articles.push_back(article("MIX", 2002, {"CN", "US"}));
    corpus.articles.push_back(article("EL1", 2005, {"US"}));       // purely US
    corpus.articles.push_back(article("EL2", 2005, {"DE", "US"})); // US co-authored
    pub = publication_share_series(corpus);
    // EL1 cites US1, US2, CN1; EL2 cites US1, MIX, CN2
    refs = {{5, 0, 2005, 2002}, {5, 1, 2005, 2002}, {5, 2, 2005, 2002},
            {6, 0, 2005, 2002}, {6, 4, 2005, 2002}, {6, 3, 2005, 2002}};
  }
};

}  // namespace

TEST_CASE("domestic ratio") {
  DomesticFixture f;
  // pub shares 2002: US 2.5/5 = 50%, CN 2.5/5 = 50%
  CHECK(f.pub.share("US", 2002) == doctest::Approx(50.0));

  SUBCASE("all-elite mode: 4 of 6 domestic, ratio against half share") {
    auto s = domestic_ratio("US", f.refs, f.corpus, f.pub, DomesticMode::AllElite, 3);
    REQUIRE(s.points.count(2005));
    const auto& p = s.points.at(2005);
    CHECK(p.domestic_share == doctest::Approx(4.0 / 6.0).epsilon(1e-12));
    CHECK(p.pub_share == doctest::Approx(0.5));
    CHECK(p.ratio == doctest::Approx((4.0 / 6.0) / 0.5).epsilon(1e-12));
  }

  SUBCASE("purely-domestic mode restricts to single-country citing articles") {
    auto s = domestic_ratio("US", f.refs, f.corpus, f.pub,
                            DomesticMode::PurelyDomesticElite, 3);
    // only EL1 qualifies: US1, US2 domestic out of 3
    const auto& p = s.points.at(2005);
    CHECK(p.domestic_share == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(p.ratio == doctest::Approx((2.0 / 3.0) / 0.5).epsilon(1e-12));
  }

  SUBCASE("purely-domestic qualifying set is a subset of all-elite's") {
    // Recompute both qualifying sets directly from the fixture.
    std::vector<std::size_t> all, purely;
    for (std::size_t i = 0; i < f.refs.size(); ++i) {
      const auto& cc = f.corpus.articles[f.refs[i].citing_index].countries;
      bool in_all = std::find(cc.begin(), cc.end(), "US") != cc.end();
      bool in_pure = cc.size() == 1 && cc[0] == "US";
      if (in_all) all.push_back(i);
      if (in_pure) purely.push_back(i);
      CHECK((!in_pure || in_all));
    }
    CHECK(purely.size() < all.size());
  }

  SUBCASE("wholly domestic corpus: numerator one, ratio is inverse pub share") {
    Corpus c;
    c.articles.push_back(article("A", 2002, {"US"}));
    c.articles.push_back(article("B", 2005, {"US"}));
    auto pub = publication_share_series(c);
    std::vector<RefInstance> refs = {{1, 0, 2005, 2002}};
    auto s = domestic_ratio("US", refs, c, pub, DomesticMode::AllElite, 3);
    const auto& p = s.points.at(2005);
    CHECK(p.domestic_share == doctest::Approx(1.0));
    CHECK(p.ratio == doctest::Approx(1.0 / p.pub_share));
  }

  SUBCASE("years without qualifying refs or pub share are omitted and counted") {
    auto s = domestic_ratio("CN", f.refs, f.corpus, f.pub,
                            DomesticMode::PurelyDomesticElite, 3);
    CHECK(s.points.empty());
    CHECK(s.omitted == 1);
  }
}

TEST_CASE("domestic ratio display arithmetic: 66.71% over 28.47% shows 2.34") {
  double ratio = (66.71 / 100.0) / (28.47 / 100.0);
  CHECK(format_display(ratio) == "2.34");
}

TEST_CASE("scaling every count by the same constant changes nothing") {
  Corpus c;
  c.articles.push_back(article("T1", 2001, {"US"}));
  c.articles.push_back(article("T2", 2001, {"CN"}));
  c.articles.push_back(article("E1", 2004, {"US"}));

  std::vector<RefInstance> base = {{2, 0, 2004, 2001}, {2, 0, 2004, 2001},
                                   {2, 1, 2004, 2001}};
  std::vector<RefInstance> tripled;
  for (int k = 0; k < 3; ++k)
    for (const auto& r : base) tripled.push_back(r);

  auto s1 = yearly_share_series(base, c);
  auto s3 = yearly_share_series(tripled, c);
  CHECK(s1.share("US", 2004) == doctest::Approx(s3.share("US", 2004)).epsilon(1e-12));
  CHECK(s1.share("CN", 2004) == doctest::Approx(s3.share("CN", 2004)).epsilon(1e-12));

  auto pub = publication_share_series(c);
  auto r1 = lagged_ratio_series(s1, pub, 3);
  auto r3 = lagged_ratio_series(s3, pub, 3);
  auto rows1 = ratio_summary(r1);
  auto rows3 = ratio_summary(r3);
  REQUIRE(rows1.size() == rows3.size());
  for (std::size_t i = 0; i < rows1.size(); ++i) {
    CHECK(rows1[i].country == rows3[i].country);
    CHECK(rows1[i].mean == doctest::Approx(rows3[i].mean).epsilon(1e-12));
    CHECK(rows1[i].rank_mean == rows3[i].rank_mean);
    CHECK(rows1[i].cls == rows3[i].cls);
  }
}
