#include "refgeo/synth.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "refgeo/citegraph.hpp"
#include "refgeo/tally.hpp"

using namespace refgeo;

TEST_CASE("zero articles gives an empty corpus") {
  SynthParams p;
  p.n_articles = 0;
  auto r = generate_corpus(p);
  CHECK(r.corpus.articles.empty());
  CHECK(r.stats.generated_refs == 0);
}

TEST_CASE("the same seed reproduces the corpus byte for byte") {
  SynthParams p;
  p.seed = 1234;
  p.n_articles = 2000;
  p.attachment_exponent = 1.0;
  auto a = generate_corpus(p);
  auto b = generate_corpus(p);
  CHECK(serialize_corpus(a.corpus) == serialize_corpus(b.corpus));

  SUBCASE("a different seed does not") {
    p.seed = 1235;
    auto c = generate_corpus(p);
    CHECK(serialize_corpus(a.corpus) != serialize_corpus(c.corpus));
  }
}

TEST_CASE("generated corpora round-trip through the parser cleanly") {
  SynthParams p;
  p.seed = 9;
  p.n_articles = 1500;
  auto r = generate_corpus(p);
  std::string text = serialize_corpus(r.corpus);
  Corpus parsed = parse_corpus(text);
  CHECK(parsed.ingest_stats.rejected() == 0);
  CHECK(parsed.ingest_stats.accepted == r.corpus.articles.size());
  CHECK(serialize_corpus(parsed) == text);
}

TEST_CASE("articles are created in year order") {
  SynthParams p;
  p.seed = 5;
  p.n_articles = 500;
  auto r = generate_corpus(p);
  int prev = 0;
  for (const auto& a : r.corpus.articles) {
    CHECK(a.publication_year >= prev);
    prev = a.publication_year;
  }
}

TEST_CASE("references only point at earlier years") {
  SynthParams p;
  p.seed = 6;
  p.n_articles = 800;
  p.attachment_exponent = 1.0;
  auto r = generate_corpus(p);
  auto index = r.corpus.id_index();
  for (const auto& a : r.corpus.articles) {
    for (const auto& ref : a.references) {
      if (!ref.resolved()) continue;
      auto it = index.find(ref.resolved_id);
      if (it == index.end()) continue;
      CHECK(r.corpus.articles[it->second].publication_year < a.publication_year);
    }
  }
}

TEST_CASE("single-year corpus cannot satisfy references and counts the shortfall") {
  SynthParams p;
  p.seed = 2;
  p.n_articles = 100;
  p.year_min = p.year_max = 2005;
  p.pre1980_ref_fraction = 0.0;
  p.mean_refs = 4;
  auto r = generate_corpus(p);
  CHECK(r.stats.generated_refs == 0);
  CHECK(r.stats.shortfall == r.stats.requested_refs);
  CHECK(r.stats.requested_refs > 0);
}

TEST_CASE("noise fraction drives the cleaning removal rate") {
  SynthParams p;
  p.seed = 31;
  p.n_articles = 4000;
  p.mean_refs = 5;
  p.noise_type_fraction = 0.3;
  p.missing_country_fraction = 0.0;
  p.pre1980_ref_fraction = 0.0;
  p.collab_prob = 0.0;
  auto r = generate_corpus(p);
  resolve_references(r.corpus);

  // Select everything elite so every reference is examined.
  CellPartition cells = cell_partition(r.corpus);
  CitationCounts counts = invert_citations(r.corpus);
  EliteSet elite = elite_select(cells, counts, r.corpus, 1.0, TiePolicy::IncludeTies);
  auto res = extract_references(elite, r.corpus);

  REQUIRE(res.stats.candidates > 1000);
  double removed = static_cast<double>(res.stats.removed_non_article);
  double n = static_cast<double>(res.stats.candidates);
  double rate = removed / n;
  // Binomial: p = 0.3, tolerance 5 sigma.
  double sigma = std::sqrt(0.3 * 0.7 / n);
  CHECK(std::abs(rate - 0.3) < 5 * sigma);
}

TEST_CASE("preferential attachment concentrates in-degree") {
  std::uint64_t pref_total = 0, uniform_total = 0;
  for (std::uint64_t seed : {11u, 12u, 13u, 14u, 15u, 16u}) {
    SynthParams p;
    p.n_articles = 2500;
    p.mean_refs = 6;
    p.noise_type_fraction = 0.0;
    p.missing_country_fraction = 0.0;
    p.pre1980_ref_fraction = 0.0;
    p.seed = seed;

    auto max_indegree = [](const Corpus& corpus) {
      CitationCounts counts = invert_citations(corpus);
      std::uint32_t best = 0;
      for (auto v : counts.inbound) best = std::max(best, v);
      return best;
    };

    p.attachment_exponent = 1.0;
    auto pref = generate_corpus(p);
    p.attachment_exponent = 0.0;
    auto uniform = generate_corpus(p);
    pref_total += max_indegree(pref.corpus);
    uniform_total += max_indegree(uniform.corpus);
  }
  CHECK(pref_total > uniform_total);
}

TEST_CASE("general attachment exponents also skew the degree tail") {
  SynthParams p;
  p.n_articles = 1500;
  p.mean_refs = 6;
  p.seed = 77;
  p.noise_type_fraction = 0.0;
  p.missing_country_fraction = 0.0;
  p.pre1980_ref_fraction = 0.0;
  p.attachment_exponent = 2.0;
  auto skewed = generate_corpus(p);
  p.attachment_exponent = 0.0;
  auto flat = generate_corpus(p);
  auto max_of = [](const Corpus& c) {
    auto counts = invert_citations(c);
    return *std::max_element(counts.inbound.begin(), counts.inbound.end());
  };
  CHECK(max_of(skewed.corpus) > max_of(flat.corpus));
}

TEST_CASE("knob fractions materialize in the generated records") {
  SynthParams p;
  p.seed = 21;
  p.n_articles = 3000;
  p.noise_type_fraction = 0.2;
  p.missing_country_fraction = 0.1;
  p.pre1980_ref_fraction = 0.1;
  p.collab_prob = 0.3;
  auto r = generate_corpus(p);

  CHECK(r.stats.back_catalog_records == 3000 / 50);
  std::uint64_t non_article = 0, no_country = 0, multi = 0, pre1980_targets = 0;
  auto index = r.corpus.id_index();
  for (const auto& a : r.corpus.articles) {
    if (a.document_type != DocType::Article) non_article++;
    if (a.countries.empty()) no_country++;
    if (a.countries.size() > 1) multi++;
    for (const auto& ref : a.references) {
      if (!ref.resolved()) continue;
      auto it = index.find(ref.resolved_id);
      if (it != index.end() &&
          r.corpus.articles[it->second].publication_year < 1980)
        pre1980_targets++;
    }
  }
  CHECK(non_article > 0);
  CHECK(no_country > 0);
  CHECK(multi > 0);
  CHECK(pre1980_targets > 0);
  CHECK(r.stats.key_form_refs > 0);
  CHECK(r.stats.unmatched_key_refs > 0);
}

TEST_CASE("parameter validation names the offending field") {
  SynthParams p;
  p.collab_prob = 1.5;
  CHECK_THROWS_WITH_AS(p.validate(),
                       doctest::Contains("collab_prob"), std::invalid_argument);
  p.collab_prob = 0.2;
  p.year_min = 2010;
  p.year_max = 2005;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}
