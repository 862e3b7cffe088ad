#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "refgeo/corpus.hpp"

namespace refgeo {

struct CountryWeight {
  std::string code;
  double weight = 1.0;
};

// Knobs for the seeded corpus generator. Generation is single-threaded and
// bit-reproducible from the seed (see README for the exact draw sequence).
struct SynthParams {
  std::uint64_t seed = 1;
  std::uint64_t n_articles = 1000;
  int year_min = 2004;
  int year_max = 2013;
  std::vector<CountryWeight> countries;   // empty -> default pool
  std::vector<std::string> categories;    // empty -> default pool
  double mean_refs = 8.0;
  double collab_prob = 0.2;               // chance of each additional country
  double attachment_exponent = 0.0;       // 0 uniform; >0 preferential on in-degree
  double noise_type_fraction = 0.1;       // non-article records
  double missing_country_fraction = 0.05; // records without address countries
  double pre1980_ref_fraction = 0.05;     // references into the pre-1980 back catalog

  // Throws std::invalid_argument naming the offending field.
  void validate() const;

  static std::vector<CountryWeight> default_country_pool();
  static std::vector<std::string> default_category_pool();
};

struct GenStats {
  std::uint64_t requested_refs = 0;
  std::uint64_t generated_refs = 0;
  std::uint64_t shortfall = 0;  // refs skipped because no earlier article existed
  std::uint64_t back_catalog_records = 0;
  std::uint64_t noise_type_records = 0;
  std::uint64_t missing_country_records = 0;
  std::uint64_t key_form_refs = 0;
  std::uint64_t unmatched_key_refs = 0;
};

struct SynthResult {
  Corpus corpus;
  GenStats stats;
};

SynthResult generate_corpus(const SynthParams& params);

}  // namespace refgeo
