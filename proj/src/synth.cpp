#include "refgeo/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

#include "refgeo/rng.hpp"

namespace refgeo {

namespace {

constexpr std::size_t kMaxCountriesPerArticle = 5;
constexpr double kSecondCategoryProb = 0.15;
constexpr double kAuthorFieldProb = 0.3;
constexpr double kUnmatchedKeyProb = 0.005;
constexpr double kKeyFormProb = 0.03;

std::string padded_id(char prefix, std::uint64_t seq) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%c%07llu", prefix,
                static_cast<unsigned long long>(seq));
  return buf;
}

// Prefix-sum tree over target weights for attachment exponents other than 0
// and 1.
struct WeightTree {
  std::vector<double> tree;  // 1-based
  double total = 0.0;

  explicit WeightTree(std::size_t n) : tree(n + 1, 0.0) {}

  void add(std::size_t i, double delta) {
    total += delta;
    for (std::size_t j = i + 1; j < tree.size(); j += j & (~j + 1)) tree[j] += delta;
  }

  std::size_t sample(double r) const {  // r in [0, total)
    std::size_t pos = 0;
    std::size_t mask = 1;
    while ((mask << 1) < tree.size()) mask <<= 1;
    for (; mask; mask >>= 1) {
      std::size_t next = pos + mask;
      if (next < tree.size() && tree[next] <= r) {
        pos = next;
        r -= tree[next];
      }
    }
    return pos;  // 0-based index
  }
};

void check_fraction(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0))
    throw std::invalid_argument(std::string("synth: ") + name +
                                " must be in [0, 1]");
}

}  // namespace

std::vector<CountryWeight> SynthParams::default_country_pool() {
  return {{"US", 30}, {"CN", 18}, {"JP", 8}, {"GB", 8}, {"DE", 7},
          {"FR", 5},  {"CA", 5},  {"IT", 4}, {"AU", 4}, {"NL", 3},
          {"KR", 3},  {"CH", 2},  {"SE", 2}, {"BR", 2}};
}

std::vector<std::string> SynthParams::default_category_pool() {
  return {"BIO", "CHEM", "CS", "MATH", "MED", "PHYS"};
}

void SynthParams::validate() const {
  check_fraction(collab_prob, "collab_prob");
  check_fraction(noise_type_fraction, "noise_type_fraction");
  check_fraction(missing_country_fraction, "missing_country_fraction");
  check_fraction(pre1980_ref_fraction, "pre1980_ref_fraction");
  if (!(mean_refs >= 0.0)) throw std::invalid_argument("synth: mean_refs must be >= 0");
  if (!(attachment_exponent >= 0.0))
    throw std::invalid_argument("synth: attachment_exponent must be >= 0");
  if (year_min > year_max)
    throw std::invalid_argument("synth: year_min must be <= year_max");
  if (year_min < 1980)
    throw std::invalid_argument("synth: year_min must be >= 1980");
  for (const auto& cw : countries)
    if (!(cw.weight > 0.0))
      throw std::invalid_argument("synth: country weights must be > 0");
}

SynthResult generate_corpus(const SynthParams& params) {
  params.validate();
  SynthResult out;
  SplitMix64 rng(params.seed);

  const auto pool =
      params.countries.empty() ? SynthParams::default_country_pool() : params.countries;
  const auto cats =
      params.categories.empty() ? SynthParams::default_category_pool() : params.categories;

  std::vector<double> cum;
  cum.reserve(pool.size());
  double total_weight = 0.0;
  for (const auto& cw : pool) {
    total_weight += cw.weight;
    cum.push_back(total_weight);
  }
  auto draw_country_index = [&]() -> std::size_t {
    double r = rng.next_double() * total_weight;
    std::size_t i = static_cast<std::size_t>(
        std::upper_bound(cum.begin(), cum.end(), r) - cum.begin());
    return std::min(i, pool.size() - 1);  // r can round up onto the total
  };

  const std::uint64_t n = params.n_articles;
  const std::uint64_t n_back =
      params.pre1980_ref_fraction > 0.0 && n > 0
          ? std::min<std::uint64_t>(n, std::max<std::uint64_t>(1, n / 50))
          : 0;
  const std::uint64_t n_main = n - n_back;

  out.corpus.articles.reserve(n);
  out.stats.back_catalog_records = n_back;

  // Pre-1980 back catalog: article-typed records with countries, reachable
  // only through the pre-1980 reference draw.
  for (std::uint64_t i = 0; i < n_back; ++i) {
    ArticleRecord a;
    a.id = padded_id('B', i + 1);
    a.publication_year =
        1960 + static_cast<int>((i * 20) / std::max<std::uint64_t>(1, n_back));
    a.document_type = DocType::Article;
    a.subject_categories.push_back(cats[i % cats.size()]);
    a.countries.push_back(pool[draw_country_index()].code);
    out.corpus.articles.push_back(std::move(a));
  }

  // Main years first, then creation in year order.
  const int n_years = params.year_max - params.year_min + 1;
  std::vector<int> years(n_main);
  for (auto& y : years)
    y = params.year_min + static_cast<int>(rng.next_below(n_years));
  std::vector<std::uint64_t> order(n_main);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&years](std::uint64_t a, std::uint64_t b) {
                     return years[a] < years[b];
                   });

  static const DocType kNoiseTypes[] = {
      DocType::Book,         DocType::BookChapter, DocType::ConferencePaper,
      DocType::Note,         DocType::Letter,      DocType::Dissertation,
      DocType::News,         DocType::Other};

  const std::uint64_t base_refs = static_cast<std::uint64_t>(params.mean_refs);
  const double extra_ref_prob = params.mean_refs - static_cast<double>(base_refs);

  // Attachment machinery over main articles only (creation order positions).
  std::vector<std::uint32_t> indegree(n_main, 0);
  std::vector<std::uint64_t> endpoint_pool;        // exponent == 1
  WeightTree weights(params.attachment_exponent != 0.0 &&
                             params.attachment_exponent != 1.0
                         ? n_main
                         : 0);
  const bool general_alpha =
      params.attachment_exponent != 0.0 && params.attachment_exponent != 1.0;
  auto weight_of = [&](std::uint64_t pos) {
    return std::pow(static_cast<double>(indegree[pos]) + 1.0,
                    params.attachment_exponent);
  };

  std::uint64_t eligible = 0;  // main articles with strictly earlier years
  std::uint64_t main_seq = 0;
  const std::uint32_t back_offset = 0;  // back catalog occupies [0, n_back)

  for (std::uint64_t pos = 0; pos < n_main; ++pos) {
    const int year = years[order[pos]];
    while (eligible < pos && years[order[eligible]] < year) {
      if (general_alpha) weights.add(eligible, 1.0);
      ++eligible;
    }

    ArticleRecord a;
    a.id = padded_id('A', ++main_seq);
    a.publication_year = year;

    if (rng.next_bernoulli(params.noise_type_fraction)) {
      a.document_type = kNoiseTypes[rng.next_below(8)];
      out.stats.noise_type_records++;
    } else {
      a.document_type = DocType::Article;
    }

    if (rng.next_bernoulli(params.missing_country_fraction)) {
      out.stats.missing_country_records++;
    } else {
      std::size_t want = 1;
      while (want < kMaxCountriesPerArticle && rng.next_bernoulli(params.collab_prob))
        ++want;
      want = std::min(want, pool.size());
      int attempts = 0;
      while (a.countries.size() < want && attempts < 32) {
        ++attempts;
        const auto& code = pool[draw_country_index()].code;
        if (std::find(a.countries.begin(), a.countries.end(), code) ==
            a.countries.end())
          a.countries.push_back(code);
      }
      std::sort(a.countries.begin(), a.countries.end());
    }

    std::size_t c1 = rng.next_below(cats.size());
    a.subject_categories.push_back(cats[c1]);
    if (cats.size() >= 2 && rng.next_bernoulli(kSecondCategoryProb)) {
      std::size_t c2 = (c1 + 1 + rng.next_below(cats.size() - 1)) % cats.size();
      a.subject_categories.push_back(cats[c2]);
    }

    if (rng.next_bernoulli(kAuthorFieldProb)) {
      a.author = "au" + std::to_string(main_seq);
      a.volume = std::to_string(1 + rng.next_below(200));
      a.page = std::to_string(1 + rng.next_below(2000));
    }

    std::uint64_t k_refs = base_refs + (rng.next_bernoulli(extra_ref_prob) ? 1 : 0);
    out.stats.requested_refs += k_refs;
    for (std::uint64_t r = 0; r < k_refs; ++r) {
      std::uint32_t target_index;  // into corpus.articles
      std::uint64_t target_pos = 0;
      bool is_back = false;
      if (n_back > 0 && rng.next_bernoulli(params.pre1980_ref_fraction)) {
        target_index =
            back_offset + static_cast<std::uint32_t>(rng.next_below(n_back));
        is_back = true;
      } else if (eligible == 0) {
        out.stats.shortfall++;
        continue;
      } else {
        if (params.attachment_exponent == 0.0) {
          target_pos = rng.next_below(eligible);
        } else if (params.attachment_exponent == 1.0) {
          // weight in-degree + 1: uniform over base entries plus one entry
          // per accepted edge endpoint
          std::uint64_t span = eligible + endpoint_pool.size();
          std::uint64_t pick = rng.next_below(span);
          target_pos = pick < eligible ? pick : endpoint_pool[pick - eligible];
        } else {
          double rr = rng.next_double() * weights.total;
          // drift between the running total and the tree sums can push the
          // descent one past the last weighted slot
          target_pos = std::min<std::uint64_t>(weights.sample(rr), eligible - 1);
        }
        target_index = static_cast<std::uint32_t>(n_back + target_pos);
      }
      out.stats.generated_refs++;

      const double form = rng.next_double();
      ReferenceEntry entry;
      const ArticleRecord& target = out.corpus.articles[target_index];
      if (form < kUnmatchedKeyProb) {
        entry.key = std::make_unique<MatchKey>();
        entry.key->author = "nobody" + std::to_string(out.stats.generated_refs);
        entry.key->year = 1900;
        entry.key->volume = "0";
        entry.key->page = "0";
        out.stats.unmatched_key_refs++;
      } else if (form < kUnmatchedKeyProb + kKeyFormProb && !is_back &&
                 target.has_match_key()) {
        entry.key = std::make_unique<MatchKey>(target.match_key());
        out.stats.key_form_refs++;
      } else {
        entry.resolved_id = target.id;
      }
      a.references.push_back(std::move(entry));

      if (!is_back && form >= kUnmatchedKeyProb) {
        if (params.attachment_exponent == 1.0) {
          endpoint_pool.push_back(target_pos);
        } else if (general_alpha) {
          double before = weight_of(target_pos);
          indegree[target_pos]++;
          weights.add(target_pos, weight_of(target_pos) - before);
        } else {
          indegree[target_pos]++;
        }
      }
    }

    out.corpus.articles.push_back(std::move(a));
  }

  out.corpus.ingest_stats.total_lines = out.corpus.articles.size();
  out.corpus.ingest_stats.accepted = out.corpus.articles.size();
  return out;
}

}  // namespace refgeo
