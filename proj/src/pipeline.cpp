#include "refgeo/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <iostream>

#include "json.hpp"
#include "refgeo/oracle.hpp"
#include "refgeo/synth.hpp"
#include "refgeo/textio.hpp"

namespace refgeo {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

double now_ms() {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

std::string hash_line(const std::string& hash) {
  return "# config_hash: " + hash + "\n";
}

// One table, plain and display variants in a single pass. Columns flagged as
// numeric get format_number / format_display; everything else is written
// verbatim.
struct TableWriter {
  std::string plain;
  std::string display;

  TableWriter(const std::string& hash, const std::string& header) {
    plain = hash_line(hash) + header + "\n";
    display = plain;
  }

  void row(const std::vector<std::pair<std::string, bool>>& cells) {
    std::vector<std::string> p, d;
    p.reserve(cells.size());
    d.reserve(cells.size());
    for (const auto& [value, numeric] : cells) {
      if (!numeric || value.empty()) {
        p.push_back(value);
        d.push_back(value);
      } else {
        double v = std::strtod(value.c_str(), nullptr);
        p.push_back(format_number(v));
        d.push_back(format_display(v));
      }
    }
    plain += join_csv_row(p);
    display += join_csv_row(d);
  }

  void write(const std::string& dir, const std::string& name) const {
    fs::path base = fs::path(dir) / name;
    write_file(base.string(), plain);
    fs::path disp = base;
    disp.replace_extension();
    write_file(disp.string() + "_display.csv", display);
  }
};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_share_table(const std::vector<ShareRow>& rows, const std::string& hash,
                       const std::string& dir, const char* name) {
  TableWriter t(hash, "country,full_count,fractional_count,fractional_share_pct");
  for (const auto& r : rows) {
    t.row({{r.country, false},
           {std::to_string(r.full_count), false},
           {num(r.fractional_count), true},
           {num(r.fractional_share_pct), true}});
  }
  t.write(dir, name);
}

json removal_json(const RemovalStats& rm) {
  json j;
  j["raw_entries"] = rm.raw_entries;
  j["duplicates_collapsed"] = rm.duplicates_collapsed;
  j["self_references_removed"] = rm.self_references_removed;
  j["unresolved"] = rm.unresolved;
  j["candidates"] = rm.candidates;
  j["removed_non_article"] = rm.removed_non_article;
  j["removed_no_country"] = rm.removed_no_country;
  j["removed_pre_1980"] = rm.removed_pre_cutoff;
  j["surviving"] = rm.surviving;
  j["removal_pct"] = rm.removal_pct();
  j["removal_pct_with_unresolved"] = rm.removal_pct_with_unresolved();
  return j;
}

bool require_artifact(const std::string& dir, const char* name) {
  if (fs::exists(fs::path(dir) / name)) return true;
  std::cerr << "error: missing upstream artifact '" << name << "' in " << dir
            << " (run the earlier stage first)\n";
  return false;
}

struct LoadedCorpus {
  Corpus corpus;
  bool ok = false;
};

LoadedCorpus load_resolved_corpus(const RunConfig& config, const std::string& dir) {
  LoadedCorpus out;
  fs::path path = fs::path(dir) / artifact::kCorpusResolved;
  std::string text;
  try {
    text = read_file(path.string());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return out;
  }
  out.corpus = parse_corpus(text, config.year_window);
  out.ok = true;
  return out;
}

EliteSet elite_from_ids(const std::vector<std::string>& ids, const Corpus& corpus) {
  EliteSet elite;
  elite.is_elite.assign(corpus.articles.size(), 0);
  auto index = corpus.id_index();
  for (const auto& id : ids) {
    auto it = index.find(id);
    if (it != index.end()) elite.is_elite[it->second] = 1;
  }
  for (std::uint32_t i = 0; i < elite.is_elite.size(); ++i)
    if (elite.is_elite[i]) elite.elite_indices.push_back(i);
  return elite;
}

// Share-stage computations given an elite set; fills exactly the bundle
// fields the share/ratio/domestic writers read.
void fill_from_elite(IndicatorBundle& bundle, const EliteSet& elite,
                     const Corpus& corpus, const RunConfig& config) {
  ExtractResult extract = extract_references(
      elite, corpus, {config.exclude_self_references, 1980});
  bundle.removal = extract.stats;

  std::vector<const std::vector<std::string>*> pub_items;
  for (const auto& a : corpus.articles)
    if (a.document_type == DocType::Article && !a.countries.empty())
      pub_items.push_back(&a.countries);
  CountryTally pub_tally = fractional_tally(pub_items);
  bundle.article_shares = share_table(pub_tally);
  bundle.threshold_countries =
      country_threshold_filter(pub_tally, config.country_threshold_pct);

  std::vector<const std::vector<std::string>*> ref_items;
  ref_items.reserve(extract.refs.size());
  for (const auto& r : extract.refs)
    ref_items.push_back(&corpus.articles[r.cited_index].countries);
  bundle.reference_shares = share_table(fractional_tally(ref_items));

  bundle.ref_series = yearly_share_series(extract.refs, corpus);
  bundle.pub_series = publication_share_series(corpus);

  for (const auto& country : config.ci_countries) {
    auto it = bundle.ref_series.by_country.find(country);
    if (it == bundle.ref_series.by_country.end()) continue;
    for (const auto& [year, cell] : it->second) {
      const auto& totals = bundle.ref_series.totals.at(year);
      double s, n;
      if (config.ci_counting_mode == CountingMode::Full) {
        s = static_cast<double>(cell.full_count);
        n = static_cast<double>(totals.full_count);
      } else {
        s = cell.fractional_count;
        n = totals.fractional_count;
      }
      if (n < 1.0) continue;
      bundle.ci_series[country][year] = proportion_ci(s, n, config.ci_level);
    }
  }

  RatioSeries ratios =
      lagged_ratio_series(bundle.ref_series, bundle.pub_series, config.lag_years,
                          &bundle.threshold_countries);
  bundle.ratio_series = std::move(ratios.by_country);
  bundle.ratio_omitted = ratios.omitted;
  {
    RatioSeries for_summary;
    for_summary.by_country = bundle.ratio_series;
    bundle.ratio_summary = ratio_summary(for_summary);
  }

  for (const auto& country : bundle.threshold_countries) {
    DomesticSeries series =
        domestic_ratio(country, extract.refs, corpus, bundle.pub_series,
                       config.domestic_citing_mode, config.lag_years);
    if (!series.points.empty()) {
      std::map<int, double> ratio_only;
      for (const auto& [year, p] : series.points) ratio_only[year] = p.ratio;
      bundle.domestic_smoothed[country] =
          moving_average(ratio_only, config.ma_window);
    }
    bundle.domestic[country] = std::move(series);
  }
}

}  // namespace

IndicatorBundle compute_bundle(const Corpus& corpus, const RunConfig& config) {
  IndicatorBundle bundle;

  CitationCounts counts = invert_citations(corpus, config.citing_window());
  CellPartition cells = cell_partition(corpus);
  EliteSet elite =
      elite_select(cells, counts, corpus, config.elite_fraction, config.tie_policy);

  bundle.elite_ids.reserve(elite.elite_indices.size());
  for (std::uint32_t idx : elite.elite_indices)
    bundle.elite_ids.push_back(corpus.articles[idx].id);
  std::sort(bundle.elite_ids.begin(), bundle.elite_ids.end());
  bundle.cell_thresholds = elite.cell_thresholds;

  fill_from_elite(bundle, elite, corpus, config);
  return bundle;
}

void write_ingest_artifacts(const Corpus& corpus, const std::string& hash,
                            const std::string& out_dir) {
  write_file((fs::path(out_dir) / artifact::kCorpusResolved).string(),
             serialize_corpus(corpus));

  const IngestStats& st = corpus.ingest_stats;
  json j;
  j["config_hash"] = hash;
  j["total_lines"] = st.total_lines;
  j["accepted"] = st.accepted;
  j["rejected"] = st.rejected();
  j["repaired"] = st.repaired;
  json rejects = json::array();
  for (const auto& r : st.rejects)
    rejects.push_back({{"line", r.line_number}, {"reason", reject_reason_name(r.reason)}});
  j["rejects"] = rejects;
  j["dangling_ids"] = st.dangling_ids;
  j["resolved_by_key"] = st.resolved_by_key;
  j["ambiguous_keys"] = st.ambiguous_keys;
  j["unmatched_keys"] = st.unmatched_keys;
  write_file((fs::path(out_dir) / artifact::kIngestStats).string(), j.dump(2) + "\n");
}

void write_elite_artifacts(const EliteSet& elite, const Corpus& corpus,
                           const std::string& hash, const std::string& out_dir) {
  write_file((fs::path(out_dir) / artifact::kEliteTable).string(),
             elite_table(elite, corpus));

  TableWriter t(hash, "category,year,cell_size,elite_threshold");
  for (const auto& [key, threshold] : elite.cell_thresholds) {
    t.row({{key.first, false},
           {std::to_string(key.second), false},
           {std::to_string(elite.cell_sizes.at(key)), false},
           {std::to_string(threshold), false}});
  }
  t.write(out_dir, artifact::kCellThresholds);
}

void write_share_artifacts(const IndicatorBundle& bundle, const RunConfig& config,
                           const std::string& hash, const std::string& out_dir) {
  write_share_table(bundle.article_shares, hash, out_dir, artifact::kTable1);
  write_share_table(bundle.reference_shares, hash, out_dir, artifact::kTable2);

  const bool with_ci = !config.ci_countries.empty();
  std::string header = "country,year,full_count,fractional_count,share_pct";
  if (with_ci) header += ",ci_lower,ci_point,ci_upper";
  TableWriter t(hash, header);
  for (const auto& country : bundle.threshold_countries) {
    auto it = bundle.ref_series.by_country.find(country);
    if (it == bundle.ref_series.by_country.end()) continue;
    for (const auto& [year, cell] : it->second) {
      std::vector<std::pair<std::string, bool>> cells = {
          {country, false},
          {std::to_string(year), false},
          {std::to_string(cell.full_count), false},
          {num(cell.fractional_count), true},
          {num(cell.share_pct), true}};
      if (with_ci) {
        const ConfidenceInterval* ci = nullptr;
        auto cit = bundle.ci_series.find(country);
        if (cit != bundle.ci_series.end()) {
          auto yit = cit->second.find(year);
          if (yit != cit->second.end()) ci = &yit->second;
        }
        if (ci) {
          cells.push_back({num(ci->lower), true});
          cells.push_back({num(ci->point), true});
          cells.push_back({num(ci->upper), true});
        } else {
          cells.push_back({"", false});
          cells.push_back({"", false});
          cells.push_back({"", false});
        }
      }
      t.row(cells);
    }
  }
  t.write(out_dir, artifact::kFig1);

  write_file((fs::path(out_dir) / artifact::kRemovalStats).string(),
             removal_json(bundle.removal).dump(2) + "\n");
}

void write_ratio_artifacts(const IndicatorBundle& bundle, const std::string& hash,
                           const std::string& out_dir) {
  TableWriter fig2(hash, "country,year,ratio");
  for (const auto& [country, series] : bundle.ratio_series)
    for (const auto& [year, ratio] : series)
      fig2.row({{country, false}, {std::to_string(year), false}, {num(ratio), true}});
  fig2.write(out_dir, artifact::kFig2);

  TableWriter t3(hash, "country,mean,rank_mean,sd,rank_sd,delta,rank_delta,class");
  for (const auto& r : bundle.ratio_summary) {
    t3.row({{r.country, false},
            {num(r.mean), true},
            {std::to_string(r.rank_mean), false},
            {r.sd_defined ? num(r.sd) : "", true},
            {std::to_string(r.rank_sd), false},
            {num(r.delta), true},
            {std::to_string(r.rank_delta), false},
            {performer_class_name(r.cls), false}});
  }
  t3.write(out_dir, artifact::kTable3);
}

void write_domestic_artifacts(const IndicatorBundle& bundle, const std::string& hash,
                              const std::string& out_dir) {
  TableWriter t4(hash, "country,year,domestic_share_pct,pub_share_pct,ratio");
  for (const auto& [country, series] : bundle.domestic) {
    for (const auto& [year, p] : series.points) {
      t4.row({{country, false},
              {std::to_string(year), false},
              {num(100.0 * p.domestic_share), true},
              {num(100.0 * p.pub_share), true},
              {num(p.ratio), true}});
    }
  }
  t4.write(out_dir, artifact::kTable4);

  TableWriter fig3(hash, "country,year,ratio_ma");
  for (const auto& [country, series] : bundle.domestic_smoothed)
    for (const auto& [year, v] : series)
      fig3.row({{country, false}, {std::to_string(year), false}, {num(v), true}});
  fig3.write(out_dir, artifact::kFig3);
}

int cmd_ingest_check(const RunConfig& config, const std::string& input_path,
                     const std::string& out_dir) {
  if (!fs::exists(input_path)) {
    std::cerr << "error: input file not found: " << input_path << "\n";
    return kExitMissingInput;
  }
  std::string text;
  try {
    text = read_file(input_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitMissingInput;
  }
  fs::create_directories(out_dir);
  Corpus corpus = parse_corpus(text, config.year_window);
  resolve_references(corpus);
  write_ingest_artifacts(corpus, config_hash(config), out_dir);
  std::cout << "ingest: " << corpus.ingest_stats.accepted << " accepted, "
            << corpus.ingest_stats.rejected() << " rejected, "
            << corpus.ingest_stats.repaired << " repaired\n";
  return kExitOk;
}

int cmd_elite(const RunConfig& config, const std::string& out_dir) {
  if (!require_artifact(out_dir, artifact::kCorpusResolved))
    return kExitMissingArtifact;
  LoadedCorpus loaded = load_resolved_corpus(config, out_dir);
  if (!loaded.ok) return kExitFatal;

  CitationCounts counts = invert_citations(loaded.corpus, config.citing_window());
  CellPartition cells = cell_partition(loaded.corpus);
  EliteSet elite = elite_select(cells, counts, loaded.corpus,
                                config.elite_fraction, config.tie_policy);
  write_elite_artifacts(elite, loaded.corpus, config_hash(config), out_dir);
  std::cout << "elite: " << elite.elite_indices.size() << " articles across "
            << elite.cell_thresholds.size() << " cells\n";
  return kExitOk;
}

namespace {

int run_downstream_stage(const RunConfig& config, const std::string& out_dir,
                         int which) {  // 0 shares, 1 ratios, 2 domestic
  if (!require_artifact(out_dir, artifact::kCorpusResolved))
    return kExitMissingArtifact;
  if (!require_artifact(out_dir, artifact::kEliteTable))
    return kExitMissingArtifact;
  LoadedCorpus loaded = load_resolved_corpus(config, out_dir);
  if (!loaded.ok) return kExitFatal;

  std::string table =
      read_file((fs::path(out_dir) / artifact::kEliteTable).string());
  EliteSet elite = elite_from_ids(parse_elite_table_ids(table), loaded.corpus);

  IndicatorBundle bundle;
  fill_from_elite(bundle, elite, loaded.corpus, config);
  const std::string hash = config_hash(config);
  switch (which) {
    case 0: write_share_artifacts(bundle, config, hash, out_dir); break;
    case 1: write_ratio_artifacts(bundle, hash, out_dir); break;
    case 2: write_domestic_artifacts(bundle, hash, out_dir); break;
  }
  return kExitOk;
}

}  // namespace

int cmd_shares(const RunConfig& config, const std::string& out_dir) {
  return run_downstream_stage(config, out_dir, 0);
}
int cmd_ratios(const RunConfig& config, const std::string& out_dir) {
  return run_downstream_stage(config, out_dir, 1);
}
int cmd_domestic(const RunConfig& config, const std::string& out_dir) {
  return run_downstream_stage(config, out_dir, 2);
}

int cmd_synth(const SynthParams& params, const std::string& out_path) {
  SynthResult result = generate_corpus(params);
  fs::path p(out_path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  write_file(out_path, serialize_corpus(result.corpus));
  std::cout << "synth: " << result.corpus.articles.size() << " records, "
            << result.stats.generated_refs << " references ("
            << result.stats.shortfall << " short), seed " << params.seed << "\n";
  return kExitOk;
}

int cmd_all(const RunConfig& config, const std::string& input_path,
            const std::string& out_dir) {
  if (!fs::exists(input_path)) {
    std::cerr << "error: input file not found: " << input_path << "\n";
    return kExitMissingInput;
  }
  std::string text;
  try {
    text = read_file(input_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitMissingInput;
  }
  fs::create_directories(out_dir);

  json timings;
  double t0 = now_ms();
  Corpus corpus = parse_corpus(text, config.year_window);
  resolve_references(corpus);
  timings["ingest_ms"] = now_ms() - t0;

  const std::string hash = config_hash(config);
  const std::string corpus_hash = hex64(fnv1a64(text));

  double t1 = now_ms();
  write_ingest_artifacts(corpus, hash, out_dir);
  timings["ingest_artifacts_ms"] = now_ms() - t1;

  double t2 = now_ms();
  CitationCounts counts = invert_citations(corpus, config.citing_window());
  CellPartition cells = cell_partition(corpus);
  EliteSet elite =
      elite_select(cells, counts, corpus, config.elite_fraction, config.tie_policy);
  timings["elite_ms"] = now_ms() - t2;

  double t3 = now_ms();
  IndicatorBundle bundle;
  bundle.elite_ids.reserve(elite.elite_indices.size());
  for (std::uint32_t idx : elite.elite_indices)
    bundle.elite_ids.push_back(corpus.articles[idx].id);
  std::sort(bundle.elite_ids.begin(), bundle.elite_ids.end());
  bundle.cell_thresholds = elite.cell_thresholds;
  fill_from_elite(bundle, elite, corpus, config);
  timings["indicators_ms"] = now_ms() - t3;

  double t4 = now_ms();
  write_elite_artifacts(elite, corpus, hash, out_dir);
  write_share_artifacts(bundle, config, hash, out_dir);
  write_ratio_artifacts(bundle, hash, out_dir);
  write_domestic_artifacts(bundle, hash, out_dir);
  timings["reports_ms"] = now_ms() - t4;

  json meta;
  meta["config"] = json::parse(canonical_config_json(config));
  meta["config_hash"] = hash;
  meta["corpus_hash"] = corpus_hash;
  meta["input_path"] = input_path;
  meta["articles"] = corpus.articles.size();
  meta["elite_articles"] = bundle.elite_ids.size();
  meta["surviving_refs"] = bundle.removal.surviving;
  meta["timings"] = timings;
  {
    std::time_t now = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    meta["timestamp"] = buf;
  }
  write_file((fs::path(out_dir) / artifact::kRunMeta).string(), meta.dump(2) + "\n");
  return kExitOk;
}

}  // namespace refgeo
