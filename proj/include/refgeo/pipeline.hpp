#pragma once

#include <string>

#include "refgeo/bundle.hpp"
#include "refgeo/config.hpp"
#include "refgeo/corpus.hpp"

namespace refgeo {

// Process exit codes shared by all subcommands.
enum ExitCode : int {
  kExitOk = 0,
  kExitFatal = 1,
  kExitMissingInput = 2,
  kExitBadConfig = 3,
  kExitMissingArtifact = 4,
};

// Artifact names inside the output directory.
namespace artifact {
inline constexpr const char* kCorpusResolved = "corpus_resolved.jsonl";
inline constexpr const char* kIngestStats = "ingest_stats.json";
inline constexpr const char* kEliteTable = "elite.tsv";
inline constexpr const char* kCellThresholds = "cell_thresholds.csv";
inline constexpr const char* kTable1 = "table1.csv";
inline constexpr const char* kTable2 = "table2.csv";
inline constexpr const char* kFig1 = "fig1_series.csv";
inline constexpr const char* kFig2 = "fig2_ratios.csv";
inline constexpr const char* kTable3 = "table3_summary.csv";
inline constexpr const char* kFig3 = "fig3_smoothed.csv";
inline constexpr const char* kTable4 = "table4_domestic.csv";
inline constexpr const char* kRemovalStats = "removal_stats.json";
inline constexpr const char* kRunMeta = "run_meta.json";
}  // namespace artifact

// Full analysis of a resolved corpus: elite selection, cleaned reference
// extraction, share tables, series, ratios, summaries, domestic
// decomposition. Pure; parallel kernels inside, output independent of the
// worker count.
IndicatorBundle compute_bundle(const Corpus& corpus, const RunConfig& config);

// Stage runners behind the CLI subcommands. Each reads its upstream
// artifacts from out_dir, writes its own artifacts there, and returns an
// ExitCode; diagnostics go to stderr.
int cmd_ingest_check(const RunConfig& config, const std::string& input_path,
                     const std::string& out_dir);
int cmd_elite(const RunConfig& config, const std::string& out_dir);
int cmd_shares(const RunConfig& config, const std::string& out_dir);
int cmd_ratios(const RunConfig& config, const std::string& out_dir);
int cmd_domestic(const RunConfig& config, const std::string& out_dir);
int cmd_synth(const SynthParams& params, const std::string& out_path);
int cmd_all(const RunConfig& config, const std::string& input_path,
            const std::string& out_dir);

// Table writers (shared by `all` and the stage commands so both emit
// identical bytes). Every table starts with "# config_hash: <hex>".
void write_ingest_artifacts(const Corpus& corpus, const std::string& hash,
                            const std::string& out_dir);
void write_elite_artifacts(const EliteSet& elite, const Corpus& corpus,
                           const std::string& hash, const std::string& out_dir);
void write_share_artifacts(const IndicatorBundle& bundle, const RunConfig& config,
                           const std::string& hash, const std::string& out_dir);
void write_ratio_artifacts(const IndicatorBundle& bundle, const std::string& hash,
                           const std::string& out_dir);
void write_domestic_artifacts(const IndicatorBundle& bundle, const std::string& hash,
                              const std::string& out_dir);

}  // namespace refgeo
