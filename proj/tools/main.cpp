#include <omp.h>

#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "refgeo/config.hpp"
#include "refgeo/pipeline.hpp"

using namespace refgeo;

namespace {

int resolve_workers(int flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("REFGEO_WORKERS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 0;  // leave the OpenMP default
}

RunConfig load_config_or_exit(const std::string& path) {
  try {
    if (path.empty()) {
      RunConfig c;
      c.validate();
      return c;
    }
    return load_config_file(path);
  } catch (const ConfigError& e) {
    std::cerr << "config error at '" << e.key_path << "': " << e.what() << "\n";
    std::exit(kExitBadConfig);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Citation-archive geography: elite-article reference analysis"};
  app.require_subcommand(1);

  std::string config_path, input_path, out_dir, synth_out;
  int workers = 0;

  auto add_common = [&](CLI::App* cmd, bool with_input) {
    cmd->add_option("-c,--config", config_path, "JSON config file");
    cmd->add_option("--workers", workers,
                    "worker threads (0 = REFGEO_WORKERS env or all cores); "
                    "never affects output bytes");
    if (with_input)
      cmd->add_option("-i,--input", input_path, "newline-delimited corpus file")
          ->required();
    cmd->add_option("-o,--out-dir", out_dir, "output directory")->required();
  };

  CLI::App* c_ingest = app.add_subcommand(
      "ingest-check", "Parse, validate, and resolve a corpus; write the "
                      "normalized corpus and ingest stats");
  add_common(c_ingest, true);

  CLI::App* c_elite = app.add_subcommand(
      "elite", "Select top-fraction cited articles per (category, year) cell");
  add_common(c_elite, false);

  CLI::App* c_shares = app.add_subcommand(
      "shares", "Clean elite references and write share tables and series");
  add_common(c_shares, false);

  CLI::App* c_ratios =
      app.add_subcommand("ratios", "Lagged share ratios and summary table");
  add_common(c_ratios, false);

  CLI::App* c_domestic = app.add_subcommand(
      "domestic", "Domestic reference decomposition and smoothed series");
  add_common(c_domestic, false);

  CLI::App* c_all =
      app.add_subcommand("all", "Run every stage and write the full report set");
  add_common(c_all, true);

  CLI::App* c_synth =
      app.add_subcommand("synth", "Generate a seeded synthetic corpus");
  c_synth->add_option("-c,--config", config_path, "JSON config file");
  c_synth->add_option("--out", synth_out, "output corpus file")->required();
  std::uint64_t f_seed = 0, f_n = 0;
  int f_ymin = 0, f_ymax = 0;
  double f_mean = -1, f_collab = -1, f_attach = -1, f_noise = -1, f_missing = -1,
         f_pre = -1;
  auto* o_seed = c_synth->add_option("--seed", f_seed, "generator seed");
  auto* o_n = c_synth->add_option("--n", f_n, "number of records");
  auto* o_ymin = c_synth->add_option("--year-min", f_ymin, "first publication year");
  auto* o_ymax = c_synth->add_option("--year-max", f_ymax, "last publication year");
  auto* o_mean = c_synth->add_option("--mean-refs", f_mean, "mean references per record");
  auto* o_collab = c_synth->add_option("--collab", f_collab, "multi-country probability");
  auto* o_attach =
      c_synth->add_option("--attachment", f_attach, "attachment exponent");
  auto* o_noise =
      c_synth->add_option("--noise-type", f_noise, "non-article record fraction");
  auto* o_missing = c_synth->add_option("--missing-country", f_missing,
                                        "missing-country record fraction");
  auto* o_pre = c_synth->add_option("--pre1980", f_pre, "pre-1980 reference fraction");

  CLI11_PARSE(app, argc, argv);

  int nt = resolve_workers(workers);
  if (nt > 0) omp_set_num_threads(nt);

  RunConfig config = load_config_or_exit(config_path);

  try {
    if (c_ingest->parsed()) return cmd_ingest_check(config, input_path, out_dir);
    if (c_elite->parsed()) return cmd_elite(config, out_dir);
    if (c_shares->parsed()) return cmd_shares(config, out_dir);
    if (c_ratios->parsed()) return cmd_ratios(config, out_dir);
    if (c_domestic->parsed()) return cmd_domestic(config, out_dir);
    if (c_all->parsed()) return cmd_all(config, input_path, out_dir);
    if (c_synth->parsed()) {
      SynthParams params = config.synth;
      if (*o_seed) params.seed = f_seed;
      if (*o_n) params.n_articles = f_n;
      if (*o_ymin) params.year_min = f_ymin;
      if (*o_ymax) params.year_max = f_ymax;
      if (*o_mean) params.mean_refs = f_mean;
      if (*o_collab) params.collab_prob = f_collab;
      if (*o_attach) params.attachment_exponent = f_attach;
      if (*o_noise) params.noise_type_fraction = f_noise;
      if (*o_missing) params.missing_country_fraction = f_missing;
      if (*o_pre) params.pre1980_ref_fraction = f_pre;
      try {
        params.validate();
      } catch (const std::invalid_argument& e) {
        std::cerr << "config error at 'synth': " << e.what() << "\n";
        return kExitBadConfig;
      }
      return cmd_synth(params, synth_out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFatal;
  }
  return kExitFatal;
}
