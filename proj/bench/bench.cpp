// Benchmark: OpenMP pipeline vs the serial reference implementation on seeded
// corpora, plus a parse-throughput row. Verifies equivalence on the smallest
// size before timing.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "refgeo/oracle.hpp"
#include "refgeo/pipeline.hpp"
#include "refgeo/synth.hpp"

using namespace refgeo;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pipeline vs serial-reference benchmark"};
  std::vector<std::uint64_t> sizes = {2000, 10000, 50000};
  std::uint64_t seed = 42;
  int threads = 0;
  bool skip_verify = false;
  app.add_option("--sizes", sizes, "corpus sizes to run");
  app.add_option("--seed", seed, "generator seed");
  app.add_option("--threads", threads, "OpenMP threads (0 = default)");
  app.add_flag("--skip-verify", skip_verify, "skip the equivalence check");
  CLI11_PARSE(app, argc, argv);

  if (threads > 0) omp_set_num_threads(threads);

  RunConfig config;
  config.ci_countries = {"US", "CN"};

  std::printf("%10s %12s %14s %14s %8s\n", "articles", "refs", "pipeline_s",
              "reference_s", "speedup");
  bool verified = false;
  for (std::uint64_t n : sizes) {
    SynthParams params;
    params.seed = seed;
    params.n_articles = n;
    params.mean_refs = 8;
    params.attachment_exponent = 1.0;
    SynthResult synth = generate_corpus(params);
    resolve_references(synth.corpus);

    if (!skip_verify && !verified) {
      auto a = compute_bundle(synth.corpus, config);
      auto b = oracle_indicators(synth.corpus, config);
      auto diffs = compare_bundles(a, b, 1e-9);
      if (!diffs.empty()) {
        std::fprintf(stderr, "equivalence check failed (%zu diffs), first: %s\n",
                     diffs.size(), diffs[0].c_str());
        return 1;
      }
      verified = true;
    }

    auto t0 = std::chrono::steady_clock::now();
    auto bundle = compute_bundle(synth.corpus, config);
    double pipeline_s = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    auto reference = oracle_indicators(synth.corpus, config);
    double reference_s = seconds_since(t0);

    std::printf("%10llu %12llu %14.3f %14.3f %8.2f\n",
                static_cast<unsigned long long>(n),
                static_cast<unsigned long long>(synth.stats.generated_refs),
                pipeline_s, reference_s, reference_s / pipeline_s);
  }
  return 0;
}
