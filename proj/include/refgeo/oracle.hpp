#pragma once

#include "refgeo/bundle.hpp"
#include "refgeo/config.hpp"
#include "refgeo/corpus.hpp"

namespace refgeo {

// Serial reference implementation: recomputes the whole indicator bundle with
// plain nested loops over std::map/std::set, sharing no computation code with
// the parallel pipeline. Intended for corpora up to ~50k articles; used by
// the test and acceptance suites and by the benchmark as the baseline.
IndicatorBundle oracle_indicators(const Corpus& corpus, const RunConfig& config);

}  // namespace refgeo
