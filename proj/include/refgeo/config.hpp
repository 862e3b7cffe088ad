#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "refgeo/citegraph.hpp"
#include "refgeo/indicators.hpp"
#include "refgeo/synth.hpp"

namespace refgeo {

struct ConfigError : std::runtime_error {
  std::string key_path;
  ConfigError(std::string path, const std::string& message)
      : std::runtime_error(path + ": " + message), key_path(std::move(path)) {}
};

enum class CountingMode : std::uint8_t { Full, Fractional };

struct RunConfig {
  double elite_fraction = 0.01;
  int lag_years = 3;
  double ci_level = 0.95;
  int ma_window = 3;
  TiePolicy tie_policy = TiePolicy::IncludeTies;
  DomesticMode domestic_citing_mode = DomesticMode::AllElite;
  CountingMode ci_counting_mode = CountingMode::Full;
  double country_threshold_pct = 0.0;
  std::vector<std::string> ci_countries;
  bool exclude_self_references = false;
  std::optional<int> citing_window_min;
  std::optional<int> citing_window_max;
  ValidityWindow year_window;
  SynthParams synth;

  CitingWindow citing_window() const;

  // Throws ConfigError on out-of-range values.
  void validate() const;
};

// Strict parse of the JSON config document: unknown keys and wrong types are
// ConfigError with the offending key path. Missing file -> ConfigError.
RunConfig load_config_file(const std::string& path);
RunConfig parse_config_json(const std::string& json_text);

// Canonical serialization (sorted keys, fixed formatting); its hash stamps
// every report the run emits. Worker count never enters the hash.
std::string canonical_config_json(const RunConfig& config);
std::string config_hash(const RunConfig& config);

}  // namespace refgeo
