#include "refgeo/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "json.hpp"
#include "refgeo/textio.hpp"

namespace refgeo {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw ConfigError(path, message);
}

void expect_keys(const json& obj, const std::string& path,
                 const std::set<std::string>& allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key()))
      fail(path.empty() ? it.key() : path + "." + it.key(), "unknown key");
  }
}

double get_number(const json& obj, const std::string& path, const char* key,
                  double fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number()) fail(path + key, "expected a number");
  return it->get<double>();
}

int get_int(const json& obj, const std::string& path, const char* key,
            int fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number_integer()) fail(path + key, "expected an integer");
  return it->get<int>();
}

bool get_bool(const json& obj, const std::string& path, const char* key,
              bool fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_boolean()) fail(path + key, "expected a boolean");
  return it->get<bool>();
}

std::string get_string(const json& obj, const std::string& path, const char* key,
                       const std::string& fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_string()) fail(path + key, "expected a string");
  return it->get<std::string>();
}

}  // namespace

CitingWindow RunConfig::citing_window() const {
  CitingWindow w;
  if (citing_window_min) w.min_year = *citing_window_min;
  if (citing_window_max) w.max_year = *citing_window_max;
  return w;
}

void RunConfig::validate() const {
  if (!(elite_fraction > 0.0) || elite_fraction > 1.0)
    fail("elite_fraction", "must be in (0, 1]");
  if (lag_years < 0) fail("lag_years", "must be >= 0");
  if (!(ci_level > 0.0 && ci_level < 1.0)) fail("ci_level", "must be in (0, 1)");
  if (ma_window < 1) fail("ma_window", "must be >= 1");
  if (country_threshold_pct < 0.0) fail("country_threshold_pct", "must be >= 0");
  if (year_window.min_year > year_window.max_year)
    fail("year_window", "min must be <= max");
  if (citing_window_min && citing_window_max && *citing_window_min > *citing_window_max)
    fail("citing_window", "min must be <= max");
  try {
    synth.validate();
  } catch (const std::invalid_argument& e) {
    fail("synth", e.what());
  }
}

RunConfig parse_config_json(const std::string& json_text) {
  json j = json::parse(json_text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) fail("(document)", "not valid JSON");
  if (!j.is_object()) fail("(document)", "top level must be an object");

  expect_keys(j, "",
              {"elite_fraction", "lag_years", "ci_level", "ma_window",
               "tie_policy", "domestic_citing_mode", "ci_counting_mode",
               "country_threshold_pct", "ci_countries", "exclude_self_references",
               "citing_window", "year_window", "synth"});

  RunConfig c;
  c.elite_fraction = get_number(j, "", "elite_fraction", c.elite_fraction);
  c.lag_years = get_int(j, "", "lag_years", c.lag_years);
  c.ci_level = get_number(j, "", "ci_level", c.ci_level);
  c.ma_window = get_int(j, "", "ma_window", c.ma_window);

  std::string tie = get_string(j, "", "tie_policy", "include-ties");
  if (tie == "include-ties") c.tie_policy = TiePolicy::IncludeTies;
  else if (tie == "strict-rank") c.tie_policy = TiePolicy::StrictRank;
  else fail("tie_policy", "expected \"include-ties\" or \"strict-rank\"");

  std::string dm = get_string(j, "", "domestic_citing_mode", "all-elite");
  if (dm == "all-elite") c.domestic_citing_mode = DomesticMode::AllElite;
  else if (dm == "purely-domestic-elite")
    c.domestic_citing_mode = DomesticMode::PurelyDomesticElite;
  else fail("domestic_citing_mode", "expected \"all-elite\" or \"purely-domestic-elite\"");

  std::string cm = get_string(j, "", "ci_counting_mode", "full");
  if (cm == "full") c.ci_counting_mode = CountingMode::Full;
  else if (cm == "fractional") c.ci_counting_mode = CountingMode::Fractional;
  else fail("ci_counting_mode", "expected \"full\" or \"fractional\"");

  c.country_threshold_pct =
      get_number(j, "", "country_threshold_pct", c.country_threshold_pct);
  c.exclude_self_references =
      get_bool(j, "", "exclude_self_references", c.exclude_self_references);

  if (auto it = j.find("ci_countries"); it != j.end()) {
    if (!it->is_array()) fail("ci_countries", "expected an array of strings");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const auto& v = (*it)[i];
      if (!v.is_string())
        fail("ci_countries[" + std::to_string(i) + "]", "expected a string");
      c.ci_countries.push_back(v.get<std::string>());
    }
  }

  if (auto it = j.find("citing_window"); it != j.end() && !it->is_null()) {
    if (!it->is_object()) fail("citing_window", "expected an object or null");
    expect_keys(*it, "citing_window", {"min", "max"});
    if (it->contains("min"))
      c.citing_window_min = get_int(*it, "citing_window.", "min", 0);
    if (it->contains("max"))
      c.citing_window_max = get_int(*it, "citing_window.", "max", 0);
  }

  if (auto it = j.find("year_window"); it != j.end()) {
    if (!it->is_object()) fail("year_window", "expected an object");
    expect_keys(*it, "year_window", {"min", "max"});
    c.year_window.min_year =
        get_int(*it, "year_window.", "min", c.year_window.min_year);
    c.year_window.max_year =
        get_int(*it, "year_window.", "max", c.year_window.max_year);
  }

  if (auto it = j.find("synth"); it != j.end()) {
    if (!it->is_object()) fail("synth", "expected an object");
    expect_keys(*it, "synth",
                {"seed", "n_articles", "year_min", "year_max", "countries",
                 "categories", "mean_refs", "collab_prob", "attachment_exponent",
                 "noise_type_fraction", "missing_country_fraction",
                 "pre1980_ref_fraction"});
    SynthParams& s = c.synth;
    if (auto f = it->find("seed"); f != it->end()) {
      if (!f->is_number_unsigned() && !f->is_number_integer())
        fail("synth.seed", "expected an integer");
      s.seed = f->get<std::uint64_t>();
    }
    if (auto f = it->find("n_articles"); f != it->end()) {
      if (!f->is_number_integer() || f->get<long long>() < 0)
        fail("synth.n_articles", "expected a non-negative integer");
      s.n_articles = f->get<std::uint64_t>();
    }
    s.year_min = get_int(*it, "synth.", "year_min", s.year_min);
    s.year_max = get_int(*it, "synth.", "year_max", s.year_max);
    if (auto f = it->find("countries"); f != it->end()) {
      if (!f->is_array()) fail("synth.countries", "expected an array");
      for (std::size_t i = 0; i < f->size(); ++i) {
        const auto& cw = (*f)[i];
        std::string path = "synth.countries[" + std::to_string(i) + "]";
        if (!cw.is_object()) fail(path, "expected an object");
        expect_keys(cw, path, {"code", "weight"});
        CountryWeight w;
        w.code = get_string(cw, path + ".", "code", "");
        if (w.code.empty()) fail(path + ".code", "expected a country code");
        w.weight = get_number(cw, path + ".", "weight", 1.0);
        s.countries.push_back(std::move(w));
      }
    }
    if (auto f = it->find("categories"); f != it->end()) {
      if (!f->is_array()) fail("synth.categories", "expected an array of strings");
      for (std::size_t i = 0; i < f->size(); ++i) {
        if (!(*f)[i].is_string())
          fail("synth.categories[" + std::to_string(i) + "]", "expected a string");
        s.categories.push_back((*f)[i].get<std::string>());
      }
    }
    s.mean_refs = get_number(*it, "synth.", "mean_refs", s.mean_refs);
    s.collab_prob = get_number(*it, "synth.", "collab_prob", s.collab_prob);
    s.attachment_exponent =
        get_number(*it, "synth.", "attachment_exponent", s.attachment_exponent);
    s.noise_type_fraction =
        get_number(*it, "synth.", "noise_type_fraction", s.noise_type_fraction);
    s.missing_country_fraction = get_number(*it, "synth.", "missing_country_fraction",
                                            s.missing_country_fraction);
    s.pre1980_ref_fraction =
        get_number(*it, "synth.", "pre1980_ref_fraction", s.pre1980_ref_fraction);
  }

  c.validate();
  return c;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("(file)", "cannot read config file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return parse_config_json(text);
}

std::string canonical_config_json(const RunConfig& c) {
  json j;
  j["elite_fraction"] = c.elite_fraction;
  j["lag_years"] = c.lag_years;
  j["ci_level"] = c.ci_level;
  j["ma_window"] = c.ma_window;
  j["tie_policy"] =
      c.tie_policy == TiePolicy::IncludeTies ? "include-ties" : "strict-rank";
  j["domestic_citing_mode"] = c.domestic_citing_mode == DomesticMode::AllElite
                                  ? "all-elite"
                                  : "purely-domestic-elite";
  j["ci_counting_mode"] =
      c.ci_counting_mode == CountingMode::Full ? "full" : "fractional";
  j["country_threshold_pct"] = c.country_threshold_pct;
  j["ci_countries"] = c.ci_countries;
  j["exclude_self_references"] = c.exclude_self_references;
  if (c.citing_window_min || c.citing_window_max) {
    json w = json::object();
    if (c.citing_window_min) w["min"] = *c.citing_window_min;
    if (c.citing_window_max) w["max"] = *c.citing_window_max;
    j["citing_window"] = w;
  } else {
    j["citing_window"] = nullptr;
  }
  j["year_window"] = {{"min", c.year_window.min_year}, {"max", c.year_window.max_year}};

  json s;
  s["seed"] = c.synth.seed;
  s["n_articles"] = c.synth.n_articles;
  s["year_min"] = c.synth.year_min;
  s["year_max"] = c.synth.year_max;
  json pool = json::array();
  for (const auto& cw : c.synth.countries)
    pool.push_back({{"code", cw.code}, {"weight", cw.weight}});
  s["countries"] = pool;
  s["categories"] = c.synth.categories;
  s["mean_refs"] = c.synth.mean_refs;
  s["collab_prob"] = c.synth.collab_prob;
  s["attachment_exponent"] = c.synth.attachment_exponent;
  s["noise_type_fraction"] = c.synth.noise_type_fraction;
  s["missing_country_fraction"] = c.synth.missing_country_fraction;
  s["pre1980_ref_fraction"] = c.synth.pre1980_ref_fraction;
  j["synth"] = s;

  return j.dump();
}

std::string config_hash(const RunConfig& config) {
  return hex64(fnv1a64(canonical_config_json(config)));
}

}  // namespace refgeo
