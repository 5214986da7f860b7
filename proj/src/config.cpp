// Copyright 2026 The mushra-stereo Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mushra/config.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "mushra/error.hpp"
#include "mushra/seeds.hpp"

namespace mushra::app {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string under(const std::string& dir, const std::string& name) { return (fs::path(dir) / name).string(); }

}  // namespace

std::string RunConfig::manifest_path() const { return under(paths.out_dir, "manifest.jsonl"); }
std::string RunConfig::stimuli_dir() const { return under(paths.out_dir, "stimuli"); }
std::string RunConfig::plan_path() const { return under(paths.out_dir, "plan.json"); }
std::string RunConfig::database_path() const {
  return paths.database.empty() ? under(paths.out_dir, "sessions.db") : paths.database;
}
std::string RunConfig::scores_path() const {
  return paths.scores.empty() ? under(paths.out_dir, "scores.csv") : paths.scores;
}
std::string RunConfig::analysis_dir() const { return under(paths.out_dir, "analysis"); }

stats::StatsConfig RunConfig::effective_stats() const {
  auto c = stats.config;
  c.bootstrap.seed = stats.seed ? *stats.seed : derive_seed(seed, "bootstrap");
  return c;
}

plan::PlanRequest RunConfig::default_plan() {
  plan::PlanRequest p;
  p.training = {{"training1", plan::Series::kSHmix}, {"training2", plan::Series::kQNmix}};
  return p;
}

namespace {

json items_json(const std::map<artifact::ArtifactKind, std::vector<std::string>>& items) {
  json j = json::object();
  for (const auto& [kind, list] : items) j[artifact::to_string(kind)] = list;
  return j;
}

}  // namespace

std::string config_to_json(const RunConfig& c) {
  json j;
  j["paths"] = {{"items_dir", c.paths.items_dir},   {"out_dir", c.paths.out_dir},
                {"database", c.paths.database},     {"scores", c.paths.scores},
                {"column_mapping", c.paths.column_mapping}, {"static_dir", c.paths.static_dir}};
  j["seed"] = c.seed;
  const auto& e = c.engine;
  j["generation"] = {
      {"fft_size", e.stft.fft_size},
      {"hop_size", e.stft.hop_size},
      {"window", audio::to_string(e.stft.window)},
      {"bark_resolution", e.bark_resolution},
      {"ms_gain", e.ms_gain},
      {"calibrate_qn", e.calibrate_qn},
      {"masking",
       {{"lower_slope_db_per_bark", e.masking.lower_slope_db_per_bark},
        {"upper_slope_db_per_bark", e.masking.upper_slope_db_per_bark},
        {"masking_offset_db", e.masking.masking_offset_db},
        {"quiet_offset_db", e.masking.quiet_offset_db},
        {"quiet_ceiling_db", e.masking.quiet_ceiling_db},
        {"activity_floor_db", e.masking.activity_floor_db},
        {"nmr_floor_db", e.masking.nmr_floor_db}}}};
  json series = json::array();
  for (auto s : c.plan.series) series.push_back(plan::to_string(s));
  json series_items = json::object();
  for (const auto& [s, list] : c.plan.series_items) series_items[plan::to_string(s)] = list;
  json training = json::array();
  for (const auto& t : c.plan.training) training.push_back({{"item", t.item}, {"series", plan::to_string(t.series)}});
  j["plan"] = {{"series", series}, {"items", items_json(c.plan.items)}, {"series_items", series_items},
               {"training", training}};
  j["serve"] = {{"host", c.serve.host}, {"port", c.serve.port}};
  j["simulation"] = {{"listeners", c.simulation.listeners}, {"noise_sd", c.simulation.noise_sd}};
  const auto& st = c.stats.config;
  j["stats"] = {{"bootstrap_resamples", st.bootstrap.resamples},
                {"confidence_level", st.bootstrap.level},
                {"ci_method", stats::to_string(st.bootstrap.method)},
                {"star_thresholds", st.stars.levels},
                {"seed", c.stats.seed ? json(*c.stats.seed) : json(nullptr)}};
  return j.dump(2) + "\n";
}

namespace {

void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw InputError("config: '" + where + "' must be an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, _] : j.items()) {
    if (ok.count(key) == 0) throw InputError("config: unknown key '" + where + "." + key + "'");
  }
}

template <class T>
void read(const json& j, const char* key, T& field) {
  if (j.contains(key) && !j.at(key).is_null()) field = j.at(key).get<T>();
}

std::string resolve(const std::string& base, const std::string& p) {
  if (p.empty() || base.empty() || fs::path(p).is_absolute()) return p;
  return (fs::path(base) / p).lexically_normal().string();
}

}  // namespace

RunConfig config_from_json(const std::string& text, const std::string& base_dir) {
  RunConfig c;
  try {
    const auto j = json::parse(text);
    check_keys(j, "", {"paths", "seed", "generation", "plan", "serve", "simulation", "stats"});
    if (j.contains("paths")) {
      const auto& p = j["paths"];
      check_keys(p, "paths", {"items_dir", "out_dir", "database", "scores", "column_mapping", "static_dir"});
      read(p, "items_dir", c.paths.items_dir);
      read(p, "out_dir", c.paths.out_dir);
      read(p, "database", c.paths.database);
      read(p, "scores", c.paths.scores);
      read(p, "column_mapping", c.paths.column_mapping);
      read(p, "static_dir", c.paths.static_dir);
    }
    read(j, "seed", c.seed);
    if (j.contains("generation")) {
      const auto& g = j["generation"];
      check_keys(g, "generation",
                 {"fft_size", "hop_size", "window", "bark_resolution", "ms_gain", "calibrate_qn", "masking"});
      read(g, "fft_size", c.engine.stft.fft_size);
      read(g, "hop_size", c.engine.stft.hop_size);
      if (g.contains("window")) c.engine.stft.window = audio::window_from_string(g["window"].get<std::string>());
      read(g, "bark_resolution", c.engine.bark_resolution);
      read(g, "ms_gain", c.engine.ms_gain);
      read(g, "calibrate_qn", c.engine.calibrate_qn);
      if (g.contains("masking")) {
        const auto& m = g["masking"];
        check_keys(m, "generation.masking",
                   {"lower_slope_db_per_bark", "upper_slope_db_per_bark", "masking_offset_db", "quiet_offset_db",
                    "quiet_ceiling_db", "activity_floor_db", "nmr_floor_db"});
        auto& mc = c.engine.masking;
        read(m, "lower_slope_db_per_bark", mc.lower_slope_db_per_bark);
        read(m, "upper_slope_db_per_bark", mc.upper_slope_db_per_bark);
        read(m, "masking_offset_db", mc.masking_offset_db);
        read(m, "quiet_offset_db", mc.quiet_offset_db);
        read(m, "quiet_ceiling_db", mc.quiet_ceiling_db);
        read(m, "activity_floor_db", mc.activity_floor_db);
        read(m, "nmr_floor_db", mc.nmr_floor_db);
      }
    }
    if (j.contains("plan")) {
      const auto& p = j["plan"];
      check_keys(p, "plan", {"series", "items", "series_items", "training"});
      if (p.contains("series")) {
        c.plan.series.clear();
        for (const auto& s : p["series"]) c.plan.series.push_back(plan::series_from_string(s.get<std::string>()));
      }
      if (p.contains("items")) {
        c.plan.items.clear();
        for (const auto& [kind, list] : p["items"].items()) {
          c.plan.items[artifact::kind_from_string(kind)] = list.get<std::vector<std::string>>();
        }
      }
      if (p.contains("series_items")) {
        c.plan.series_items.clear();
        for (const auto& [s, list] : p["series_items"].items()) {
          c.plan.series_items[plan::series_from_string(s)] = list.get<std::vector<std::string>>();
        }
      }
      if (p.contains("training")) {
        c.plan.training.clear();
        for (const auto& t : p["training"]) {
          check_keys(t, "plan.training[]", {"item", "series"});
          c.plan.training.push_back(
              {t.at("item").get<std::string>(), plan::series_from_string(t.at("series").get<std::string>())});
        }
      }
    }
    if (j.contains("serve")) {
      check_keys(j["serve"], "serve", {"host", "port"});
      read(j["serve"], "host", c.serve.host);
      read(j["serve"], "port", c.serve.port);
    }
    if (j.contains("simulation")) {
      check_keys(j["simulation"], "simulation", {"listeners", "noise_sd"});
      read(j["simulation"], "listeners", c.simulation.listeners);
      read(j["simulation"], "noise_sd", c.simulation.noise_sd);
    }
    if (j.contains("stats")) {
      const auto& s = j["stats"];
      check_keys(s, "stats", {"bootstrap_resamples", "confidence_level", "ci_method", "star_thresholds", "seed"});
      auto& sc = c.stats.config;
      read(s, "bootstrap_resamples", sc.bootstrap.resamples);
      read(s, "confidence_level", sc.bootstrap.level);
      if (s.contains("ci_method")) sc.bootstrap.method = stats::ci_method_from_string(s["ci_method"].get<std::string>());
      read(s, "star_thresholds", sc.stars.levels);
      if (s.contains("seed") && !s["seed"].is_null()) c.stats.seed = s["seed"].get<std::uint64_t>();
    }
    c.engine.stft.validate();
  } catch (const json::exception& e) {
    throw InputError(std::string("config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("config: ") + e.what());
  }
  if (c.stats.config.bootstrap.resamples == 0) throw InputError("config: bootstrap_resamples must be positive");
  if (c.simulation.listeners < 0) throw InputError("config: simulation.listeners must be non-negative");
  auto& p = c.paths;
  for (auto* s : {&p.items_dir, &p.out_dir, &p.database, &p.scores, &p.column_mapping, &p.static_dir}) {
    *s = resolve(base_dir, *s);
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str(), fs::absolute(path).parent_path().string());
}

}  // namespace mushra::app
