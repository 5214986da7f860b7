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

#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "mushra/artifacts.hpp"
#include "mushra/analysis.hpp"
#include "mushra/trial_planner.hpp"

namespace mushra::app {

struct Paths {
  std::string items_dir = "items";  // {item}.wav inputs
  std::string out_dir = "out";
  std::string database;             // default: {out_dir}/sessions.db
  std::string scores;               // default: {out_dir}/scores.csv
  std::string column_mapping;       // optional JSON mapping for foreign score layouts
  std::string static_dir;           // optional listener UI bundle served at /
};

struct ServeParams {
  std::string host = "127.0.0.1";
  int port = 8080;
};

struct SimulationParams {
  int listeners = 16;
  double noise_sd = 8.0;
};

struct StatsParams {
  stats::StatsConfig config;           // bootstrap.seed is filled in by effective()
  std::optional<std::uint64_t> seed;  // default: derived from RunConfig::seed
};

struct RunConfig {
  Paths paths;
  std::uint64_t seed = 20260101;
  artifact::EngineConfig engine;
  plan::PlanRequest plan = default_plan();
  ServeParams serve;
  SimulationParams simulation;
  StatsParams stats;

  // Resolved locations, derived from paths.
  std::string manifest_path() const;
  std::string stimuli_dir() const;
  std::string plan_path() const;
  std::string database_path() const;
  std::string scores_path() const;
  std::string analysis_dir() const;

  stats::StatsConfig effective_stats() const;

  // Full design plus two training trials on items outside the test set.
  static plan::PlanRequest default_plan();
};

std::string config_to_json(const RunConfig& config);
// Unknown keys are rejected so typos do not silently fall back to defaults.
// Relative paths are resolved against `base_dir`.
RunConfig config_from_json(const std::string& text, const std::string& base_dir = "");
RunConfig load_config(const std::string& path);

}  // namespace mushra::app
