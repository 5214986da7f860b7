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

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mushra/artifacts.hpp"

namespace mushra::plan {

enum class Series { kSHLR, kQNLR, kSHMS, kQNMS, kSHmix, kQNmix };

inline constexpr std::array kAllSeries{Series::kSHLR, Series::kQNLR, Series::kSHMS,
                                       Series::kQNMS, Series::kSHmix, Series::kQNmix};

std::string to_string(Series s);
Series series_from_string(const std::string& s);
artifact::ArtifactKind series_kind(Series s);

enum class ConditionSource { kQualityLevel, kLowpassAnchor, kMonoAnchor, kHiddenReference };

struct ConditionSpec {
  std::string label;  // matches ManifestRow::label
  ConditionSource source = ConditionSource::kQualityLevel;
  std::optional<artifact::Quality> quality;
  std::optional<artifact::StereoMode> mode;
};

struct TrialSeries {
  Series name = Series::kSHLR;
  artifact::ArtifactKind kind = artifact::ArtifactKind::kSH;
  std::vector<ConditionSpec> conditions;  // the 7 rated conditions, hidden reference excluded
};

TrialSeries build_series(Series name);

inline constexpr std::size_t kConditionsPerTrial = 7;
inline constexpr std::size_t kStimuliPerTrial = kConditionsPerTrial + 1;
inline constexpr std::size_t kPublishedTrialCount = 22;
inline const std::string kHiddenReferenceLabel = "ref";

struct FileRef {
  std::string file;
  std::string sha256;
  bool operator==(const FileRef&) const = default;
};

struct Stimulus {
  std::string condition;  // condition label, "ref" for the hidden reference
  FileRef audio;
  bool operator==(const Stimulus&) const = default;
};

struct Trial {
  std::string trial_id;
  std::string item;
  Series series = Series::kSHLR;
  bool training = false;
  FileRef reference;
  std::vector<Stimulus> stimuli;  // canonical order: series template, then hidden reference
  bool operator==(const Trial&) const = default;
};

struct TrainingTrial {
  std::string item;
  Series series = Series::kSHmix;
};

struct PlanRequest {
  // Items per artifact kind; each series uses the list of its kind.
  std::map<artifact::ArtifactKind, std::vector<std::string>> items = default_items();
  std::vector<Series> series{kAllSeries.begin(), kAllSeries.end()};
  // Replaces the item list of one series, e.g. to drop cells from the full design.
  std::map<Series, std::vector<std::string>> series_items;
  std::vector<TrainingTrial> training;

  static std::map<artifact::ArtifactKind, std::vector<std::string>> default_items();
};

struct TrialPlan {
  std::vector<Trial> training;
  std::vector<Trial> trials;
  std::vector<std::string> warnings;

  bool operator==(const TrialPlan& o) const { return training == o.training && trials == o.trials; }
};

// Resolves every stimulus against the manifest. Throws InputError when an item
// or condition has no manifest row, or when a training item is also a test item.
TrialPlan build_plan(const PlanRequest& request, const std::vector<artifact::ManifestRow>& manifest);

// Presentation order for one listener: indices into plan.training / plan.trials,
// and for every trial a permutation of its stimuli.
struct ListenerOrder {
  std::vector<std::size_t> training_order;
  std::vector<std::size_t> trial_order;
  std::map<std::string, std::vector<std::size_t>> stimulus_order;  // by trial_id
};

ListenerOrder randomize(const TrialPlan& plan, std::uint64_t listener_seed);

// Uniform permutation of 0..n-1 (Fisher-Yates) driven by `seed`.
std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed);

std::string plan_to_json(const TrialPlan& plan);
TrialPlan plan_from_json(const std::string& text);
void write_plan(const std::string& path, const TrialPlan& plan);
TrialPlan read_plan(const std::string& path);

}  // namespace mushra::plan
