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

#include <optional>
#include <string>
#include <vector>

#include "mushra/artifacts.hpp"
#include "mushra/bootstrap.hpp"
#include "mushra/scores.hpp"
#include "mushra/wilcoxon.hpp"

namespace mushra::stats {

inline const std::string kPooled = "pooled";

enum class ConditionRole { kArtifact, kLowpassAnchor, kMonoAnchor, kReference, kOther };

struct ConditionInfo {
  ConditionRole role = ConditionRole::kOther;
  std::optional<artifact::ArtifactKind> kind;
  std::optional<artifact::Quality> quality;
  std::optional<artifact::StereoMode> mode;
};

// Parses labels such as "SH30-MS", "QN6-LR", "LP3500", "mono" and "ref".
ConditionInfo parse_condition(const std::string& label);

struct Grouping {
  bool by_item = true;
  bool by_series = true;
};

struct SummaryKey {
  std::string item;    // kPooled when items are averaged
  std::string series;  // kPooled when series are averaged
  std::string condition;
  bool operator==(const SummaryKey&) const = default;
  auto operator<=>(const SummaryKey&) const = default;
};

struct StatsSummary {
  SummaryKey key;
  std::size_t n = 0;  // listeners
  double mean = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

struct StatsConfig {
  BootstrapConfig bootstrap;
  StarThresholds stars;
};

// Scores are first averaged per listener over whatever the grouping pools
// (items, series), so listeners stay the resampled unit. The bootstrap seed of
// a group is derived from its key.
std::vector<StatsSummary> summarize(const Dataset& data, const Grouping& grouping,
                                    const StatsConfig& config,
                                    std::vector<std::string>* warnings = nullptr);

enum class Context { kSeparated, kMixed };
std::string to_string(Context c);

struct SignificanceResult {
  std::string item;  // or kPooled
  Context context = Context::kSeparated;
  artifact::ArtifactKind kind = artifact::ArtifactKind::kSH;
  artifact::Quality quality = artifact::Quality::kQ1;
  SummaryKey lr;
  SummaryKey ms;
  std::size_t n = 0;
  double mean_lr = 0.0;
  double mean_ms = 0.0;
  double p_value = 1.0;
  std::string stars;
  std::string test = "wilcoxon-signed-rank";
};

// LR against MS at the same quality level and presentation context: XXLR vs
// XXMS trials (separated) and the two modes inside XXmix trials (mixed). Done
// per item and pooled over items. Pairs whose listener sets differ are skipped
// with a diagnostic.
std::vector<SignificanceResult> compare_lr_ms(const Dataset& data, const StatsConfig& config,
                                              std::vector<std::string>* diagnostics = nullptr);

std::string summaries_to_csv(const std::vector<StatsSummary>& rows);
std::string significance_to_csv(const std::vector<SignificanceResult>& rows);

}  // namespace mushra::stats
