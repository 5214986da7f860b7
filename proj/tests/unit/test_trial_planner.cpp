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

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>

#include "mushra/error.hpp"
#include "mushra/sha256.hpp"
#include "mushra/trial_planner.hpp"

namespace mushra::plan {
namespace {

using artifact::ManifestRow;

std::vector<ManifestRow> fake_manifest(const std::vector<std::string>& items) {
  std::vector<std::string> labels{"ref", "mono", "LP3500", "LP7000"};
  for (const char* kind : {"SH", "QN"}) {
    for (const char* p : (std::string(kind) == "SH") ? std::vector<const char*>{"70", "50", "30", "20", "10"}
                                                     : std::vector<const char*>{"0", "6", "12", "18", "24"}) {
      for (const char* m : {"LR", "MS"}) labels.push_back(std::string(kind) + p + "-" + m);
    }
  }
  std::vector<ManifestRow> rows;
  for (const auto& item : items) {
    for (const auto& label : labels) {
      ManifestRow r;
      r.item = item;
      r.label = label;
      r.file = item + "__" + label + ".wav";
      r.sha256 = sha256_hex(item + "|" + label);
      rows.push_back(r);
    }
  }
  return rows;
}

const std::vector<std::string> kAllItems{"glock", "Pop", "violin", "RnB", "panDialogM", "panDialogF",
                                         "train1", "train2"};

std::set<std::string> labels_of(const TrialSeries& s) {
  std::set<std::string> out;
  for (const auto& c : s.conditions) out.insert(c.label);
  return out;
}

TEST(BuildSeries, MixedSeriesMatchTable) {
  EXPECT_EQ(labels_of(build_series(Series::kSHmix)),
            (std::set<std::string>{"SH30-LR", "SH30-MS", "SH10-LR", "SH10-MS", "mono", "LP3500", "LP7000"}));
  EXPECT_EQ(labels_of(build_series(Series::kQNmix)),
            (std::set<std::string>{"QN6-LR", "QN6-MS", "QN12-LR", "QN12-MS", "mono", "LP3500", "LP7000"}));
}

TEST(BuildSeries, SeparatedSeriesUseAllFiveLevels) {
  EXPECT_EQ(labels_of(build_series(Series::kQNLR)),
            (std::set<std::string>{"QN0-LR", "QN6-LR", "QN12-LR", "QN18-LR", "QN24-LR", "LP3500", "LP7000"}));
  EXPECT_EQ(labels_of(build_series(Series::kSHMS)),
            (std::set<std::string>{"SH70-MS", "SH50-MS", "SH30-MS", "SH20-MS", "SH10-MS", "LP3500", "LP7000"}));
}

TEST(BuildSeries, EverySeriesHasSevenConditions) {
  for (auto s : kAllSeries) {
    const auto series = build_series(s);
    EXPECT_EQ(series.conditions.size(), kConditionsPerTrial) << to_string(s);
    EXPECT_EQ(labels_of(series).size(), kConditionsPerTrial);
    EXPECT_EQ(series_from_string(to_string(s)), s);
    EXPECT_EQ(labels_of(series).count("mono"), (s == Series::kSHmix || s == Series::kQNmix) ? 1u : 0u);
  }
  EXPECT_THROW(series_from_string("PEmix"), std::invalid_argument);
}

TEST(BuildPlan, DefaultDesignHas24TrialsAndFlagsIt) {
  const auto plan = build_plan(PlanRequest{}, fake_manifest(kAllItems));
  EXPECT_EQ(plan.trials.size(), 24u);
  ASSERT_EQ(plan.warnings.size(), 1u);
  EXPECT_NE(plan.warnings[0].find("22"), std::string::npos);
  const auto defaults = PlanRequest::default_items();
  std::map<std::string, int> per_series;
  for (const auto& t : plan.trials) {
    ++per_series[to_string(t.series)];
    ASSERT_EQ(t.stimuli.size(), kStimuliPerTrial);
    const auto ref = std::find_if(t.stimuli.begin(), t.stimuli.end(),
                                  [](const Stimulus& s) { return s.condition == "ref"; });
    ASSERT_NE(ref, t.stimuli.end());
    EXPECT_EQ(ref->audio, t.reference);
    EXPECT_EQ(t.reference.sha256, sha256_hex(t.item + "|ref"));
    const auto& kind_items = defaults.at(series_kind(t.series));
    EXPECT_NE(std::find(kind_items.begin(), kind_items.end(), t.item), kind_items.end());
  }
  for (auto s : kAllSeries) EXPECT_EQ(per_series[to_string(s)], 4);
}

TEST(BuildPlan, ItemOverrideReproducesPublishedCount) {
  PlanRequest req;
  req.series_items[Series::kSHmix] = {"glock", "Pop", "panDialogM"};
  req.series_items[Series::kQNmix] = {"violin", "RnB", "panDialogF"};
  const auto plan = build_plan(req, fake_manifest(kAllItems));
  EXPECT_EQ(plan.trials.size(), kPublishedTrialCount);
  EXPECT_TRUE(plan.warnings.empty());
}

TEST(BuildPlan, SingleItemSingleSeries) {
  PlanRequest req;
  req.series = {Series::kQNLR};
  req.items = {{artifact::ArtifactKind::kQN, {"violin"}}};
  const auto plan = build_plan(req, fake_manifest({"violin"}));
  ASSERT_EQ(plan.trials.size(), 1u);
  EXPECT_EQ(plan.trials[0].trial_id, "QNLR-violin");
  EXPECT_EQ(plan.trials[0].stimuli.size(), 8u);
}

TEST(BuildPlan, MissingManifestEntryNamesItem) {
  try {
    build_plan(PlanRequest{}, fake_manifest({"glock", "Pop", "violin", "RnB", "panDialogM"}));
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("panDialogF"), std::string::npos);
  }
}

TEST(BuildPlan, TrainingTrialsAreSeparateAndDisjoint) {
  PlanRequest req;
  req.training = {{"train1", Series::kSHmix}, {"train2", Series::kQNmix}};
  const auto plan = build_plan(req, fake_manifest(kAllItems));
  ASSERT_EQ(plan.training.size(), 2u);
  EXPECT_TRUE(plan.training[0].training);
  EXPECT_EQ(plan.training[0].trial_id, "train-train1-SHmix");
  for (const auto& t : plan.trials) EXPECT_FALSE(t.training);
  req.training.push_back({"train1", Series::kSHmix});
  EXPECT_THROW(build_plan(req, fake_manifest(kAllItems)), std::invalid_argument);
  req.training.back() = {"Pop", Series::kSHLR};
  EXPECT_THROW(build_plan(req, fake_manifest(kAllItems)), std::invalid_argument);
}

bool is_permutation_of_iota(const std::vector<std::size_t>& p) {
  std::vector<std::size_t> s = p;
  std::sort(s.begin(), s.end());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != i) return false;
  }
  return true;
}

TEST(Randomize, ReproduciblePerListenerAndDifferentAcrossListeners) {
  PlanRequest req;
  req.training = {{"train1", Series::kSHmix}, {"train2", Series::kQNmix}};
  const auto plan = build_plan(req, fake_manifest(kAllItems));
  const auto a = randomize(plan, 101);
  const auto b = randomize(plan, 101);
  const auto c = randomize(plan, 202);
  EXPECT_EQ(a.trial_order, b.trial_order);
  EXPECT_EQ(a.stimulus_order, b.stimulus_order);
  EXPECT_NE(a.trial_order, c.trial_order);
  EXPECT_TRUE(is_permutation_of_iota(a.trial_order));
  EXPECT_TRUE(is_permutation_of_iota(a.training_order));
  ASSERT_EQ(a.stimulus_order.size(), 26u);
  int differing = 0;
  for (const auto& [id, perm] : a.stimulus_order) {
    EXPECT_TRUE(is_permutation_of_iota(perm));
    EXPECT_EQ(perm.size(), 8u);
    differing += perm != c.stimulus_order.at(id);
  }
  EXPECT_GT(differing, 20);
}

TEST(Randomize, ShuffleIsUniform) {
  // All 24 orders of 4 elements, chi-square with 23 degrees of freedom.
  std::map<std::vector<std::size_t>, int> counts;
  const int draws = 24000;
  for (int s = 0; s < draws; ++s) ++counts[shuffled_indices(4, static_cast<std::uint64_t>(s))];
  ASSERT_EQ(counts.size(), 24u);
  double chi2 = 0.0;
  for (const auto& [perm, n] : counts) chi2 += (n - 1000.0) * (n - 1000.0) / 1000.0;
  EXPECT_LT(chi2, 49.7);  // 0.999 quantile
  EXPECT_TRUE(shuffled_indices(0, 1).empty());
}

TEST(PlanJson, Roundtrip) {
  PlanRequest req;
  req.training = {{"train1", Series::kSHmix}};
  const auto plan = build_plan(req, fake_manifest(kAllItems));
  const auto back = plan_from_json(plan_to_json(plan));
  EXPECT_EQ(back, plan);
  EXPECT_EQ(back.warnings, plan.warnings);
  EXPECT_THROW(plan_from_json("{\"trials\": 3}"), InputError);
  EXPECT_THROW(plan_from_json("not json"), InputError);
}

}  // namespace
}  // namespace mushra::plan
