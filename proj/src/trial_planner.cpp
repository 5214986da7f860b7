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

#include "mushra/trial_planner.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "mushra/error.hpp"
#include "mushra/seeds.hpp"

namespace mushra::plan {

using artifact::ArtifactKind;
using artifact::Quality;
using artifact::StereoMode;

std::string to_string(Series s) {
  switch (s) {
    case Series::kSHLR: return "SHLR";
    case Series::kQNLR: return "QNLR";
    case Series::kSHMS: return "SHMS";
    case Series::kQNMS: return "QNMS";
    case Series::kSHmix: return "SHmix";
    case Series::kQNmix: return "QNmix";
  }
  return "?";
}

Series series_from_string(const std::string& s) {
  for (auto candidate : kAllSeries) {
    if (to_string(candidate) == s) return candidate;
  }
  throw std::invalid_argument("unknown trial series '" + s + "'");
}

ArtifactKind series_kind(Series s) {
  switch (s) {
    case Series::kSHLR:
    case Series::kSHMS:
    case Series::kSHmix: return ArtifactKind::kSH;
    default: return ArtifactKind::kQN;
  }
}

namespace {

ConditionSpec quality_condition(ArtifactKind kind, Quality q, StereoMode mode) {
  return {artifact::condition_label(artifact::ArtifactSpec::make(kind, q, 0), mode),
          ConditionSource::kQualityLevel, q, mode};
}

}  // namespace

TrialSeries build_series(Series name) {
  TrialSeries s{name, series_kind(name), {}};
  const auto add_levels = [&](std::initializer_list<Quality> levels,
                              std::initializer_list<StereoMode> modes) {
    for (auto q : levels) {
      for (auto m : modes) s.conditions.push_back(quality_condition(s.kind, q, m));
    }
  };
  const std::initializer_list<Quality> all{Quality::kQ1, Quality::kQ2, Quality::kQ3, Quality::kQ4,
                                           Quality::kQ5};
  switch (name) {
    case Series::kSHLR:
    case Series::kQNLR: add_levels(all, {StereoMode::kLR}); break;
    case Series::kSHMS:
    case Series::kQNMS: add_levels(all, {StereoMode::kMS}); break;
    case Series::kSHmix:
      add_levels({Quality::kQ3, Quality::kQ5}, {StereoMode::kLR, StereoMode::kMS});
      break;
    case Series::kQNmix:
      add_levels({Quality::kQ2, Quality::kQ3}, {StereoMode::kLR, StereoMode::kMS});
      break;
  }
  if (name == Series::kSHmix || name == Series::kQNmix) {
    s.conditions.push_back({"mono", ConditionSource::kMonoAnchor, std::nullopt, std::nullopt});
  }
  s.conditions.push_back({"LP3500", ConditionSource::kLowpassAnchor, std::nullopt, std::nullopt});
  s.conditions.push_back({"LP7000", ConditionSource::kLowpassAnchor, std::nullopt, std::nullopt});
  return s;
}

std::map<ArtifactKind, std::vector<std::string>> PlanRequest::default_items() {
  return {{ArtifactKind::kSH, {"glock", "Pop", "panDialogM", "panDialogF"}},
          {ArtifactKind::kQN, {"violin", "RnB", "panDialogM", "panDialogF"}}};
}

namespace {

class ManifestIndex {
 public:
  explicit ManifestIndex(const std::vector<artifact::ManifestRow>& rows) {
    for (const auto& r : rows) index_[{r.item, r.label}] = {r.file, r.sha256};
  }

  FileRef lookup(const std::string& item, const std::string& label) const {
    const auto it = index_.find({item, label});
    if (it == index_.end()) {
      throw InputError("manifest has no condition '" + label + "' for item '" + item + "'");
    }
    return it->second;
  }

 private:
  std::map<std::pair<std::string, std::string>, FileRef> index_;
};

Trial make_trial(const ManifestIndex& manifest, const std::string& item, Series series,
                 bool training) {
  Trial t;
  t.item = item;
  t.series = series;
  t.training = training;
  t.trial_id = training ? "train-" + item + "-" + to_string(series) : to_string(series) + "-" + item;
  t.reference = manifest.lookup(item, kHiddenReferenceLabel);
  for (const auto& c : build_series(series).conditions) {
    t.stimuli.push_back({c.label, manifest.lookup(item, c.label)});
  }
  t.stimuli.push_back({kHiddenReferenceLabel, t.reference});
  return t;
}

}  // namespace

TrialPlan build_plan(const PlanRequest& request, const std::vector<artifact::ManifestRow>& manifest) {
  const ManifestIndex index(manifest);
  TrialPlan plan;
  std::set<std::string> test_items;
  std::set<std::string> seen_ids;
  for (auto series : request.series) {
    const std::vector<std::string>* items = nullptr;
    if (const auto it = request.series_items.find(series); it != request.series_items.end()) {
      items = &it->second;
    } else if (const auto kit = request.items.find(series_kind(series)); kit != request.items.end()) {
      items = &kit->second;
    }
    if (items == nullptr) continue;
    for (const auto& item : *items) {
      auto trial = make_trial(index, item, series, false);
      if (!seen_ids.insert(trial.trial_id).second) {
        throw std::invalid_argument("duplicate trial " + trial.trial_id);
      }
      test_items.insert(item);
      plan.trials.push_back(std::move(trial));
    }
  }
  for (const auto& tr : request.training) {
    if (test_items.count(tr.item) != 0) {
      throw std::invalid_argument("training item '" + tr.item + "' is also a test item");
    }
    auto trial = make_trial(index, tr.item, tr.series, true);
    if (!seen_ids.insert(trial.trial_id).second) {
      throw std::invalid_argument("duplicate trial " + trial.trial_id);
    }
    plan.training.push_back(std::move(trial));
  }
  if (plan.trials.size() != kPublishedTrialCount) {
    plan.warnings.push_back("design has " + std::to_string(plan.trials.size()) +
                            " test trials; the published experiment used " +
                            std::to_string(kPublishedTrialCount));
  }
  return plan;
}

std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  SplitMix64 rng(seed);
  // Fisher-Yates on a portable generator, so orders do not depend on the
  // standard library's distribution implementation.
  for (std::size_t i = n; i > 1; --i) std::swap(idx[i - 1], idx[uniform_below(rng, i)]);
  return idx;
}

ListenerOrder randomize(const TrialPlan& plan, std::uint64_t listener_seed) {
  ListenerOrder order;
  order.training_order = shuffled_indices(plan.training.size(), derive_seed(listener_seed, "training-order"));
  order.trial_order = shuffled_indices(plan.trials.size(), derive_seed(listener_seed, "trial-order"));
  for (const auto* list : {&plan.training, &plan.trials}) {
    for (const auto& t : *list) {
      order.stimulus_order[t.trial_id] =
          shuffled_indices(t.stimuli.size(), derive_seed(listener_seed, "stimuli|" + t.trial_id));
    }
  }
  return order;
}

namespace {

nlohmann::json trial_to_json(const Trial& t) {
  nlohmann::json stimuli = nlohmann::json::array();
  for (const auto& s : t.stimuli) {
    stimuli.push_back({{"condition", s.condition}, {"file", s.audio.file}, {"sha256", s.audio.sha256}});
  }
  return {{"trial_id", t.trial_id},
          {"item", t.item},
          {"series", to_string(t.series)},
          {"training", t.training},
          {"reference", {{"file", t.reference.file}, {"sha256", t.reference.sha256}}},
          {"stimuli", stimuli}};
}

Trial trial_from_json(const nlohmann::json& j) {
  Trial t;
  t.trial_id = j.at("trial_id").get<std::string>();
  t.item = j.at("item").get<std::string>();
  t.series = series_from_string(j.at("series").get<std::string>());
  t.training = j.value("training", false);
  t.reference = {j.at("reference").at("file").get<std::string>(),
                 j.at("reference").at("sha256").get<std::string>()};
  for (const auto& s : j.at("stimuli")) {
    t.stimuli.push_back({s.at("condition").get<std::string>(),
                         {s.at("file").get<std::string>(), s.at("sha256").get<std::string>()}});
  }
  return t;
}

}  // namespace

std::string plan_to_json(const TrialPlan& plan) {
  nlohmann::json j;
  j["training"] = nlohmann::json::array();
  j["trials"] = nlohmann::json::array();
  for (const auto& t : plan.training) j["training"].push_back(trial_to_json(t));
  for (const auto& t : plan.trials) j["trials"].push_back(trial_to_json(t));
  j["warnings"] = plan.warnings;
  return j.dump(2) + "\n";
}

TrialPlan plan_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    TrialPlan plan;
    for (const auto& t : j.at("training")) plan.training.push_back(trial_from_json(t));
    for (const auto& t : j.at("trials")) plan.trials.push_back(trial_from_json(t));
    if (j.contains("warnings")) plan.warnings = j["warnings"].get<std::vector<std::string>>();
    return plan;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed plan: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("malformed plan: ") + e.what());
  }
}

void write_plan(const std::string& path, const TrialPlan& plan) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write plan " + path);
  out << plan_to_json(plan);
}

TrialPlan read_plan(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open plan " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return plan_from_json(ss.str());
}

}  // namespace mushra::plan
