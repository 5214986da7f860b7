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

#include "mushra/analysis.hpp"

#include <cstdio>
#include <map>
#include <regex>
#include <sstream>

#include "mushra/seeds.hpp"
#include "mushra/trial_planner.hpp"

namespace mushra::stats {

using artifact::ArtifactKind;
using artifact::Quality;
using artifact::StereoMode;

ConditionInfo parse_condition(const std::string& label) {
  ConditionInfo info;
  if (label == "ref") {
    info.role = ConditionRole::kReference;
  } else if (label == "mono") {
    info.role = ConditionRole::kMonoAnchor;
  } else if (label == "LP3500" || label == "LP7000") {
    info.role = ConditionRole::kLowpassAnchor;
  } else {
    static const std::regex re(R"(^(QN|SH)(\d+)-(LR|MS)$)");
    std::smatch m;
    if (!std::regex_match(label, m, re)) return info;
    const auto kind = artifact::kind_from_string(m[1]);
    const double param = std::stod(m[2]);
    for (auto q : artifact::kAllQualities) {
      const double p = artifact::quality_parameter(kind, q);
      const double shown = kind == ArtifactKind::kSH ? std::round(p * 100.0) : p;
      if (shown == param) info.quality = q;
    }
    if (!info.quality) return info;
    info.role = ConditionRole::kArtifact;
    info.kind = kind;
    info.mode = artifact::mode_from_string(m[3]);
  }
  return info;
}

namespace {

// listener -> mean score over the cells pooled into one group
using ListenerMeans = std::map<std::string, double>;

std::map<SummaryKey, ListenerMeans> group_means(const Dataset& data, const Grouping& g) {
  std::map<SummaryKey, std::map<std::string, std::pair<double, int>>> acc;
  for (const auto& r : data.records()) {
    const SummaryKey key{g.by_item ? r.item : kPooled, g.by_series ? r.series : kPooled, r.condition};
    auto& cell = acc[key][r.listener];
    cell.first += r.score;
    cell.second += 1;
  }
  std::map<SummaryKey, ListenerMeans> out;
  for (const auto& [key, listeners] : acc) {
    for (const auto& [l, sum] : listeners) out[key][l] = sum.first / sum.second;
  }
  return out;
}

std::uint64_t group_seed(std::uint64_t seed, const SummaryKey& k) {
  return derive_seed(seed, k.item + "|" + k.series + "|" + k.condition);
}

}  // namespace

std::vector<StatsSummary> summarize(const Dataset& data, const Grouping& grouping, const StatsConfig& config,
                                    std::vector<std::string>* warnings) {
  std::vector<StatsSummary> out;
  for (const auto& [key, listeners] : group_means(data, grouping)) {
    if (listeners.empty()) {
      if (warnings) warnings->push_back("no listeners for " + key.item + "/" + key.series + "/" + key.condition);
      continue;
    }
    std::vector<double> v;
    for (const auto& [l, m] : listeners) v.push_back(m);
    auto bc = config.bootstrap;
    bc.seed = group_seed(config.bootstrap.seed, key);
    const auto ci = bootstrap_ci(v, bc);
    out.push_back({key, v.size(), mean(v), ci.low, ci.high});
  }
  return out;
}

std::string to_string(Context c) { return c == Context::kSeparated ? "separated" : "mixed"; }

std::vector<SignificanceResult> compare_lr_ms(const Dataset& data, const StatsConfig& config,
                                              std::vector<std::string>* diagnostics) {
  std::vector<SignificanceResult> out;
  for (bool by_item : {true, false}) {
    const auto groups = group_means(data, Grouping{by_item, true});
    std::set<std::string> items;
    for (const auto& [key, _] : groups) items.insert(key.item);
    for (const auto& item : items) {
      for (auto kind : {ArtifactKind::kSH, ArtifactKind::kQN}) {
        const std::string k = artifact::to_string(kind);
        for (auto context : {Context::kSeparated, Context::kMixed}) {
          for (auto q : artifact::kAllQualities) {
            const auto spec = artifact::ArtifactSpec::make(kind, q, 0);
            const SummaryKey lr{item, context == Context::kSeparated ? k + "LR" : k + "mix",
                                artifact::condition_label(spec, StereoMode::kLR)};
            const SummaryKey ms{item, context == Context::kSeparated ? k + "MS" : k + "mix",
                                artifact::condition_label(spec, StereoMode::kMS)};
            const auto a = groups.find(lr);
            const auto b = groups.find(ms);
            if (a == groups.end() || b == groups.end()) continue;
            std::vector<double> x, y;
            bool matched = a->second.size() == b->second.size();
            for (const auto& [listener, score] : a->second) {
              const auto other = b->second.find(listener);
              if (other == b->second.end()) {
                matched = false;
                break;
              }
              x.push_back(score);
              y.push_back(other->second);
            }
            if (!matched) {
              if (diagnostics) {
                diagnostics->push_back("skipped " + item + " " + lr.series + "/" + lr.condition + " vs " +
                                       ms.series + "/" + ms.condition + ": listener sets differ");
              }
              continue;
            }
            const auto w = wilcoxon_signed_rank(x, y);
            SignificanceResult r;
            r.item = item;
            r.context = context;
            r.kind = kind;
            r.quality = q;
            r.lr = lr;
            r.ms = ms;
            r.n = x.size();
            r.mean_lr = mean(x);
            r.mean_ms = mean(y);
            r.p_value = w.p_value;
            r.stars = stars(w.p_value, config.stars);
            out.push_back(r);
          }
        }
      }
    }
  }
  return out;
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string fmt_p(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

std::string summaries_to_csv(const std::vector<StatsSummary>& rows) {
  std::ostringstream out;
  out << "item,series,condition,n,mean,ci_low,ci_high\n";
  for (const auto& r : rows) {
    out << r.key.item << ',' << r.key.series << ',' << r.key.condition << ',' << r.n << ',' << fmt(r.mean)
        << ',' << fmt(r.ci_low) << ',' << fmt(r.ci_high) << '\n';
  }
  return out.str();
}

std::string significance_to_csv(const std::vector<SignificanceResult>& rows) {
  std::ostringstream out;
  out << "item,context,kind,quality,lr_series,lr_condition,ms_series,ms_condition,n,mean_lr,mean_ms,p_value,"
         "stars,test\n";
  for (const auto& r : rows) {
    out << r.item << ',' << to_string(r.context) << ',' << artifact::to_string(r.kind) << ','
        << artifact::to_string(r.quality) << ',' << r.lr.series << ',' << r.lr.condition << ',' << r.ms.series
        << ',' << r.ms.condition << ',' << r.n << ',' << fmt(r.mean_lr) << ',' << fmt(r.mean_ms) << ','
        << fmt_p(r.p_value) << ',' << r.stars << ',' << r.test << '\n';
  }
  return out.str();
}

}  // namespace mushra::stats
