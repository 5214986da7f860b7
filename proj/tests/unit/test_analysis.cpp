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

#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "json.hpp"
#include "mushra/analysis.hpp"
#include "mushra/figure_data.hpp"
#include "mushra/sha256.hpp"

namespace mushra::stats {
namespace {

const Dataset& fixture() {
  static const Dataset d = read_scores(std::string(MUSHRA_FIXTURES) + "/synthetic_scores.csv");
  return d;
}

const nlohmann::json& oracle() {
  static const nlohmann::json j = [] {
    std::ifstream in(std::string(MUSHRA_FIXTURES) + "/synthetic_expected.json");
    return nlohmann::json::parse(in);
  }();
  return j;
}

StatsConfig fast_config() {
  StatsConfig c;
  c.bootstrap.resamples = 2000;
  c.bootstrap.seed = 1;
  return c;
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

TEST(ParseCondition, KnownLabels) {
  const auto sh = parse_condition("SH30-MS");
  EXPECT_EQ(sh.role, ConditionRole::kArtifact);
  EXPECT_EQ(*sh.kind, artifact::ArtifactKind::kSH);
  EXPECT_EQ(*sh.quality, artifact::Quality::kQ3);
  EXPECT_EQ(*sh.mode, artifact::StereoMode::kMS);
  EXPECT_EQ(*parse_condition("QN0-LR").quality, artifact::Quality::kQ1);
  EXPECT_EQ(*parse_condition("QN24-LR").quality, artifact::Quality::kQ5);
  EXPECT_EQ(parse_condition("mono").role, ConditionRole::kMonoAnchor);
  EXPECT_EQ(parse_condition("LP7000").role, ConditionRole::kLowpassAnchor);
  EXPECT_EQ(parse_condition("ref").role, ConditionRole::kReference);
  EXPECT_EQ(parse_condition("SH33-LR").role, ConditionRole::kOther);
  EXPECT_EQ(parse_condition("PE1-LR").role, ConditionRole::kOther);
}

TEST(Summarize, PerItemMeansMatchOracle) {
  const auto rows = summarize(fixture(), Grouping{true, true}, fast_config());
  std::map<SummaryKey, StatsSummary> by_key;
  for (const auto& r : rows) by_key[r.key] = r;
  const auto& expected = oracle().at("means");
  ASSERT_EQ(rows.size(), expected.size());
  for (const auto& e : expected) {
    const SummaryKey k{e.at("item"), e.at("series"), e.at("condition")};
    const auto& s = by_key.at(k);
    EXPECT_NEAR(s.mean, e.at("mean").get<double>(), 1e-9);
    EXPECT_EQ(s.n, e.at("n").get<std::size_t>());
    EXPECT_LE(s.ci_low, s.mean);
    EXPECT_GE(s.ci_high, s.mean);
    EXPECT_LT(s.ci_low, s.ci_high);
  }
}

TEST(Summarize, PooledAveragesListenersFirst) {
  const auto rows = summarize(fixture(), Grouping{false, true}, fast_config());
  std::map<std::pair<std::string, std::string>, double> got;
  for (const auto& r : rows) {
    EXPECT_EQ(r.key.item, kPooled);
    got[{r.key.series, r.key.condition}] = r.mean;
  }
  for (const auto& e : oracle().at("pooled_means")) {
    EXPECT_NEAR(got.at({e.at("series"), e.at("condition")}), e.at("mean").get<double>(), 1e-9);
  }
  const auto by_condition = summarize(fixture(), Grouping{false, false}, fast_config());
  for (const auto& r : by_condition) {
    EXPECT_NEAR(r.mean, oracle().at("condition_means").at(r.key.condition).get<double>(), 1e-9);
  }
}

TEST(Summarize, ConstantScoresAndDeterminism) {
  std::vector<ScoreRecord> recs;
  for (int l = 0; l < 16; ++l) recs.push_back({"L" + std::to_string(l), "Pop", "SHmix", "mono", 65});
  const auto rows = summarize(Dataset(recs), Grouping{}, StatsConfig{});
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].mean, 65.0);
  EXPECT_EQ(rows[0].ci_low, 65.0);
  EXPECT_EQ(rows[0].ci_high, 65.0);
  const auto a = summaries_to_csv(summarize(fixture(), Grouping{}, fast_config()));
  const auto b = summaries_to_csv(summarize(fixture(), Grouping{}, fast_config()));
  EXPECT_EQ(a, b);
}

TEST(Summarize, MeanInvariantUnderListenerRelabeling) {
  std::vector<ScoreRecord> recs = fixture().records();
  std::map<std::string, std::string> rename;
  int k = 99;
  for (const auto& l : fixture().listeners()) rename[l] = "X" + std::to_string(k--);
  for (auto& r : recs) r.listener = rename[r.listener];
  const auto a = summarize(fixture(), Grouping{true, true}, fast_config());
  const auto b = summarize(Dataset(recs), Grouping{true, true}, fast_config());
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i].mean, b[i].mean, 1e-12);
}

TEST(CompareLrMs, PValuesMatchEnumerationOracle) {
  const auto results = compare_lr_ms(fixture(), fast_config());
  std::map<std::tuple<std::string, std::string, std::string>, const SignificanceResult*> by_key;
  for (const auto& r : results) by_key[{r.item, r.lr.series, r.lr.condition}] = &r;
  const auto& tests = oracle().at("tests");
  ASSERT_EQ(tests.size(), 56u);
  for (const auto& t : tests) {
    const auto* r = by_key.at({t.at("item"), t.at("lr_series"), t.at("lr_condition")});
    EXPECT_EQ(r->ms.series, t.at("ms_series").get<std::string>());
    EXPECT_EQ(r->ms.condition, t.at("ms_condition").get<std::string>());
    EXPECT_EQ(to_string(r->context), t.at("context").get<std::string>());
    EXPECT_NEAR(r->p_value, t.at("p_value").get<double>(), 1e-12) << r->item << " " << r->lr.condition;
    EXPECT_EQ(r->n, 16u);
    EXPECT_EQ(r->stars, stars(r->p_value));
  }
  // Pooled comparisons come on top: 10 separated and 4 mixed levels.
  EXPECT_EQ(results.size(), 56u + 14u);
}

TEST(CompareLrMs, HardPannedItemsFavourLr) {
  for (const auto& r : compare_lr_ms(fixture(), fast_config())) {
    if (r.item == "panDialogM" || r.item == "panDialogF") EXPECT_GT(r.mean_lr, r.mean_ms);
    if (r.item == "RnB" && r.context == Context::kMixed) EXPECT_GT(r.mean_ms, r.mean_lr);
  }
}

TEST(CompareLrMs, UnmatchedListenersSkippedWithDiagnostic) {
  std::vector<ScoreRecord> recs;
  for (int l = 0; l < 5; ++l) {
    recs.push_back({"L" + std::to_string(l), "Pop", "SHmix", "SH30-LR", 40.0 + l});
    if (l != 4) recs.push_back({"L" + std::to_string(l), "Pop", "SHmix", "SH30-MS", 45.0 + l});
  }
  std::vector<std::string> diag;
  EXPECT_TRUE(compare_lr_ms(Dataset(recs), StatsConfig{}, &diag).empty());
  ASSERT_EQ(diag.size(), 2u);  // the item and the pooled pair
  EXPECT_NE(diag[0].find("listener sets differ"), std::string::npos);
}

TEST(CompareLrMs, NullDataFalsePositiveRate) {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> score(0, 100);
  int rejections = 0;
  const int runs = 1000;
  for (int run = 0; run < runs; ++run) {
    std::vector<double> a(16), b(16);
    for (auto& x : a) x = score(rng);
    for (auto& x : b) x = score(rng);
    rejections += wilcoxon_signed_rank(a, b).p_value < 0.05;
  }
  EXPECT_GE(rejections / double(runs), 0.03);
  EXPECT_LE(rejections / double(runs), 0.07);
}

TEST(FigureData, OverallLayoutRows) {
  const auto cfg = fast_config();
  const auto pooled = summarize(fixture(), Grouping{false, true}, cfg);
  const auto cmp = compare_lr_ms(fixture(), cfg);
  const auto t = export_figure_data(pooled, cmp, FigureLayout::kOverall);
  // 4 separated series x (5 levels + 2 lowpass anchors + reference).
  EXPECT_EQ(count_lines(t.points_csv), 1u + 4u * 8u);
  EXPECT_NE(t.points_csv.find("overall,SH,3,SHMS,SH30-MS,SH,MS,filled,SH,16,"), std::string::npos)
      << t.points_csv;
  EXPECT_NE(t.points_csv.find("overall,QN,6,QNLR,LP3500,,,anchor,anchor,16,"), std::string::npos);
  EXPECT_EQ(count_lines(t.significance_csv), 1u + 10u);
  EXPECT_EQ(t, export_figure_data(pooled, cmp, FigureLayout::kOverall));

  const auto mixed = export_figure_data(pooled, cmp, FigureLayout::kMixed);
  EXPECT_EQ(count_lines(mixed.points_csv), 1u + 2u * 8u);
  EXPECT_NE(mixed.points_csv.find("mixed,SHmix,8,SHmix,mono,"), std::string::npos);
  EXPECT_EQ(count_lines(mixed.significance_csv), 1u + 4u);
}

TEST(FigureData, ItemwiseAndEmptyComparisons) {
  const auto cfg = fast_config();
  const auto per_item = summarize(fixture(), Grouping{true, true}, cfg);
  const auto t = export_figure_data(per_item, {}, FigureLayout::kItemwise);
  EXPECT_EQ(count_lines(t.points_csv), 1u + 24u * 8u);
  EXPECT_EQ(count_lines(t.significance_csv), 1u);
  EXPECT_EQ(figure_layout_from_string("itemwise"), FigureLayout::kItemwise);
  EXPECT_THROW(figure_layout_from_string("fig9"), std::invalid_argument);
  EXPECT_EQ(figure_x("LP7000"), 7);
  EXPECT_EQ(figure_x("ref"), 0);
}

}  // namespace
}  // namespace mushra::stats
