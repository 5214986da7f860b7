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
#include <cmath>
#include <random>
#include <sstream>

#include "mushra/bootstrap.hpp"
#include "mushra/error.hpp"
#include "mushra/scores.hpp"
#include "mushra/wilcoxon.hpp"

namespace mushra::stats {
namespace {

Dataset parse(const std::string& text, const ColumnMapping& m = {}) {
  std::istringstream in(text);
  return ingest_scores(in, m, "test.csv");
}

std::string error_of(const std::string& text, const ColumnMapping& m = {}) {
  try {
    parse(text, m);
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

TEST(Scores, IngestsExportSchema) {
  const auto d = parse(
      "listener_id,item,series,condition,score\n"
      "L2,Pop,SHmix,mono,65\n"
      "L1,Pop,SHmix,mono,70\n"
      "\n"
      "L1,Pop,SHmix,\"SH30-LR\",40.5\n");
  ASSERT_EQ(d.size(), 3u);
  EXPECT_EQ(d.listeners(), (std::set<std::string>{"L1", "L2"}));
  EXPECT_EQ(d.records()[0].listener, "L1");
  EXPECT_EQ(d.records()[0].condition, "SH30-LR");
  EXPECT_EQ(d.records()[0].score, 40.5);
  EXPECT_EQ(parse(dataset_to_csv(d)).records(), d.records());
}

TEST(Scores, EmptyInputIsValid) {
  EXPECT_TRUE(parse("").empty());
  EXPECT_TRUE(parse("listener_id,item,series,condition,score\n").empty());
}

TEST(Scores, RejectsBadRows) {
  const std::string h = "listener_id,item,series,condition,score\n";
  const auto dup = error_of(h + "L1,Pop,SHmix,mono,65\nL1,Pop,SHmix,mono,66\n");
  EXPECT_NE(dup.find("duplicate"), std::string::npos);
  EXPECT_NE(dup.find("(L1, Pop, SHmix, mono)"), std::string::npos) << dup;
  EXPECT_NE(error_of(h + "L1,Pop,SHmix,mono,101\n").find("test.csv:2"), std::string::npos);
  EXPECT_NE(error_of(h + "L1,Pop,SHmix,mono,-1\n").find("outside"), std::string::npos);
  EXPECT_NE(error_of(h + "L1,Pop,SHmix,mono,abc\n").find("not a number"), std::string::npos);
  EXPECT_NE(error_of(h + "L1,Pop,PEmix,mono,50\n").find("unknown series 'PEmix'"), std::string::npos);
  EXPECT_NE(error_of(h + "L1,Pop,SHmix\n").find("expected 5 fields"), std::string::npos);
  EXPECT_NE(error_of("listener,item,series,condition,score\n").find("missing column 'listener_id'"),
            std::string::npos);
  EXPECT_NE(error_of(h + "L1,\"Pop,SHmix,mono,5\n").find("unterminated"), std::string::npos);
}

TEST(Scores, ColumnMappingForOtherLayouts) {
  const auto m = mapping_from_json(R"({
    "columns": {"listener": "subject", "item": "signal", "series": "trial_type", "condition": "cond", "score": "rating"},
    "delimiter": ";",
    "series_aliases": {"SH_mixed": "SHmix", "SH_LR": "SHLR"},
    "condition_aliases": {"anchor_mono": "mono"},
    "ignore_series": ["training"]
  })");
  const auto d = parse(
      "subject;signal;trial_type;cond;rating\n"
      "s1;Pop;SH_mixed;anchor_mono;63\n"
      "s1;Pop;SH_LR;SH30-LR;41\n"
      "s1;Pop;training;SH30-LR;41\n",
      m);
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d.records()[0].series, "SHLR");
  EXPECT_EQ(d.records()[1].series, "SHmix");
  EXPECT_EQ(d.records()[1].condition, "mono");
  EXPECT_THROW(mapping_from_json("{\"delimiter\": \";;\"}"), InputError);
  EXPECT_THROW(mapping_from_json("[1"), InputError);
}

TEST(Scores, SyntheticFixtureLoads) {
  const auto d = read_scores(std::string(MUSHRA_FIXTURES) + "/synthetic_scores.csv");
  EXPECT_EQ(d.listeners().size(), 16u);
  EXPECT_EQ(d.size(), 16u * 24u * 8u);
  EXPECT_THROW(read_scores("/nonexistent/scores.csv"), InputError);
}

TEST(Bootstrap, ParallelKernelMatchesSerialReference) {
  std::vector<double> v;
  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd(50, 10);
  for (int i = 0; i < 16; ++i) v.push_back(nd(rng));
  const auto a = bootstrap_means(v, 5000, 77);
  const auto b = bootstrap_means_serial(v, 5000, 77);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, bootstrap_means(v, 5000, 78));
}

TEST(Bootstrap, FixedSeedIsDeterministic) {
  const std::vector<double> v{10, 20, 35, 40, 41, 60, 62, 90};
  BootstrapConfig c;
  c.seed = 5;
  const auto x = bootstrap_ci(v, c);
  const auto y = bootstrap_ci(v, c);
  EXPECT_EQ(x.low, y.low);
  EXPECT_EQ(x.high, y.high);
  EXPECT_LE(x.low, mean(v));
  EXPECT_GE(x.high, mean(v));
  EXPECT_GE(x.low, 10.0);
  EXPECT_LE(x.high, 90.0);
}

TEST(Bootstrap, ZeroVarianceGivesDegenerateInterval) {
  const std::vector<double> v(16, 65.0);
  const auto ci = bootstrap_ci(v, BootstrapConfig{});
  EXPECT_EQ(ci.low, 65.0);
  EXPECT_EQ(ci.high, 65.0);
  const std::vector<double> one{42.0};
  EXPECT_EQ(bootstrap_ci(one, BootstrapConfig{}).low, 42.0);
  EXPECT_THROW(bootstrap_ci(std::vector<double>{}, BootstrapConfig{}), std::invalid_argument);
}

TEST(Bootstrap, QuantileAndTailDefinitions) {
  const std::vector<double> s{1, 2, 3, 4, 5};
  EXPECT_DOUBLE_EQ(quantile_sorted(s, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(quantile_sorted(s, 0.5), 3.0);
  EXPECT_DOUBLE_EQ(quantile_sorted(s, 0.1), 1.4);
  EXPECT_DOUBLE_EQ(quantile_sorted(s, 1.0), 5.0);
  EXPECT_NEAR(ci_tail(CiMethod::kPercentile, 0.95, 16), 0.025, 1e-15);
  // Phi(-sqrt(16/15) * t_{15, 0.975}) with t = 2.131449546
  EXPECT_NEAR(ci_tail(CiMethod::kExpandedPercentile, 0.95, 16), 0.0138556, 2e-6);
  EXPECT_LT(ci_tail(CiMethod::kExpandedPercentile, 0.95, 200), 0.025);
  EXPECT_GT(ci_tail(CiMethod::kExpandedPercentile, 0.95, 200), 0.0235);
}

TEST(Bootstrap, CoverageOnNormalData) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> nd(50, 10);
  const int runs = 400;
  int covered = 0;
  BootstrapConfig c;
  c.resamples = 2000;
  for (int r = 0; r < runs; ++r) {
    std::vector<double> v(16);
    for (auto& x : v) x = nd(rng);
    c.seed = static_cast<std::uint64_t>(r);
    const auto ci = bootstrap_ci(v, c);
    covered += ci.low <= 50.0 && 50.0 <= ci.high;
  }
  EXPECT_GT(covered / double(runs), 0.91);
  EXPECT_LT(covered / double(runs), 0.98);
}

// Two-sided sign-flip enumeration on midranks of non-zero differences.
double brute_force_p(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> d;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (b[i] != a[i]) d.push_back(b[i] - a[i]);
  }
  const std::size_t n = d.size();
  if (n == 0) return 1.0;
  std::vector<double> rank(n);
  for (std::size_t i = 0; i < n; ++i) {
    double less = 0, equal = 0;
    for (std::size_t j = 0; j < n; ++j) {
      less += std::fabs(d[j]) < std::fabs(d[i]);
      equal += std::fabs(d[j]) == std::fabs(d[i]);
    }
    rank[i] = less + (equal + 1) / 2.0;
  }
  double total = 0, obs = 0;
  for (std::size_t i = 0; i < n; ++i) {
    total += rank[i];
    if (d[i] > 0) obs += rank[i];
  }
  const double dev = std::fabs(obs - total / 2);
  std::size_t hits = 0;
  for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask >> i & 1) s += rank[i];
    }
    hits += std::fabs(s - total / 2) >= dev - 1e-9;
  }
  return hits / static_cast<double>(1ull << n);
}

TEST(Wilcoxon, MatchesBruteForceEnumerationWithTies) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> score(0, 10);  // coarse scale forces ties and zeros
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 2 + t % 15;
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = score(rng) * 10;
      b[i] = score(rng) * 10 + (t % 3 == 0 ? 20 : 0);
    }
    EXPECT_NEAR(wilcoxon_signed_rank(a, b).p_value, brute_force_p(a, b), 1e-12) << "case " << t;
  }
}

TEST(Wilcoxon, IdenticalScoresGiveOne) {
  const std::vector<double> a{50, 60, 70, 80};
  const auto r = wilcoxon_signed_rank(a, a);
  EXPECT_EQ(r.p_value, 1.0);
  EXPECT_EQ(r.n_nonzero, 0u);
  EXPECT_EQ(stars(r.p_value), "");
}

TEST(Wilcoxon, ConstantOffsetOfThirtyIsHighlySignificant) {
  std::vector<double> lr(16), ms(16);
  for (int i = 0; i < 16; ++i) {
    lr[static_cast<std::size_t>(i)] = 20 + 3 * i;
    ms[static_cast<std::size_t>(i)] = lr[static_cast<std::size_t>(i)] + 30;
  }
  const auto r = wilcoxon_signed_rank(lr, ms);
  EXPECT_DOUBLE_EQ(r.p_value, 2.0 / 65536.0);
  EXPECT_EQ(r.w_plus, 136.0);
  EXPECT_EQ(stars(r.p_value), "***");
}

TEST(Wilcoxon, NormalApproximationBeyondExactLimit) {
  std::vector<double> a(kExactLimit + 50), b(kExactLimit + 50);
  std::mt19937_64 rng(9);
  std::normal_distribution<double> nd(0, 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = nd(rng);
    b[i] = nd(rng) + 0.1;
  }
  const auto r = wilcoxon_signed_rank(a, b);
  EXPECT_FALSE(r.exact);
  EXPECT_GT(r.p_value, 0.0);
  EXPECT_LT(r.p_value, 0.2);
  EXPECT_THROW(wilcoxon_signed_rank(std::vector<double>{1}, std::vector<double>{1, 2}), std::invalid_argument);
}

TEST(Wilcoxon, StarLadder) {
  EXPECT_EQ(stars(0.2), "");
  EXPECT_EQ(stars(0.05), "");
  EXPECT_EQ(stars(0.049), "*");
  EXPECT_EQ(stars(0.0099), "**");
  EXPECT_EQ(stars(0.00099), "***");
  StarThresholds lax{{0.5, 0.1, 0.001}};
  EXPECT_EQ(stars(0.2, lax), "*");
}

}  // namespace
}  // namespace mushra::stats
