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

#include "mushra/bootstrap.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "mushra/seeds.hpp"

namespace mushra::stats {

std::string to_string(CiMethod m) {
  return m == CiMethod::kPercentile ? "percentile" : "expanded-percentile";
}

CiMethod ci_method_from_string(const std::string& s) {
  if (s == "percentile") return CiMethod::kPercentile;
  if (s == "expanded-percentile") return CiMethod::kExpandedPercentile;
  throw std::invalid_argument("unknown CI method '" + s + "'");
}

double mean(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("mean of an empty sample");
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

namespace {

double resample_mean(std::span<const double> values, std::uint64_t seed, std::size_t b) {
  SplitMix64 rng(derive_seed(seed, static_cast<std::uint64_t>(b)));
  const std::uint64_t n = values.size();
  double sum = 0.0;
  for (std::uint64_t i = 0; i < n; ++i) sum += values[uniform_below(rng, n)];
  return sum / static_cast<double>(n);
}

}  // namespace

std::vector<double> bootstrap_means_serial(std::span<const double> values, std::size_t resamples,
                                           std::uint64_t seed) {
  if (values.empty()) throw std::invalid_argument("bootstrap of an empty sample");
  std::vector<double> out(resamples);
  for (std::size_t b = 0; b < resamples; ++b) out[b] = resample_mean(values, seed, b);
  return out;
}

std::vector<double> bootstrap_means(std::span<const double> values, std::size_t resamples,
                                    std::uint64_t seed) {
  if (values.empty()) throw std::invalid_argument("bootstrap of an empty sample");
  std::vector<double> out(resamples);
  const auto count = static_cast<std::int64_t>(resamples);
#pragma omp parallel for schedule(static)
  for (std::int64_t b = 0; b < count; ++b) {
    out[static_cast<std::size_t>(b)] = resample_mean(values, seed, static_cast<std::size_t>(b));
  }
  return out;
}

double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw std::invalid_argument("quantile of an empty sample");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * std::clamp(p, 0.0, 1.0);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double ci_tail(CiMethod method, double level, std::size_t n) {
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("confidence level must be in (0, 1)");
  const double alpha = 1.0 - level;
  if (method == CiMethod::kPercentile || n < 2) return alpha / 2.0;
  const double nd = static_cast<double>(n);
  const boost::math::students_t t_dist(nd - 1.0);
  const double t = boost::math::quantile(boost::math::complement(t_dist, alpha / 2.0));
  return boost::math::cdf(boost::math::normal(), -std::sqrt(nd / (nd - 1.0)) * t);
}

Interval bootstrap_ci(std::span<const double> values, const BootstrapConfig& config) {
  if (config.resamples == 0) throw std::invalid_argument("bootstrap needs at least one resample");
  auto means = config.parallel ? bootstrap_means(values, config.resamples, config.seed)
                               : bootstrap_means_serial(values, config.resamples, config.seed);
  std::sort(means.begin(), means.end());
  const double tail = ci_tail(config.method, config.level, values.size());
  Interval ci{quantile_sorted(means, tail), quantile_sorted(means, 1.0 - tail)};
  // Resampled means of a constant sample can differ from it in the last bit.
  const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  ci.low = std::clamp(ci.low, *mn, *mx);
  ci.high = std::clamp(ci.high, *mn, *mx);
  // Heavily skewed tiny samples can put the mean outside the quantiles.
  const double m = mean(values);
  ci.low = std::min(ci.low, m);
  ci.high = std::max(ci.high, m);
  return ci;
}

}  // namespace mushra::stats
