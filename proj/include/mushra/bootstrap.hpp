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

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace mushra::stats {

enum class CiMethod {
  kPercentile,
  // Percentile interval at the widened level of Hesterberg (2015): the tail
  // mass is Phi(-sqrt(n/(n-1)) * t_{n-1, 1-alpha/2}), which corrects the
  // narrowness of the plain percentile interval at small n.
  kExpandedPercentile,
};

std::string to_string(CiMethod m);
CiMethod ci_method_from_string(const std::string& s);

struct BootstrapConfig {
  std::size_t resamples = 10000;
  double level = 0.95;
  std::uint64_t seed = 0;
  CiMethod method = CiMethod::kExpandedPercentile;
  bool parallel = true;
};

struct Interval {
  double low = 0.0;
  double high = 0.0;
};

// Means of `resamples` resamples of `values` drawn with replacement. Resample b
// draws from its own generator seeded by (seed, b), so the OpenMP version
// returns exactly the serial result.
std::vector<double> bootstrap_means(std::span<const double> values, std::size_t resamples,
                                    std::uint64_t seed);
std::vector<double> bootstrap_means_serial(std::span<const double> values, std::size_t resamples,
                                           std::uint64_t seed);

// Linear-interpolation quantile (R type 7) of sorted data.
double quantile_sorted(std::span<const double> sorted, double p);

// Lower tail probability used for the interval endpoints.
double ci_tail(CiMethod method, double level, std::size_t n);

Interval bootstrap_ci(std::span<const double> values, const BootstrapConfig& config);

double mean(std::span<const double> values);

}  // namespace mushra::stats
