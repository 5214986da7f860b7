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
#include <cstddef>
#include <span>
#include <string>

namespace mushra::stats {

struct WilcoxonResult {
  double w_plus = 0.0;        // sum of ranks of positive differences
  std::size_t n_nonzero = 0;  // pairs left after dropping zero differences
  double p_value = 1.0;       // two-sided
  bool exact = true;
};

// Paired two-sided signed-rank test on d = b - a. Zero differences are
// dropped; ties share midranks. Up to kExactLimit non-zero pairs the null
// distribution is enumerated exactly (counting over doubled midranks, which
// are integers); beyond it a tie-corrected normal approximation is used.
inline constexpr std::size_t kExactLimit = 400;
WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b);

struct StarThresholds {
  std::array<double, 3> levels{0.05, 0.01, 0.001};  // *, **, ***
};

// "", "*", "**" or "***".
std::string stars(double p, const StarThresholds& thresholds = {});

}  // namespace mushra::stats
