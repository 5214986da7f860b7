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

#include "mushra/wilcoxon.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace mushra::stats {

WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("paired samples differ in length");
  std::vector<double> d;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double x = b[i] - a[i];
    if (!std::isfinite(x)) throw std::invalid_argument("non-finite paired difference");
    if (x != 0.0) d.push_back(x);
  }
  WilcoxonResult r;
  r.n_nonzero = d.size();
  if (d.empty()) return r;

  const std::size_t n = d.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return std::fabs(d[i]) < std::fabs(d[j]);
  });
  // Doubled midranks: a tie group spanning ranks i+1..j gets i+j+1.
  std::vector<std::int64_t> rank2(n);
  double tie_term = 0.0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && std::fabs(d[order[j]]) == std::fabs(d[order[i]])) ++j;
    for (std::size_t k = i; k < j; ++k) rank2[order[k]] = static_cast<std::int64_t>(i + j + 1);
    const double t = static_cast<double>(j - i);
    tie_term += t * t * t - t;
    i = j;
  }
  std::int64_t total2 = 0, plus2 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    total2 += rank2[i];
    if (d[i] > 0) plus2 += rank2[i];
  }
  r.w_plus = static_cast<double>(plus2) / 2.0;
  const std::int64_t observed = std::llabs(2 * plus2 - total2);

  if (n <= kExactLimit) {
    // prob[s] = P(sum of doubled ranks of positive signs == s) under the null.
    std::vector<double> prob(static_cast<std::size_t>(total2) + 1, 0.0);
    prob[0] = 1.0;
    std::int64_t reach = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto r2 = rank2[i];
      for (std::int64_t s = reach; s >= 0; --s) {
        const double p = prob[static_cast<std::size_t>(s)];
        if (p == 0.0) continue;
        prob[static_cast<std::size_t>(s + r2)] += 0.5 * p;
        prob[static_cast<std::size_t>(s)] = 0.5 * p;
      }
      reach += r2;
    }
    double p = 0.0;
    for (std::int64_t s = 0; s <= total2; ++s) {
      if (std::llabs(2 * s - total2) >= observed) p += prob[static_cast<std::size_t>(s)];
    }
    r.p_value = std::min(1.0, p);
    r.exact = true;
    return r;
  }

  const double nd = static_cast<double>(n);
  const double var = nd * (nd + 1.0) * (2.0 * nd + 1.0) / 24.0 - tie_term / 48.0;
  const double z = (static_cast<double>(observed) / 4.0) / std::sqrt(var);
  r.p_value = std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(boost::math::normal(), z)));
  r.exact = false;
  return r;
}

std::string stars(double p, const StarThresholds& thresholds) {
  const auto& l = thresholds.levels;
  if (p < l[2]) return "***";
  if (p < l[1]) return "**";
  if (p < l[0]) return "*";
  return "";
}

}  // namespace mushra::stats
