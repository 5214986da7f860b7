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

#include "mushra/anchors.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mushra::audio {

std::vector<double> design_lowpass(double cutoff_hz, int sample_rate, const LowpassTemplate& spec) {
  const double nyquist = sample_rate / 2.0;
  if (!(cutoff_hz > 0.0) || cutoff_hz >= nyquist) {
    throw std::invalid_argument("lowpass cutoff must lie in (0, Nyquist)");
  }
  const double half_width =
      cutoff_hz * std::min(1.0 - spec.passband_edge, spec.stopband_edge - 1.0);
  if (!(half_width > 0.0)) throw std::invalid_argument("degenerate lowpass template");

  // Kaiser's formulas for beta and order.
  const double a = spec.attenuation_db;
  const double beta = a > 50.0 ? 0.1102 * (a - 8.7)
                    : a >= 21.0 ? 0.5842 * std::pow(a - 21.0, 0.4) + 0.07886 * (a - 21.0)
                                : 0.0;
  const double delta_omega = 2.0 * std::numbers::pi * (2.0 * half_width) / sample_rate;
  auto order = static_cast<std::size_t>(std::ceil((a - 7.95) / (2.285 * delta_omega)));
  if (order % 2 == 1) ++order;
  const std::size_t length = order + 1;

  const double fc = cutoff_hz / sample_rate;
  const double mid = static_cast<double>(order) / 2.0;
  const double i0_beta = std::cyl_bessel_i(0.0, beta);
  std::vector<double> taps(length);
  double sum = 0.0;
  for (std::size_t k = 0; k < length; ++k) {
    const double t = static_cast<double>(k) - mid;
    const double sinc = t == 0.0 ? 2.0 * fc
                                 : std::sin(2.0 * std::numbers::pi * fc * t) / (std::numbers::pi * t);
    const double r = t / mid;
    const double kaiser = std::cyl_bessel_i(0.0, beta * std::sqrt(std::max(0.0, 1.0 - r * r))) / i0_beta;
    taps[k] = sinc * kaiser;
    sum += taps[k];
  }
  for (double& t : taps) t /= sum;
  return taps;
}

namespace {

inline double fir_at(std::span<const double> x, std::span<const double> taps, std::size_t n) {
  const std::ptrdiff_t delay = static_cast<std::ptrdiff_t>(taps.size() / 2);
  const std::ptrdiff_t len = static_cast<std::ptrdiff_t>(x.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < taps.size(); ++k) {
    const std::ptrdiff_t i = static_cast<std::ptrdiff_t>(n) + delay - static_cast<std::ptrdiff_t>(k);
    if (i >= 0 && i < len) acc += taps[k] * x[static_cast<std::size_t>(i)];
  }
  return acc;
}

void check_taps(std::span<const double> taps) {
  if (taps.empty() || taps.size() % 2 == 0) {
    throw std::invalid_argument("linear-phase filter needs an odd number of taps");
  }
}

}  // namespace

std::vector<double> fir_filter_serial(std::span<const double> x, std::span<const double> taps) {
  check_taps(taps);
  std::vector<double> y(x.size());
  for (std::size_t n = 0; n < x.size(); ++n) y[n] = fir_at(x, taps, n);
  return y;
}

std::vector<double> fir_filter(std::span<const double> x, std::span<const double> taps) {
  check_taps(taps);
  std::vector<double> y(x.size());
  const auto len = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t n = 0; n < len; ++n) {
    y[static_cast<std::size_t>(n)] = fir_at(x, taps, static_cast<std::size_t>(n));
  }
  return y;
}

AudioBuffer lowpass_anchor(const AudioBuffer& buffer, double cutoff_hz, const LowpassTemplate& spec) {
  buffer.validate();
  const auto taps = design_lowpass(cutoff_hz, buffer.sample_rate, spec);
  AudioBuffer out;
  out.sample_rate = buffer.sample_rate;
  for (const auto& c : buffer.channels) out.channels.push_back(fir_filter(c, taps));
  return out;
}

AudioBuffer mono_anchor(const AudioBuffer& stereo) {
  stereo.validate();
  if (stereo.num_channels() != 2) {
    throw std::invalid_argument("mono anchor needs a 2-channel input");
  }
  std::vector<double> m(stereo.num_frames());
  for (std::size_t n = 0; n < m.size(); ++n) {
    m[n] = (stereo.channels[0][n] + stereo.channels[1][n]) / 2.0;
  }
  return AudioBuffer::stereo(stereo.sample_rate, m, m);
}

}  // namespace mushra::audio
