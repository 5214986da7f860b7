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

#include <cmath>
#include <complex>
#include <numbers>

#include "mushra/anchors.hpp"
#include "support/signals.hpp"

namespace mushra::audio {
namespace {

// RMS away from the filter's edge transients.
double steady_rms(std::span<const double> x) {
  const std::size_t skip = x.size() / 4;
  return rms(x.subspan(skip, x.size() - 2 * skip));
}

double gain_db(double hz, double cutoff) {
  const auto in = AudioBuffer::stereo(48000, testing::sine(hz, 0.5, 48000), testing::sine(hz, 0.5, 48000));
  const auto out = lowpass_anchor(in, cutoff);
  return 20.0 * std::log10(steady_rms(out.channel(0)) / steady_rms(in.channel(0)));
}

// DTFT magnitude of the taps, evaluated directly.
double response_db(const std::vector<double>& taps, double hz, int rate) {
  std::complex<double> h = 0.0;
  for (std::size_t k = 0; k < taps.size(); ++k) {
    h += taps[k] * std::polar(1.0, -2.0 * std::numbers::pi * hz * static_cast<double>(k) / rate);
  }
  return 20.0 * std::log10(std::abs(h));
}

TEST(LowpassAnchor, PassesOneKilohertzThroughLowAnchor) {
  EXPECT_LT(std::abs(gain_db(1000.0, kLowpassAnchor35)), 0.5);
}

TEST(LowpassAnchor, AttenuatesTenKilohertz) {
  EXPECT_LE(gain_db(10000.0, kLowpassAnchor70), -50.0);
  EXPECT_LE(gain_db(10000.0, kLowpassAnchor35), -50.0);
}

TEST(LowpassAnchor, FrequencyResponseMeetsTemplate) {
  for (double cutoff : {kLowpassAnchor35, kLowpassAnchor70}) {
    const auto taps = design_lowpass(cutoff, 48000);
    for (double f = 0.0; f <= 0.9 * cutoff; f += 10.0) {
      EXPECT_LE(std::abs(response_db(taps, f, 48000)), 0.5) << cutoff << " @ " << f;
    }
    for (double f = 1.25 * cutoff; f <= 24000.0; f += 10.0) {
      EXPECT_LE(response_db(taps, f, 48000), -50.0) << cutoff << " @ " << f;
    }
    EXPECT_NEAR(response_db(taps, cutoff, 48000), -6.02, 0.1);
  }
}

TEST(LowpassAnchor, LengthPreservedAndDelayCompensated) {
  std::vector<double> x(4001, 0.0);
  x[2000] = 1.0;
  const auto out = lowpass_anchor(AudioBuffer::mono(48000, x), kLowpassAnchor70);
  ASSERT_EQ(out.num_frames(), x.size());
  const auto y = out.channel(0);
  const auto peak = std::max_element(y.begin(), y.end()) - y.begin();
  EXPECT_EQ(peak, 2000);
  EXPECT_NEAR(y[1990], y[2010], 1e-15);  // symmetric impulse response
}

TEST(LowpassAnchor, SilenceStaysSilent) {
  const auto out = lowpass_anchor(AudioBuffer::zeros(48000, 2, 1000), kLowpassAnchor35);
  for (const auto& c : out.channels) for (double v : c) EXPECT_EQ(v, 0.0);
}

TEST(LowpassAnchor, IsLinear) {
  const auto x = testing::white(6000, 1.0, 1);
  const auto y = testing::white(6000, 1.0, 2);
  const double a = 0.7, b = -1.3;
  std::vector<double> mix(x.size());
  for (std::size_t n = 0; n < x.size(); ++n) mix[n] = a * x[n] + b * y[n];
  const auto fx = lowpass_anchor(AudioBuffer::mono(48000, x), kLowpassAnchor35);
  const auto fy = lowpass_anchor(AudioBuffer::mono(48000, y), kLowpassAnchor35);
  const auto fm = lowpass_anchor(AudioBuffer::mono(48000, mix), kLowpassAnchor35);
  for (std::size_t n = 0; n < x.size(); ++n) {
    EXPECT_NEAR(fm.channels[0][n], a * fx.channels[0][n] + b * fy.channels[0][n], 1e-9);
  }
}

TEST(LowpassAnchor, CutoffAtOrAboveNyquistRejected) {
  EXPECT_THROW(lowpass_anchor(AudioBuffer::zeros(8000, 1, 10), kLowpassAnchor35 * 2.0),
               std::invalid_argument);
  EXPECT_THROW(lowpass_anchor(AudioBuffer::zeros(8000, 1, 10), 4000.0), std::invalid_argument);
}

TEST(LowpassAnchor, ParallelKernelMatchesSerialReference) {
  const auto x = testing::white(20000, 1.0, 4);
  const auto taps = design_lowpass(kLowpassAnchor35, 48000);
  EXPECT_EQ(fir_filter(x, taps), fir_filter_serial(x, taps));
}

TEST(MonoAnchor, DualMonoInputUnchanged) {
  const auto x = testing::white(1000, 1.0, 3);
  const auto in = AudioBuffer::stereo(48000, x, x);
  EXPECT_EQ(mono_anchor(in), in);
}

TEST(MonoAnchor, AntiphaseCancelsToSilence) {
  auto x = testing::white(1000, 1.0, 3);
  auto y = x;
  for (auto& v : y) v = -v;
  const auto out = mono_anchor(AudioBuffer::stereo(48000, x, y));
  for (const auto& c : out.channels) for (double v : c) EXPECT_EQ(v, 0.0);
}

TEST(MonoAnchor, PerSampleMeanOnBothChannelsAndIdempotent) {
  const auto in = testing::random_stereo(2000, 21);
  const auto out = mono_anchor(in);
  for (std::size_t n = 0; n < in.num_frames(); ++n) {
    const double mean = 0.5 * (in.channels[0][n] + in.channels[1][n]);
    EXPECT_EQ(out.channels[0][n], mean);
    EXPECT_EQ(out.channels[1][n], mean);
  }
  EXPECT_EQ(mono_anchor(out), out);
  EXPECT_THROW(mono_anchor(AudioBuffer::zeros(48000, 1, 4)), std::invalid_argument);
}

}  // namespace
}  // namespace mushra::audio
