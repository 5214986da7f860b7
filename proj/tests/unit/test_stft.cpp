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

#include "mushra/stft.hpp"
#include "support/signals.hpp"

namespace mushra::audio {
namespace {

double relative_rms_error(std::span<const double> a, std::span<const double> b) {
  double err = 0.0, ref = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) {
    err += (a[n] - b[n]) * (a[n] - b[n]);
    ref += a[n] * a[n];
  }
  return std::sqrt(err / ref);
}

TEST(Stft, DefaultsAreSineWindowHalfOverlap) {
  StftConfig c;
  EXPECT_EQ(c.fft_size, 2048u);
  EXPECT_EQ(c.hop_size, 1024u);
  EXPECT_EQ(c.window, Window::kSine);
  EXPECT_NO_THROW(c.validate());
  EXPECT_NEAR(c.overlap_gain(), 1.0, 1e-12);
}

TEST(Stft, FrameCountFollowsPaddingRule) {
  StftConfig c;
  for (std::size_t len : {1u, 1023u, 1024u, 1025u, 48000u}) {
    const auto x = testing::white(len, 0.5, len);
    const auto s = stft(x, 48000, c);
    EXPECT_EQ(s.num_frames, (len + 1024 + 1023) / 1024) << len;
    EXPECT_EQ(s.bins.size(), s.num_frames * 1025);
  }
}

TEST(Stft, SineEnergyPeaksAtExpectedBin) {
  const auto x = testing::sine(1000.0, 0.5, 48000);
  const auto s = stft(x, 48000, StftConfig{});
  const auto frame = s.frame(s.num_frames / 2);
  std::size_t peak = 0;
  for (std::size_t k = 1; k < frame.size(); ++k) {
    if (std::abs(frame[k]) > std::abs(frame[peak])) peak = k;
  }
  EXPECT_EQ(peak, 43u);  // 1000 * 2048 / 48000 = 42.67
}

TEST(Stft, ZeroSignalGivesZeroFrames) {
  const std::vector<double> x(5000, 0.0);
  const auto s = stft(x, 48000, StftConfig{});
  for (const auto& v : s.bins) EXPECT_EQ(v, std::complex<double>(0.0, 0.0));
}

TEST(Stft, ParsevalPerFrameAndOverall) {
  const StftConfig c;
  const auto x = testing::white(20000, 0.7, 3);
  const auto s = stft(x, 48000, c);
  const auto w = c.analysis_window();
  const double n = static_cast<double>(c.fft_size);
  double spectral_total = 0.0, windowed_total = 0.0;
  for (std::size_t f = 0; f < s.num_frames; ++f) {
    double spectral = 0.0;
    const auto bins = s.frame(f);
    for (std::size_t k = 0; k < bins.size(); ++k) {
      const double weight = (k == 0 || k + 1 == bins.size()) ? 1.0 : 2.0;
      spectral += weight * std::norm(bins[k]) / n;
    }
    // Direct time-domain windowed energy of the same frame.
    double windowed = 0.0;
    for (std::size_t i = 0; i < c.fft_size; ++i) {
      const long p = static_cast<long>(f * c.hop_size + i) - static_cast<long>(c.front_padding());
      const double v = (p >= 0 && p < static_cast<long>(x.size())) ? x[static_cast<std::size_t>(p)] : 0.0;
      windowed += (v * w[i]) * (v * w[i]);
    }
    EXPECT_NEAR(spectral, windowed, 1e-9 * windowed + 1e-12);
    spectral_total += spectral;
    windowed_total += windowed;
  }
  // Sine window squared overlap-adds to one, so frame energies add up to
  // the signal energy.
  double time_energy = 0.0;
  for (double v : x) time_energy += v * v;
  EXPECT_NEAR(spectral_total / time_energy, 1.0, 1e-9);
}

TEST(Stft, RoundtripIsPerfectForColaConfigs) {
  const StftConfig configs[] = {
      {2048, 1024, Window::kSine}, {1024, 256, Window::kSine}, {512, 256, Window::kHann},
      {512, 128, Window::kHann},   {256, 256, Window::kRectangular}, {256, 64, Window::kRectangular},
  };
  for (const auto& c : configs) {
    for (std::size_t len : {997u, 4801u, 30011u}) {
      const auto x = testing::white(len, 1.0, len + c.hop_size);
      const auto y = istft(stft(x, 48000, c));
      ASSERT_EQ(y.num_frames(), len);
      EXPECT_LT(relative_rms_error(x, y.channel(0)), 1e-7)
          << to_string(c.window) << " " << c.fft_size << "/" << c.hop_size << " len " << len;
    }
  }
}

TEST(Stft, RejectsNonColaAndBadSizes) {
  EXPECT_THROW((StftConfig{2048, 768, Window::kSine}.validate()), std::invalid_argument);
  EXPECT_THROW((StftConfig{256, 96, Window::kRectangular}.validate()), std::invalid_argument);
  EXPECT_THROW((StftConfig{1000, 500, Window::kSine}.validate()), std::invalid_argument);
  EXPECT_THROW((StftConfig{1024, 0, Window::kSine}.validate()), std::invalid_argument);
  EXPECT_THROW((StftConfig{1024, 2048, Window::kSine}.validate()), std::invalid_argument);
  const std::vector<double> x(100, 0.0);
  EXPECT_THROW(stft(x, 48000, StftConfig{2048, 768, Window::kSine}), std::invalid_argument);
}

TEST(Stft, ZeroSpectrogramIsSilence) {
  const auto x = testing::white(3000, 1.0, 1);
  auto s = stft(x, 48000, StftConfig{});
  for (auto& v : s.bins) v = 0.0;
  const auto y = istft(s);
  for (double v : y.channel(0)) EXPECT_EQ(v, 0.0);
}

TEST(Stft, SingleBinSynthesizesWindowedCosineBurst) {
  const StftConfig c{512, 256, Window::kSine};
  const std::size_t len = 4000;
  const std::vector<double> zeros(len, 0.0);
  auto s = stft(zeros, 48000, c);
  const std::size_t frame = 5, bin = 20;
  const double a = 3.0;
  s.frame(frame)[bin] = a;
  const auto y = istft(s);

  // Analytic: (2a/N) cos(2 pi bin i / N) shaped by the synthesis window,
  // placed at frame*hop - padding.
  const auto w = c.synthesis_window();
  const double n = static_cast<double>(c.fft_size);
  std::vector<double> expected(len, 0.0);
  for (std::size_t i = 0; i < c.fft_size; ++i) {
    const long p = static_cast<long>(frame * c.hop_size + i) - static_cast<long>(c.front_padding());
    if (p < 0 || p >= static_cast<long>(len)) continue;
    expected[static_cast<std::size_t>(p)] =
        2.0 * a / n * std::cos(2.0 * std::numbers::pi * bin * i / n) * w[i] / c.overlap_gain();
  }
  for (std::size_t p = 0; p < len; ++p) EXPECT_NEAR(y.channels[0][p], expected[p], 1e-13);
}

TEST(Stft, InconsistentSpectrogramRejected) {
  const auto x = testing::white(3000, 1.0, 1);
  auto s = stft(x, 48000, StftConfig{});
  s.bins.pop_back();
  EXPECT_THROW(istft(s), std::invalid_argument);
  auto t = stft(x, 48000, StftConfig{});
  t.num_samples += 5000;
  EXPECT_THROW(istft(t), std::invalid_argument);
}

TEST(Stft, MultichannelRoundtrip) {
  const auto in = testing::random_stereo(7777, 11);
  const auto specs = stft(in, StftConfig{});
  ASSERT_EQ(specs.size(), 2u);
  EXPECT_EQ(specs[1].channel_id, 1u);
  const auto out = istft(specs);
  for (std::size_t c = 0; c < 2; ++c) EXPECT_LT(relative_rms_error(in.channel(c), out.channel(c)), 1e-7);
}

}  // namespace
}  // namespace mushra::audio
