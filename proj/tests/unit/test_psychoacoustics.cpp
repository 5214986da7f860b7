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
#include <random>
#include <sstream>

#include "mushra/psychoacoustics.hpp"
#include "support/signals.hpp"

namespace mushra::psy {
namespace {

using audio::Spectrogram;
using audio::StftConfig;

const CriticalBandPartition& default_partition() {
  static const auto p = CriticalBandPartition::make(48000, 2048);
  return p;
}

// Adds noise whose band power is threshold * 10^(offset/10) in every cell,
// built bin by bin with random phase and a flat magnitude inside the band.
Spectrogram add_threshold_shaped_noise(const Spectrogram& ref, const MaskingThreshold& thr,
                                       const CriticalBandPartition& p, double offset_db,
                                       std::uint64_t seed) {
  const auto weights = bin_power_weights(ref.config);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  Spectrogram out = ref;
  for (std::size_t f = 0; f < ref.num_frames; ++f) {
    auto bins = out.frame(f);
    for (std::size_t b = 0; b < p.num_bands(); ++b) {
      double weight_sum = 0.0;
      for (std::size_t k = p.band_start[b]; k < p.band_start[b + 1]; ++k) weight_sum += weights[k];
      const double mag = std::sqrt(thr.at(f, b) * std::pow(10.0, offset_db / 10.0) / weight_sum);
      for (std::size_t k = p.band_start[b]; k < p.band_start[b + 1]; ++k) {
        const bool real_only = k == 0 || k + 1 == bins.size();
        bins[k] += real_only ? std::complex<double>(mag, 0.0) : std::polar(mag, phase(rng));
      }
    }
  }
  return out;
}

TEST(Partition, ContiguousCoveringBarkBands) {
  const auto& p = default_partition();
  EXPECT_GE(p.num_bands(), 40u);
  EXPECT_LE(p.num_bands(), 52u);
  EXPECT_EQ(p.band_start.front(), 0u);
  EXPECT_EQ(p.band_start.back(), 1025u);
  EXPECT_EQ(p.band_edges_hz.front(), 0.0);
  EXPECT_EQ(p.band_edges_hz.back(), 24000.0);
  for (std::size_t b = 0; b < p.num_bands(); ++b) {
    EXPECT_GE(p.band_size(b), 1u);
    EXPECT_LT(p.band_edges_hz[b], p.band_edges_hz[b + 1]);
    // no band wider than the requested half Bark, measured bin to bin
    const double bin_hz = 48000.0 / 2048.0;
    const double lo = hz_to_bark(p.band_start[b] * bin_hz);
    const double hi = hz_to_bark((p.band_start[b + 1] - 1) * bin_hz);
    EXPECT_LT(hi - lo, 0.5 + 1e-12);
  }
  for (std::size_t k = 0; k < p.num_bins(); ++k) {
    const auto b = p.bin_to_band[k];
    EXPECT_GE(k, p.band_start[b]);
    EXPECT_LT(k, p.band_start[b + 1]);
  }
}

TEST(MaskingThreshold, SilenceSitsOnThresholdInQuiet) {
  const std::vector<double> x(20000, 0.0);
  const auto spec = audio::stft(x, 48000, StftConfig{});
  const auto thr = masking_threshold(spec, default_partition());
  for (std::size_t f = 0; f < thr.num_frames; ++f) {
    for (std::size_t b = 0; b < thr.num_bands; ++b) {
      EXPECT_EQ(thr.at(f, b), thr.quiet[b]);
      EXPECT_GT(thr.at(f, b), 0.0);
    }
  }
}

TEST(MaskingThreshold, QuietFloorIsBelowTwentyFourBitNoise) {
  const auto& p = default_partition();
  const auto spec = audio::stft(std::vector<double>(4096, 0.0), 48000, StftConfig{});
  const auto thr = masking_threshold(spec, p);
  double total = 0.0;
  for (double q : thr.quiet) total += q;
  EXPECT_LT(10.0 * std::log10(total), -118.0);
}

TEST(MaskingThreshold, WhiteNoiseThresholdTracksBandEnergyByOffset) {
  const auto x = testing::white(48000, 1.0, 17);
  const StftConfig cfg;
  const auto spec = audio::stft(x, 48000, cfg);
  const auto& p = default_partition();
  const MaskingConfig mc;
  const auto thr = masking_threshold(spec, p, mc);

  // Independent band energies from a direct DFT of a few frames.
  const auto w = cfg.analysis_window();
  double window_energy = 0.0;
  for (double v : w) window_energy += v * v;
  for (std::size_t f : {5u, 20u, 40u}) {
    std::vector<double> band(p.num_bands(), 0.0);
    for (std::size_t k = 0; k < cfg.num_bins(); ++k) {
      std::complex<double> acc = 0.0;
      for (std::size_t i = 0; i < cfg.fft_size; ++i) {
        const long s = static_cast<long>(f * cfg.hop_size + i) - static_cast<long>(cfg.front_padding());
        const double v = (s >= 0 && s < static_cast<long>(x.size())) ? x[static_cast<std::size_t>(s)] : 0.0;
        acc += v * w[i] * std::polar(1.0, -2.0 * std::numbers::pi * k * i / cfg.fft_size);
      }
      const double one_sided = (k == 0 || k + 1 == cfg.num_bins()) ? 1.0 : 2.0;
      band[p.bin_to_band[k]] += 2.0 * one_sided * std::norm(acc) / (cfg.fft_size * window_energy);
    }
    for (std::size_t b = 0; b < p.num_bands(); ++b) {
      EXPECT_NEAR(thr.energy(f, b), band[b], 1e-9 * band[b]);
    }
  }

  // Long-term offset per band. Spreading from neighbouring bands moves it by
  // at most 1 dB on a spectrum that is flat in Hz.
  for (std::size_t b = 0; b < p.num_bands(); ++b) {
    double e = 0.0, t = 0.0;
    for (std::size_t f = 2; f + 2 < thr.num_frames; ++f) {
      e += thr.energy(f, b);
      t += thr.at(f, b);
    }
    EXPECT_NEAR(10.0 * std::log10(e / t), mc.masking_offset_db, 1.0) << "band " << b;
  }
}

TEST(MaskingThreshold, SixDecibelGainScalesSignalDominatedBands) {
  const auto x = testing::tonal(30000);
  std::vector<double> louder(x);
  for (auto& v : louder) v *= 2.0;
  const auto& p = default_partition();
  const auto a = masking_threshold(audio::stft(x, 48000, StftConfig{}), p);
  const auto b = masking_threshold(audio::stft(louder, 48000, StftConfig{}), p);
  std::size_t checked = 0;
  for (std::size_t i = 0; i < a.threshold.size(); ++i) {
    if (a.threshold[i] > 1e3 * a.quiet[i % a.num_bands]) {
      EXPECT_NEAR(10.0 * std::log10(b.threshold[i] / a.threshold[i]), 20.0 * std::log10(2.0), 1e-9);
      ++checked;
    }
  }
  EXPECT_GT(checked, a.threshold.size() / 2);
}

TEST(MaskingThreshold, AddingMaskerEnergyNeverLowersThresholds) {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<std::size_t> pick_bin(0, 1024);
  std::uniform_real_distribution<double> boost(1.01, 30.0);
  const auto& p = default_partition();
  for (int trial = 0; trial < 20; ++trial) {
    const auto x = testing::white(4096, 0.001 + 0.05 * trial, 100 + trial);
    auto spec = audio::stft(x, 48000, StftConfig{});
    const auto before = masking_threshold(spec, p);
    const std::size_t k = pick_bin(rng);
    const double g = boost(rng);
    for (std::size_t f = 0; f < spec.num_frames; ++f) spec.frame(f)[k] *= g;
    const auto after = masking_threshold(spec, p);
    for (std::size_t i = 0; i < before.threshold.size(); ++i) {
      EXPECT_GE(after.threshold[i], before.threshold[i] * (1.0 - 1e-12));
    }
  }
}

TEST(MaskingThreshold, ChannelsAreIndependent) {
  const auto in = testing::random_stereo(10000, 4, 0.3);
  auto swapped = in;
  std::swap(swapped.channels[0], swapped.channels[1]);
  const auto& p = default_partition();
  const auto a = audio::stft(in, StftConfig{});
  const auto b = audio::stft(swapped, StftConfig{});
  EXPECT_EQ(masking_threshold(a[0], p).threshold, masking_threshold(b[1], p).threshold);
  EXPECT_EQ(masking_threshold(a[1], p).threshold, masking_threshold(b[0], p).threshold);
}

TEST(MaskingThreshold, ParallelKernelMatchesSerialReference) {
  const auto spec = audio::stft(testing::noisy(48000, 3), 48000, StftConfig{});
  const auto a = masking_threshold(spec, default_partition());
  const auto b = masking_threshold_serial(spec, default_partition());
  EXPECT_EQ(a.threshold, b.threshold);
  EXPECT_EQ(a.band_energy, b.band_energy);
}

TEST(MaskingThreshold, GeometryMismatchRejected) {
  const auto spec = audio::stft(std::vector<double>(3000, 0.0), 48000, StftConfig{1024, 512});
  EXPECT_THROW(masking_threshold(spec, default_partition()), std::invalid_argument);
}

TEST(Nmr, IdenticalSignalsReportSentinelFloor) {
  const auto spec = audio::stft(testing::tonal(20000), 48000, StftConfig{});
  const auto r = measure_nmr(spec, spec, default_partition());
  EXPECT_EQ(r.mean_nmr_db, -120.0);
  for (double v : r.nmr_db) EXPECT_EQ(v, -120.0);
}

TEST(Nmr, ThresholdShapedNoiseMeasuresItsOffset) {
  const auto& p = default_partition();
  for (const auto& x : {testing::tonal(48000), testing::noisy(48000, 8), testing::transient(48000, 9)}) {
    const auto ref = audio::stft(x, 48000, StftConfig{});
    const auto thr = masking_threshold(ref, p);
    for (double k : {0.0, 6.0, 12.0, 18.0, 24.0}) {
      const auto degraded = add_threshold_shaped_noise(ref, thr, p, k, 1234);
      const auto r = measure_nmr(ref, degraded, p);
      EXPECT_NEAR(r.mean_nmr_db, k, 0.5);
      EXPECT_GT(r.active_frames, 0u);
      // per-cell values are exact by construction
      EXPECT_NEAR(r.at(10, 10), k, 1e-6);
    }
  }
}

TEST(Nmr, SilentFramesAreExcludedFromTheMean) {
  std::vector<double> x(48000, 0.0);
  const auto tone = testing::sine(1000.0, 0.5, 24000);
  std::copy(tone.begin(), tone.end(), x.begin());
  const auto& p = default_partition();
  const auto ref = audio::stft(x, 48000, StftConfig{});
  const auto r = measure_nmr(ref, add_threshold_shaped_noise(ref, masking_threshold(ref, p), p, 6.0, 5), p);
  EXPECT_LT(r.active_frames, r.num_frames);
  EXPECT_GT(r.active_frames, r.num_frames / 3);
  EXPECT_NEAR(r.mean_nmr_db, 6.0, 1e-6);
}

TEST(Nmr, GeometryMismatchRejected) {
  const auto a = audio::stft(std::vector<double>(3000, 0.0), 48000, StftConfig{});
  const auto b = audio::stft(std::vector<double>(5000, 0.0), 48000, StftConfig{});
  EXPECT_THROW(measure_nmr(a, b, default_partition()), std::invalid_argument);
}

TEST(ThresholdDump, MatrixTextFormat) {
  const auto spec = audio::stft(std::vector<double>(2048, 0.0), 48000, StftConfig{});
  const auto thr = masking_threshold(spec, default_partition());
  std::ostringstream out;
  write_threshold_matrix(out, thr);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "# frames=" + std::to_string(thr.num_frames) + " bands=" +
                      std::to_string(thr.num_bands) + " unit=dB");
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    double v;
    std::size_t n = 0;
    while (fields >> v) ++n;
    EXPECT_EQ(n, thr.num_bands);
    ++rows;
  }
  EXPECT_EQ(rows, thr.num_frames);
}

}  // namespace
}  // namespace mushra::psy
