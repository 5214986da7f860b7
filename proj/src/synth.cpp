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

#include "mushra/synth.hpp"

#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>

#include "mushra/commands.hpp"
#include "mushra/seeds.hpp"
#include "mushra/wav.hpp"

namespace mushra::app {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Note sequence with exponential decays and slightly inharmonic partials.
std::vector<double> struck_notes(std::size_t n, int rate, double note_s, std::mt19937_64& rng) {
  std::vector<double> y(n, 0.0);
  const double scale[] = {523.25, 587.33, 659.25, 783.99, 880.0, 1046.5};
  std::uniform_int_distribution<int> pick(0, 5);
  const auto step = static_cast<std::size_t>(note_s * rate);
  for (std::size_t start = 0; start < n; start += step) {
    const double f0 = scale[pick(rng)];
    for (std::size_t i = start; i < n && i < start + 3 * step; ++i) {
      const double t = static_cast<double>(i - start) / rate;
      const double env = std::exp(-t * 3.0);
      y[i] += 0.25 * env * (std::sin(kTwoPi * f0 * t) + 0.4 * std::sin(kTwoPi * 2.76 * f0 * t) +
                            0.2 * std::sin(kTwoPi * 5.4 * f0 * t));
    }
  }
  return y;
}

// Sustained harmonic tone with vibrato.
std::vector<double> bowed_tone(std::size_t n, int rate, double f0) {
  std::vector<double> y(n);
  double phase = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / rate;
    phase += kTwoPi * f0 * (1.0 + 0.004 * std::sin(kTwoPi * 5.5 * t)) / rate;
    double v = 0.0;
    for (int h = 1; h <= 12; ++h) v += std::sin(h * phase) / (h * 1.3);
    y[i] = 0.18 * v * (0.8 + 0.2 * std::sin(kTwoPi * 0.5 * t));
  }
  return y;
}

// Harmonic source with a syllable-rate envelope, loosely speech-like.
std::vector<double> voice(std::size_t n, int rate, double f0, std::mt19937_64& rng) {
  std::vector<double> y(n);
  std::uniform_real_distribution<double> jitter(0.9, 1.1);
  double phase = 0.0, rate_hz = 4.0 * jitter(rng);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / rate;
    phase += kTwoPi * f0 * (1.0 + 0.05 * std::sin(kTwoPi * 0.7 * t)) / rate;
    double v = 0.0;
    for (int h = 1; h <= 20; ++h) {
      const double fh = h * f0;
      const double formant = std::exp(-std::pow((fh - 700.0) / 400.0, 2)) + 0.5 * std::exp(-std::pow((fh - 1800.0) / 500.0, 2));
      v += (0.2 + formant) * std::sin(h * phase) / h;
    }
    const double env = std::pow(std::max(0.0, std::sin(kTwoPi * rate_hz * t / 2.0)), 2);
    y[i] = 0.3 * v * env;
  }
  return y;
}

std::vector<double> noise(std::size_t n, double level, std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, level);
  std::vector<double> y(n);
  double lp = 0.0;
  for (auto& v : y) {
    lp = 0.7 * lp + 0.3 * nd(rng);
    v = lp;
  }
  return y;
}

// Kick-like thumps and hi-hat-like noise bursts on a 120 bpm grid.
std::vector<double> beat(std::size_t n, int rate, std::mt19937_64& rng) {
  std::vector<double> y(n, 0.0);
  std::normal_distribution<double> nd(0.0, 1.0);
  const auto beat_len = static_cast<std::size_t>(0.5 * rate);
  for (std::size_t b = 0; b * beat_len / 2 < n; ++b) {
    const std::size_t start = b * beat_len / 2;
    for (std::size_t i = start; i < n && i < start + beat_len / 2; ++i) {
      const double t = static_cast<double>(i - start) / rate;
      if (b % 2 == 0) y[i] += 0.5 * std::exp(-t * 25.0) * std::sin(kTwoPi * (60.0 + 80.0 * std::exp(-t * 30.0)) * t);
      y[i] += 0.06 * std::exp(-t * 60.0) * nd(rng);
    }
  }
  return y;
}

std::vector<double> chord(std::size_t n, int rate) {
  std::vector<double> y(n);
  const double notes[] = {220.0, 277.18, 329.63, 110.0};
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / rate;
    double v = 0.0;
    for (double f : notes) v += std::sin(kTwoPi * f * t) + 0.3 * std::sin(kTwoPi * 2 * f * t);
    y[i] = 0.06 * v;
  }
  return y;
}

}  // namespace

StereoImage image_for(const std::string& item) {
  if (item == "glock" || item == "violin") return StereoImage::kCentered;
  if (item.rfind("pan", 0) == 0) return StereoImage::kHardPanned;
  return StereoImage::kWide;
}

audio::AudioBuffer synthesize_item(const std::string& item, double seconds, std::uint64_t seed, int sample_rate) {
  const auto image = image_for(item);
  if (!(seconds > 0.0)) throw std::invalid_argument("duration must be positive");
  const auto n = static_cast<std::size_t>(seconds * sample_rate);
  std::mt19937_64 rng(seed);
  std::vector<double> l(n), r(n);
  switch (image) {
    case StereoImage::kCentered: {
      const auto src = item == "glock" ? struck_notes(n, sample_rate, 0.4, rng) : bowed_tone(n, sample_rate, 392.0);
      const auto al = noise(n, 0.002, rng), ar = noise(n, 0.002, rng);
      for (std::size_t i = 0; i < n; ++i) {
        l[i] = src[i] + al[i];
        r[i] = src[i] + ar[i];
      }
      break;
    }
    case StereoImage::kWide: {
      const auto drums = beat(n, sample_rate, rng);
      const auto pad = chord(n, sample_rate);
      const auto lead = bowed_tone(n, sample_rate, 523.25);
      const auto nl = noise(n, 0.02, rng), nr = noise(n, 0.02, rng);
      for (std::size_t i = 0; i < n; ++i) {
        l[i] = drums[i] + 0.8 * pad[i] + 0.5 * lead[i] + nl[i];
        r[i] = drums[i] + 0.5 * pad[i] + 0.2 * lead[i] + nr[i];
      }
      break;
    }
    case StereoImage::kHardPanned: {
      const auto talker = voice(n, sample_rate, item == "panDialogM" ? 120.0 : 210.0, rng);
      const auto drums = beat(n, sample_rate, rng);
      const auto pad = chord(n, sample_rate);
      for (std::size_t i = 0; i < n; ++i) {
        l[i] = talker[i];
        r[i] = 0.6 * drums[i] + pad[i];
      }
      break;
    }
  }
  // 10 ms fades keep the edges click-free.
  const auto fade = std::min<std::size_t>(n / 2, static_cast<std::size_t>(0.01 * sample_rate));
  for (std::size_t i = 0; i < fade; ++i) {
    const double g = static_cast<double>(i) / static_cast<double>(fade);
    l[i] *= g;
    r[i] *= g;
    l[n - 1 - i] *= g;
    r[n - 1 - i] *= g;
  }
  return audio::AudioBuffer::stereo(sample_rate, std::move(l), std::move(r));
}

void cmd_synth(const RunConfig& config, double seconds, std::ostream& log) {
  std::filesystem::create_directories(config.paths.items_dir);
  for (const auto& [item, kinds] : required_items(config)) {
    const auto buffer = synthesize_item(item, seconds, derive_seed(config.seed, "synth|" + item));
    const auto path = (std::filesystem::path(config.paths.items_dir) / (item + ".wav")).string();
    audio::write_wav(buffer, path, audio::BitDepth::kPcm24);
    log << "wrote " << path << "\n";
  }
}

}  // namespace mushra::app
