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

#include "mushra/stft.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mushra/fft.hpp"

namespace mushra::audio {

std::string to_string(Window w) {
  switch (w) {
    case Window::kSine: return "sine";
    case Window::kHann: return "hann";
    case Window::kRectangular: return "rectangular";
  }
  return "?";
}

Window window_from_string(const std::string& name) {
  if (name == "sine") return Window::kSine;
  if (name == "hann") return Window::kHann;
  if (name == "rectangular") return Window::kRectangular;
  throw std::invalid_argument("unknown window '" + name + "'");
}

std::vector<double> StftConfig::analysis_window() const {
  std::vector<double> w(fft_size, 1.0);
  const double n = static_cast<double>(fft_size);
  for (std::size_t i = 0; i < fft_size; ++i) {
    const double x = static_cast<double>(i);
    switch (window) {
      case Window::kSine: w[i] = std::sin(std::numbers::pi * (x + 0.5) / n); break;
      case Window::kHann: w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * x / n); break;
      case Window::kRectangular: break;
    }
  }
  return w;
}

std::vector<double> StftConfig::synthesis_window() const {
  if (window == Window::kSine) return analysis_window();
  return std::vector<double>(fft_size, 1.0);
}

double StftConfig::overlap_gain() const {
  const auto wa = analysis_window();
  const auto ws = synthesis_window();
  double g = 0.0;
  for (std::size_t i = 0; i < fft_size; i += hop_size) g += wa[i] * ws[i];
  return g;
}

void StftConfig::validate() const {
  if (fft_size < 4 || (fft_size & (fft_size - 1)) != 0) {
    throw std::invalid_argument("fft_size must be a power of two >= 4");
  }
  if (hop_size == 0 || hop_size > fft_size) {
    throw std::invalid_argument("hop_size must be in (0, fft_size]");
  }
  const auto wa = analysis_window();
  const auto ws = synthesis_window();
  // Every residue class modulo hop must sum to the same value.
  double reference = 0.0;
  for (std::size_t r = 0; r < hop_size; ++r) {
    double sum = 0.0;
    for (std::size_t i = r; i < fft_size; i += hop_size) sum += wa[i] * ws[i];
    if (r == 0) reference = sum;
    if (reference <= 0.0 || std::abs(sum - reference) > 1e-9 * reference) {
      throw std::invalid_argument("window '" + to_string(window) + "' with hop " +
                                  std::to_string(hop_size) + " is not COLA");
    }
  }
}

std::size_t StftConfig::frame_count(std::size_t length) const {
  const std::size_t padded = length + front_padding();
  return (padded + hop_size - 1) / hop_size;
}

bool Spectrogram::same_geometry(const Spectrogram& other) const {
  return config == other.config && sample_rate == other.sample_rate &&
         num_samples == other.num_samples && num_frames == other.num_frames &&
         bins.size() == other.bins.size();
}

Spectrogram stft(std::span<const double> samples, int sample_rate, const StftConfig& config,
                 std::size_t channel_id) {
  config.validate();
  Spectrogram spec;
  spec.config = config;
  spec.sample_rate = sample_rate;
  spec.channel_id = channel_id;
  spec.num_samples = samples.size();
  spec.num_frames = config.frame_count(samples.size());
  spec.bins.assign(spec.num_frames * config.num_bins(), {});

  const auto window = config.analysis_window();
  const RealFft fft(config.fft_size);
  const std::size_t pad = config.front_padding();
  std::vector<double> frame(config.fft_size);
  for (std::size_t f = 0; f < spec.num_frames; ++f) {
    // Frame f starts at padded index f*hop, i.e. signal index f*hop - pad.
    for (std::size_t i = 0; i < config.fft_size; ++i) {
      const std::size_t p = f * config.hop_size + i;
      const double x = (p >= pad && p - pad < samples.size()) ? samples[p - pad] : 0.0;
      frame[i] = x * window[i];
    }
    fft.forward(frame, spec.frame(f));
  }
  return spec;
}

std::vector<Spectrogram> stft(const AudioBuffer& buffer, const StftConfig& config) {
  buffer.validate();
  std::vector<Spectrogram> out;
  out.reserve(buffer.num_channels());
  for (std::size_t c = 0; c < buffer.num_channels(); ++c) {
    out.push_back(stft(buffer.channel(c), buffer.sample_rate, config, c));
  }
  return out;
}

AudioBuffer istft(const Spectrogram& spec) {
  const StftConfig& config = spec.config;
  config.validate();
  if (spec.bins.size() != spec.num_frames * config.num_bins()) {
    throw std::invalid_argument("spectrogram frame sizes are inconsistent");
  }
  if (spec.num_frames != config.frame_count(spec.num_samples)) {
    throw std::invalid_argument("spectrogram frame count does not match its length");
  }

  const auto window = config.synthesis_window();
  const double scale = 1.0 / (static_cast<double>(config.fft_size) * config.overlap_gain());
  const RealFft fft(config.fft_size);
  const std::size_t pad = config.front_padding();

  std::vector<double> out(spec.num_samples, 0.0);
  std::vector<double> frame(config.fft_size);
  for (std::size_t f = 0; f < spec.num_frames; ++f) {
    fft.inverse(spec.frame(f), frame);
    for (std::size_t i = 0; i < config.fft_size; ++i) {
      const std::size_t p = f * config.hop_size + i;
      if (p < pad || p - pad >= out.size()) continue;
      out[p - pad] += frame[i] * window[i] * scale;
    }
  }
  return AudioBuffer::mono(spec.sample_rate, std::move(out));
}

AudioBuffer istft(std::span<const Spectrogram> channels) {
  if (channels.empty()) throw std::invalid_argument("no channels to synthesize");
  AudioBuffer out;
  out.sample_rate = channels.front().sample_rate;
  for (const auto& spec : channels) {
    if (!spec.same_geometry(channels.front())) {
      throw std::invalid_argument("channel spectrograms differ in geometry");
    }
    out.channels.push_back(std::move(istft(spec).channels.front()));
  }
  return out;
}

}  // namespace mushra::audio
