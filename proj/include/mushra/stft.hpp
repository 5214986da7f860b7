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

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mushra/audio_buffer.hpp"

namespace mushra::audio {

// Analysis/synthesis window pair.
//   kSine:        sine analysis, sine synthesis (product is a periodic Hann)
//   kHann:        periodic Hann analysis, rectangular synthesis
//   kRectangular: rectangular analysis and synthesis
enum class Window { kSine, kHann, kRectangular };

std::string to_string(Window w);
Window window_from_string(const std::string& name);

struct StftConfig {
  std::size_t fft_size = 2048;
  std::size_t hop_size = 1024;
  Window window = Window::kSine;

  std::size_t num_bins() const { return fft_size / 2 + 1; }

  // Throws std::invalid_argument unless fft_size is a power of two,
  // 0 < hop_size <= fft_size and the window pair overlap-adds to a constant.
  void validate() const;

  std::vector<double> analysis_window() const;
  std::vector<double> synthesis_window() const;
  // Constant value of sum_k wa(n - kH) * ws(n - kH).
  double overlap_gain() const;

  // Padding rule: fft_size - hop_size zeros are prepended so that every
  // input sample is covered by the full set of overlapping frames; the tail
  // is zero-padded up to the last frame. Frame count is
  // ceil((length + fft_size - hop_size) / hop_size).
  std::size_t frame_count(std::size_t length) const;
  std::size_t front_padding() const { return fft_size - hop_size; }

  bool operator==(const StftConfig&) const = default;
};

// One channel of complex STFT frames, stored frame-major.
struct Spectrogram {
  StftConfig config;
  int sample_rate = kDatasetSampleRate;
  std::size_t channel_id = 0;
  std::size_t num_samples = 0;  // length of the analysed signal
  std::size_t num_frames = 0;
  std::vector<std::complex<double>> bins;

  std::size_t num_bins() const { return config.num_bins(); }
  std::span<std::complex<double>> frame(std::size_t f) {
    return {bins.data() + f * num_bins(), num_bins()};
  }
  std::span<const std::complex<double>> frame(std::size_t f) const {
    return {bins.data() + f * num_bins(), num_bins()};
  }
  bool same_geometry(const Spectrogram& other) const;
};

Spectrogram stft(std::span<const double> samples, int sample_rate, const StftConfig& config,
                 std::size_t channel_id = 0);
std::vector<Spectrogram> stft(const AudioBuffer& buffer, const StftConfig& config);

// Returns a one-channel buffer of spec.num_samples frames.
AudioBuffer istft(const Spectrogram& spec);
AudioBuffer istft(std::span<const Spectrogram> channels);

}  // namespace mushra::audio
