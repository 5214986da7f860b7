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
#include <span>
#include <vector>

namespace mushra::audio {

inline constexpr int kDatasetSampleRate = 48000;

// Linear PCM, nominally in [-1, 1], one vector per channel.
struct AudioBuffer {
  int sample_rate = kDatasetSampleRate;
  std::vector<std::vector<double>> channels;

  static AudioBuffer zeros(int sample_rate, std::size_t num_channels,
                           std::size_t num_frames);
  static AudioBuffer mono(int sample_rate, std::vector<double> samples);
  static AudioBuffer stereo(int sample_rate, std::vector<double> left,
                            std::vector<double> right);

  std::size_t num_channels() const { return channels.size(); }
  std::size_t num_frames() const {
    return channels.empty() ? 0 : channels.front().size();
  }
  bool empty() const { return num_frames() == 0; }

  std::span<const double> channel(std::size_t i) const { return channels.at(i); }
  std::span<double> channel(std::size_t i) { return channels.at(i); }

  // Single-channel view copied out as its own buffer.
  AudioBuffer extract(std::size_t i) const;

  // Throws std::invalid_argument on a non-positive rate or ragged channels.
  void validate() const;

  bool operator==(const AudioBuffer&) const = default;
};

// Sum of squares over all channels.
double energy(const AudioBuffer& buffer);
double rms(std::span<const double> samples);

}  // namespace mushra::audio
