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

#include "mushra/audio_buffer.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mushra::audio {

AudioBuffer AudioBuffer::zeros(int sample_rate, std::size_t num_channels,
                               std::size_t num_frames) {
  AudioBuffer b;
  b.sample_rate = sample_rate;
  b.channels.assign(num_channels, std::vector<double>(num_frames, 0.0));
  return b;
}

AudioBuffer AudioBuffer::mono(int sample_rate, std::vector<double> samples) {
  AudioBuffer b;
  b.sample_rate = sample_rate;
  b.channels.push_back(std::move(samples));
  return b;
}

AudioBuffer AudioBuffer::stereo(int sample_rate, std::vector<double> left,
                                std::vector<double> right) {
  AudioBuffer b;
  b.sample_rate = sample_rate;
  b.channels.push_back(std::move(left));
  b.channels.push_back(std::move(right));
  b.validate();
  return b;
}

AudioBuffer AudioBuffer::extract(std::size_t i) const {
  return mono(sample_rate, channels.at(i));
}

void AudioBuffer::validate() const {
  if (sample_rate <= 0) {
    throw std::invalid_argument("sample rate must be positive, got " +
                                std::to_string(sample_rate));
  }
  for (const auto& c : channels) {
    if (c.size() != num_frames()) {
      throw std::invalid_argument("channels have unequal length");
    }
  }
}

double energy(const AudioBuffer& buffer) {
  double e = 0.0;
  for (const auto& c : buffer.channels) {
    for (double v : c) e += v * v;
  }
  return e;
}

double rms(std::span<const double> samples) {
  if (samples.empty()) return 0.0;
  double e = 0.0;
  for (double v : samples) e += v * v;
  return std::sqrt(e / static_cast<double>(samples.size()));
}

}  // namespace mushra::audio
