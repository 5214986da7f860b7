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

#include <numbers>

#include "mushra/audio_buffer.hpp"

namespace mushra::audio {

// Energy-preserving gain; mid = (L+R)*g, side = (L-R)*g.
inline constexpr double kDefaultMsGain = 1.0 / std::numbers::sqrt2;

struct MidSidePair {
  AudioBuffer mid;   // 1 channel
  AudioBuffer side;  // 1 channel
  double gain = kDefaultMsGain;
};

// Throws std::invalid_argument unless the input has exactly two channels.
MidSidePair ms_forward(const AudioBuffer& stereo, double gain = kDefaultMsGain);
// Throws std::invalid_argument on mismatched mid/side length or rate.
AudioBuffer ms_inverse(const MidSidePair& pair);

}  // namespace mushra::audio
