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

#include <span>
#include <vector>

#include "mushra/audio_buffer.hpp"

namespace mushra::audio {

inline constexpr double kLowpassAnchor35 = 3500.0;
inline constexpr double kLowpassAnchor70 = 7000.0;

// Linear-phase FIR template relative to the cutoff. The -6 dB point sits at
// the cutoff; the transition band is symmetric and as wide as the tighter of
// the two edges allows.
struct LowpassTemplate {
  double passband_edge = 0.90;   // ripple <= 0.5 dB below this fraction of cutoff
  double stopband_edge = 1.25;   // attenuation >= 50 dB above this fraction
  double attenuation_db = 60.0;  // Kaiser design target, margin over 50 dB
};

// Kaiser-windowed sinc, odd length, unit DC gain.
std::vector<double> design_lowpass(double cutoff_hz, int sample_rate,
                                   const LowpassTemplate& spec = {});

// Zero-delay linear-phase convolution (taps must be odd-length and
// symmetric); output length equals input length. OpenMP over samples.
std::vector<double> fir_filter(std::span<const double> x, std::span<const double> taps);
// Serial reference for fir_filter; results are bit-identical.
std::vector<double> fir_filter_serial(std::span<const double> x, std::span<const double> taps);

// Throws std::invalid_argument if cutoff_hz is not in (0, Nyquist).
AudioBuffer lowpass_anchor(const AudioBuffer& buffer, double cutoff_hz,
                           const LowpassTemplate& spec = {});

// Dual-mono downmix, each channel (L+R)/2.
AudioBuffer mono_anchor(const AudioBuffer& stereo);

}  // namespace mushra::audio
