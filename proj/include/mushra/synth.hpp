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

#include <cstdint>
#include <ostream>
#include <string>

#include "mushra/audio_buffer.hpp"
#include "mushra/config.hpp"

namespace mushra::app {

enum class StereoImage { kCentered, kWide, kHardPanned };

// Image used for a known item name; unknown names get a wide mix.
StereoImage image_for(const std::string& item);

// Deterministic stand-in for a stereo test item: harmonic tones, noise and
// transients arranged according to image_for(item). "glock" gets struck
// notes, "violin" a bowed tone, "panDialogM" a lower voice than "panDialogF".
audio::AudioBuffer synthesize_item(const std::string& item, double seconds, std::uint64_t seed,
                                   int sample_rate = 48000);

// Writes {item}.wav into config.paths.items_dir for every required item.
void cmd_synth(const RunConfig& config, double seconds, std::ostream& log);

}  // namespace mushra::app
