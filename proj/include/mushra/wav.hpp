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
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mushra/audio_buffer.hpp"
#include "mushra/error.hpp"

namespace mushra::audio {

enum class WavErrc {
  kIo,                  // open/read/write failure
  kMalformedHeader,     // not RIFF/WAVE, truncated or missing chunks
  kUnsupportedFormat,   // codec or bit depth outside 16/24/32 int, 32 float
  kTooManyChannels,     // more than two channels
  kNanSample,           // refusing to write NaN/Inf
  kEmptyBuffer,
};

const char* to_string(WavErrc code);

class WavError : public InputError {
 public:
  WavError(WavErrc code, const std::string& detail);
  WavErrc code() const { return code_; }

 private:
  WavErrc code_;
};

enum class BitDepth { kPcm16, kPcm24, kFloat32 };

struct WriteReport {
  std::size_t clipped_samples = 0;
};

AudioBuffer read_wav(const std::filesystem::path& path);
AudioBuffer decode_wav(const std::vector<std::uint8_t>& bytes);

// Default 24-bit matches the dataset format.
WriteReport write_wav(const AudioBuffer& buffer, const std::filesystem::path& path,
                      BitDepth depth = BitDepth::kPcm24);
std::vector<std::uint8_t> encode_wav(const AudioBuffer& buffer, BitDepth depth,
                                     WriteReport* report = nullptr);

}  // namespace mushra::audio
