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

#include "mushra/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

namespace mushra::audio {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint32_t read_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t read_u16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_tag(std::vector<std::uint8_t>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

struct Format {
  std::uint16_t tag = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t bits = 0;
  std::uint16_t block_align = 0;
};

}  // namespace

const char* to_string(WavErrc code) {
  switch (code) {
    case WavErrc::kIo: return "i/o error";
    case WavErrc::kMalformedHeader: return "malformed header";
    case WavErrc::kUnsupportedFormat: return "unsupported format";
    case WavErrc::kTooManyChannels: return "too many channels";
    case WavErrc::kNanSample: return "non-finite sample";
    case WavErrc::kEmptyBuffer: return "empty buffer";
  }
  return "unknown";
}

WavError::WavError(WavErrc code, const std::string& detail)
    : InputError(std::string("wav: ") + to_string(code) + ": " + detail), code_(code) {}

AudioBuffer decode_wav(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw WavError(WavErrc::kMalformedHeader, "missing RIFF/WAVE signature");
  }

  Format fmt;
  bool have_fmt = false;
  const std::uint8_t* data = nullptr;
  std::size_t data_size = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint8_t* chunk = bytes.data() + pos;
    const std::uint32_t size = read_u32(chunk + 4);
    const std::size_t body = pos + 8;
    if (body + size > bytes.size()) {
      // Some writers leave a bogus size on the trailing data chunk.
      if (std::memcmp(chunk, "data", 4) != 0) {
        throw WavError(WavErrc::kMalformedHeader, "chunk overruns file");
      }
    }
    const std::size_t avail = std::min<std::size_t>(size, bytes.size() - body);

    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (avail < 16) throw WavError(WavErrc::kMalformedHeader, "fmt chunk too short");
      const std::uint8_t* f = bytes.data() + body;
      fmt.tag = read_u16(f);
      fmt.channels = read_u16(f + 2);
      fmt.sample_rate = read_u32(f + 4);
      fmt.block_align = read_u16(f + 12);
      fmt.bits = read_u16(f + 14);
      if (fmt.tag == kFormatExtensible) {
        if (avail < 26) throw WavError(WavErrc::kMalformedHeader, "extensible fmt too short");
        fmt.tag = read_u16(f + 24);  // first two bytes of the subformat GUID
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = bytes.data() + body;
      data_size = avail;
    }
    pos = body + size + (size & 1u);
  }

  if (!have_fmt) throw WavError(WavErrc::kMalformedHeader, "no fmt chunk");
  if (data == nullptr) throw WavError(WavErrc::kMalformedHeader, "no data chunk");
  if (fmt.channels == 0 || fmt.sample_rate == 0) {
    throw WavError(WavErrc::kMalformedHeader, "zero channels or sample rate");
  }
  if (fmt.channels > 2) {
    throw WavError(WavErrc::kTooManyChannels, std::to_string(fmt.channels) + " channels");
  }

  const bool is_float = fmt.tag == kFormatFloat && fmt.bits == 32;
  const bool is_int = fmt.tag == kFormatPcm && (fmt.bits == 16 || fmt.bits == 24 || fmt.bits == 32);
  if (!is_float && !is_int) {
    throw WavError(WavErrc::kUnsupportedFormat,
                   "format tag " + std::to_string(fmt.tag) + ", " + std::to_string(fmt.bits) + " bits");
  }
  const std::size_t bytes_per_sample = fmt.bits / 8;
  if (fmt.block_align != bytes_per_sample * fmt.channels) {
    throw WavError(WavErrc::kMalformedHeader, "block align does not match bit depth");
  }

  const std::size_t frames = data_size / fmt.block_align;
  AudioBuffer out = AudioBuffer::zeros(static_cast<int>(fmt.sample_rate), fmt.channels, frames);
  for (std::size_t n = 0; n < frames; ++n) {
    for (std::size_t c = 0; c < fmt.channels; ++c) {
      const std::uint8_t* s = data + n * fmt.block_align + c * bytes_per_sample;
      double v = 0.0;
      if (is_float) {
        float f;
        const std::uint32_t raw = read_u32(s);
        std::memcpy(&f, &raw, sizeof f);
        v = f;
      } else if (fmt.bits == 16) {
        v = static_cast<std::int16_t>(read_u16(s)) / 32768.0;
      } else if (fmt.bits == 24) {
        std::int32_t i = static_cast<std::int32_t>(s[0] | (s[1] << 8) | (s[2] << 16));
        if (i & 0x800000) i -= 0x1000000;
        v = i / 8388608.0;
      } else {
        v = static_cast<std::int32_t>(read_u32(s)) / 2147483648.0;
      }
      out.channels[c][n] = v;
    }
  }
  return out;
}

AudioBuffer read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw WavError(WavErrc::kIo, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return decode_wav(bytes);
}

std::vector<std::uint8_t> encode_wav(const AudioBuffer& buffer, BitDepth depth,
                                     WriteReport* report) {
  buffer.validate();
  if (buffer.empty() || buffer.num_channels() == 0) {
    throw WavError(WavErrc::kEmptyBuffer, "nothing to write");
  }
  if (buffer.num_channels() > 2) {
    throw WavError(WavErrc::kTooManyChannels, std::to_string(buffer.num_channels()) + " channels");
  }
  for (const auto& c : buffer.channels) {
    for (double v : c) {
      if (!std::isfinite(v)) throw WavError(WavErrc::kNanSample, "buffer contains NaN or Inf");
    }
  }

  const std::uint16_t channels = static_cast<std::uint16_t>(buffer.num_channels());
  const std::uint16_t bits = depth == BitDepth::kPcm16 ? 16 : depth == BitDepth::kPcm24 ? 24 : 32;
  const std::uint16_t block_align = static_cast<std::uint16_t>(channels * bits / 8);
  const std::uint32_t data_size = static_cast<std::uint32_t>(buffer.num_frames() * block_align);

  std::vector<std::uint8_t> out;
  out.reserve(44 + data_size);
  put_tag(out, "RIFF");
  put_u32(out, 36 + data_size);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_u32(out, 16);
  put_u16(out, depth == BitDepth::kFloat32 ? kFormatFloat : kFormatPcm);
  put_u16(out, channels);
  put_u32(out, static_cast<std::uint32_t>(buffer.sample_rate));
  put_u32(out, static_cast<std::uint32_t>(buffer.sample_rate) * block_align);
  put_u16(out, block_align);
  put_u16(out, bits);
  put_tag(out, "data");
  put_u32(out, data_size);

  std::size_t clipped = 0;
  for (std::size_t n = 0; n < buffer.num_frames(); ++n) {
    for (std::size_t c = 0; c < channels; ++c) {
      double v = buffer.channels[c][n];
      if (v > 1.0 || v < -1.0) {
        ++clipped;
        v = std::clamp(v, -1.0, 1.0);
      }
      switch (depth) {
        case BitDepth::kPcm16: {
          const long i = std::clamp(std::lround(v * 32768.0), -32768L, 32767L);
          put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(i)));
          break;
        }
        case BitDepth::kPcm24: {
          const long i = std::clamp(std::lround(v * 8388608.0), -8388608L, 8388607L);
          const auto u = static_cast<std::uint32_t>(static_cast<std::int32_t>(i));
          out.push_back(static_cast<std::uint8_t>(u));
          out.push_back(static_cast<std::uint8_t>(u >> 8));
          out.push_back(static_cast<std::uint8_t>(u >> 16));
          break;
        }
        case BitDepth::kFloat32: {
          const float f = static_cast<float>(v);
          std::uint32_t raw;
          std::memcpy(&raw, &f, sizeof raw);
          put_u32(out, raw);
          break;
        }
      }
    }
  }
  if (report != nullptr) report->clipped_samples = clipped;
  return out;
}

WriteReport write_wav(const AudioBuffer& buffer, const std::filesystem::path& path,
                      BitDepth depth) {
  WriteReport report;
  const auto bytes = encode_wav(buffer, depth, &report);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw WavError(WavErrc::kIo, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw WavError(WavErrc::kIo, "short write to " + path.string());
  return report;
}

}  // namespace mushra::audio
