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

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mushra/audio_buffer.hpp"
#include "mushra/mid_side.hpp"
#include "mushra/psychoacoustics.hpp"
#include "mushra/stft.hpp"

namespace mushra::artifact {

enum class ArtifactKind { kQN, kSH };
enum class Quality { kQ1 = 1, kQ2, kQ3, kQ4, kQ5 };
enum class StereoMode { kLR, kMS };

inline constexpr std::array kAllQualities{Quality::kQ1, Quality::kQ2, Quality::kQ3, Quality::kQ4,
                                          Quality::kQ5};

std::string to_string(ArtifactKind kind);
std::string to_string(Quality q);
std::string to_string(StereoMode mode);
ArtifactKind kind_from_string(const std::string& s);
Quality quality_from_string(const std::string& s);
StereoMode mode_from_string(const std::string& s);

// Quality ladder: QN noise-to-mask ratio in dB, SH hole probability.
//            Q1    Q2    Q3    Q4    Q5
//   QN NMR    0     6    12    18    24
//   SH prob  .70   .50   .30   .20   .10
double quality_parameter(ArtifactKind kind, Quality q);

struct ArtifactSpec {
  ArtifactKind kind = ArtifactKind::kQN;
  Quality quality = Quality::kQ1;
  double parameter = 0.0;
  std::uint64_t seed = 0;

  static ArtifactSpec make(ArtifactKind kind, Quality q, std::uint64_t seed);
  // "QN12", "SH30"
  std::string label() const;
};

struct EngineConfig {
  audio::StftConfig stft;
  psy::MaskingConfig masking;
  double bark_resolution = 0.5;
  double ms_gain = audio::kDefaultMsGain;
  // Rescale the synthesized noise once so the re-measured mean NMR lands on
  // the target exactly; without it the analytic synthesis gain is used.
  bool calibrate_qn = true;
};

struct BranchStats {
  std::string role;              // "L", "R", "M" or "S"
  std::size_t zeroed_cells = 0;  // SH
  std::size_t total_cells = 0;   // SH
  double measured_nmr_db = 0.0;  // QN, activity-gated mean
};

struct MonoResult {
  audio::AudioBuffer signal;
  BranchStats stats;
};

// Additive noise with per-band energy masked_threshold * 10^(nmr_db/10),
// complex Gaussian bins, synthesized in the STFT domain.
MonoResult apply_qn_mono(const audio::AudioBuffer& channel, double nmr_db, std::uint64_t seed,
                         const EngineConfig& config = {});

// One Bernoulli(hole_prob) decision per band per frame; a hit zeroes every
// bin of the band.
MonoResult apply_sh_mono(const audio::AudioBuffer& channel, double hole_prob, std::uint64_t seed,
                         const EngineConfig& config = {});

// Frame-major (num_frames x num_bands) hole decisions used by apply_sh_mono.
std::vector<std::uint8_t> sh_hole_mask(std::size_t num_frames, std::size_t num_bands,
                                       double hole_prob, std::uint64_t seed);

struct StereoResult {
  audio::AudioBuffer signal;
  std::vector<BranchStats> branches;
};

// LR: the mono artifact on L and R with independent sub-seeds.
// MS: mid/side forward, the artifact on M and S, mid/side inverse.
StereoResult process_stereo(const audio::AudioBuffer& stereo, const ArtifactSpec& spec,
                            StereoMode mode, const EngineConfig& config = {});

// One rendered file. Anchor and reference rows leave quality, parameter
// and mode empty; kind is then "LP3500", "LP7000", "mono" or "ref".
struct ManifestRow {
  std::string item;
  std::string kind;
  std::optional<std::string> quality;
  std::optional<double> parameter;
  std::optional<std::string> mode;
  std::uint64_t seed = 0;
  std::string sha256;
  std::string file;   // relative to the manifest directory
  std::string label;  // condition label: "SH30-MS", "LP3500", "mono", "ref"

  bool operator==(const ManifestRow&) const = default;
};

struct RenderRequest {
  std::vector<ArtifactKind> kinds;
  std::vector<StereoMode> modes;
  std::vector<Quality> qualities;
  bool anchors = true;    // LP3500, LP7000, mono
  bool reference = true;  // the unprocessed item, for open and hidden reference
  bool parallel = true;   // conditions rendered concurrently
};

// "{item}__{kind}{param}__{mode}.wav", e.g. "Pop__SH30__MS.wav".
std::string condition_file_name(const std::string& item, const ArtifactSpec& spec, StereoMode mode);
// "SH30-MS"
std::string condition_label(const ArtifactSpec& spec, StereoMode mode);
std::uint64_t condition_seed(std::uint64_t master, const std::string& item,
                             const ArtifactSpec& spec, StereoMode mode);

// Writes every requested WAV (24 bit) into out_dir and returns the manifest
// rows in a fixed order. An empty quality set yields no processed rows.
// Throws InputError naming the condition on any I/O failure.
std::vector<ManifestRow> render_condition_set(const std::string& item_name,
                                              const audio::AudioBuffer& item,
                                              const RenderRequest& request, std::uint64_t seed,
                                              const std::string& out_dir,
                                              const EngineConfig& config = {});

// JSON lines, one object per row.
void write_manifest(const std::string& path, const std::vector<ManifestRow>& rows);
std::vector<ManifestRow> read_manifest(const std::string& path);
std::string manifest_to_jsonl(const std::vector<ManifestRow>& rows);

}  // namespace mushra::artifact
