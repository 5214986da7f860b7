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
#include <iosfwd>
#include <vector>

#include "mushra/stft.hpp"

namespace mushra::psy {

// Zwicker's Bark approximation.
double hz_to_bark(double hz);

// Terhardt's threshold in quiet, dB SPL. Frequencies below 20 Hz are clamped.
double threshold_in_quiet_spl(double hz);

// Contiguous bands of FFT bins, each spanning at most `resolution` Bark.
struct CriticalBandPartition {
  int sample_rate = audio::kDatasetSampleRate;
  std::size_t fft_size = 0;
  std::vector<std::size_t> band_start;   // num_bands + 1 entries, last == num_bins
  std::vector<double> band_edges_hz;     // num_bands + 1 entries, 0 .. Nyquist
  std::vector<double> center_bark;       // per band
  std::vector<std::size_t> bin_to_band;  // per bin

  static CriticalBandPartition make(int sample_rate, std::size_t fft_size,
                                    double resolution_bark = 0.5);

  std::size_t num_bands() const { return center_bark.size(); }
  std::size_t num_bins() const { return bin_to_band.size(); }
  std::size_t band_size(std::size_t b) const { return band_start[b + 1] - band_start[b]; }
  bool matches(const audio::Spectrogram& spec) const;
};

// Constants of the simultaneous-masking model. Levels are in dB relative to
// the power of a full-scale sine (the "dBFS" used throughout).
struct MaskingConfig {
  double lower_slope_db_per_bark = 25.0;  // maskees below the masker
  double upper_slope_db_per_bark = 10.0;  // maskees above the masker
  double masking_offset_db = 15.5;        // spread energy to threshold
  // Per-bin threshold in quiet: min(Terhardt dB SPL + quiet_offset_db,
  // quiet_ceiling_db). Keeps silent inputs silent to about -96 dBFS even at
  // +24 dB NMR.
  double quiet_offset_db = -165.0;
  double quiet_ceiling_db = -150.0;
  double activity_floor_db = -70.0;       // frames below this are not averaged
  double nmr_floor_db = -120.0;           // reported when a cell has no noise
};

// Per-bin factor turning |X_k|^2 into power relative to a full-scale sine,
// accounting for the one-sided spectrum and the analysis window energy.
std::vector<double> bin_power_weights(const audio::StftConfig& config);

struct MaskingThreshold {
  std::size_t num_frames = 0;
  std::size_t num_bands = 0;
  std::vector<double> threshold;    // frame-major, linear power
  std::vector<double> band_energy;  // frame-major, linear power
  std::vector<double> quiet;        // per band, threshold in quiet

  double at(std::size_t f, std::size_t b) const { return threshold[f * num_bands + b]; }
  double energy(std::size_t f, std::size_t b) const { return band_energy[f * num_bands + b]; }
  double frame_energy(std::size_t f) const;
};

// Band energy, normalized triangular spreading, fixed offset, max with the
// threshold in quiet. Frames are evaluated in parallel.
MaskingThreshold masking_threshold(const audio::Spectrogram& spec,
                                   const CriticalBandPartition& partition,
                                   const MaskingConfig& config = {});
// Serial reference; identical results.
MaskingThreshold masking_threshold_serial(const audio::Spectrogram& spec,
                                          const CriticalBandPartition& partition,
                                          const MaskingConfig& config = {});

// Per-band power of a spectrogram, frame-major (same units as the threshold).
std::vector<double> band_energies(const audio::Spectrogram& spec,
                                  const CriticalBandPartition& partition);

struct NmrReport {
  std::size_t num_frames = 0;
  std::size_t num_bands = 0;
  std::vector<double> nmr_db;        // frame-major; nmr_floor_db where noise == 0
  std::vector<bool> active;          // per frame
  std::size_t active_frames = 0;
  double noise_energy = 0.0;         // summed over active frames
  double threshold_energy = 0.0;     // summed over active frames
  // 10*log10(noise_energy / threshold_energy): the threshold-weighted mean of
  // the linear per-cell NMR over active frames. nmr_floor_db when no noise.
  double mean_nmr_db = 0.0;

  double at(std::size_t f, std::size_t b) const { return nmr_db[f * num_bands + b]; }
};

// noise = degraded - reference, bin-wise. Throws std::invalid_argument on a
// geometry mismatch.
NmrReport measure_nmr(const audio::Spectrogram& reference, const audio::Spectrogram& degraded,
                      const CriticalBandPartition& partition, const MaskingConfig& config = {});
NmrReport measure_nmr(const MaskingThreshold& threshold, const std::vector<double>& noise_energy,
                      const MaskingConfig& config = {});

// Text matrix: a "# frames=F bands=B unit=dB" header line, then one line per
// frame with B space-separated values in dB (3 decimals).
void write_db_matrix(std::ostream& out, std::size_t frames, std::size_t bands,
                     const std::vector<double>& values_db);
void write_threshold_matrix(std::ostream& out, const MaskingThreshold& threshold);
void write_nmr_matrix(std::ostream& out, const NmrReport& report);

}  // namespace mushra::psy
