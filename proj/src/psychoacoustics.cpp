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

#include "mushra/psychoacoustics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace mushra::psy {

double hz_to_bark(double hz) {
  return 13.0 * std::atan(0.00076 * hz) + 3.5 * std::atan((hz / 7500.0) * (hz / 7500.0));
}

double threshold_in_quiet_spl(double hz) {
  const double khz = std::max(hz, 20.0) / 1000.0;
  return 3.64 * std::pow(khz, -0.8) - 6.5 * std::exp(-0.6 * (khz - 3.3) * (khz - 3.3)) +
         1e-3 * std::pow(khz, 4.0);
}

CriticalBandPartition CriticalBandPartition::make(int sample_rate, std::size_t fft_size,
                                                  double resolution_bark) {
  if (sample_rate <= 0 || fft_size < 4) throw std::invalid_argument("bad partition geometry");
  if (!(resolution_bark > 0.0)) throw std::invalid_argument("bark resolution must be positive");

  CriticalBandPartition p;
  p.sample_rate = sample_rate;
  p.fft_size = fft_size;
  const std::size_t bins = fft_size / 2 + 1;
  const double bin_hz = static_cast<double>(sample_rate) / static_cast<double>(fft_size);

  long previous = -1;
  for (std::size_t k = 0; k < bins; ++k) {
    const long slot = static_cast<long>(std::floor(hz_to_bark(k * bin_hz) / resolution_bark));
    if (slot != previous) {
      p.band_start.push_back(k);
      previous = slot;
    }
    p.bin_to_band.push_back(p.band_start.size() - 1);
  }
  p.band_start.push_back(bins);

  const std::size_t bands = p.band_start.size() - 1;
  p.band_edges_hz.push_back(0.0);
  for (std::size_t b = 1; b < bands; ++b) {
    p.band_edges_hz.push_back((static_cast<double>(p.band_start[b]) - 0.5) * bin_hz);
  }
  p.band_edges_hz.push_back(sample_rate / 2.0);
  for (std::size_t b = 0; b < bands; ++b) {
    const double centre = 0.5 * (p.band_start[b] + p.band_start[b + 1] - 1) * bin_hz;
    p.center_bark.push_back(hz_to_bark(centre));
  }
  return p;
}

bool CriticalBandPartition::matches(const audio::Spectrogram& spec) const {
  return spec.config.fft_size == fft_size && spec.sample_rate == sample_rate;
}

std::vector<double> bin_power_weights(const audio::StftConfig& config) {
  const auto w = config.analysis_window();
  double window_energy = 0.0;
  for (double v : w) window_energy += v * v;
  const double base = 2.0 / (static_cast<double>(config.fft_size) * window_energy);
  std::vector<double> weights(config.num_bins(), 2.0 * base);
  weights.front() = base;
  weights.back() = base;
  return weights;
}

double MaskingThreshold::frame_energy(std::size_t f) const {
  double e = 0.0;
  for (std::size_t b = 0; b < num_bands; ++b) e += energy(f, b);
  return e;
}

namespace {

void check_geometry(const audio::Spectrogram& spec, const CriticalBandPartition& partition) {
  if (!partition.matches(spec)) {
    throw std::invalid_argument("spectrogram geometry does not match the band partition");
  }
}

// Row b holds the normalized weights with which every masker band j spreads
// into maskee band b, already scaled by the masking offset.
std::vector<double> spreading_matrix(const CriticalBandPartition& p, const MaskingConfig& c) {
  const std::size_t bands = p.num_bands();
  std::vector<double> m(bands * bands);
  const double offset = std::pow(10.0, -c.masking_offset_db / 10.0);
  for (std::size_t b = 0; b < bands; ++b) {
    double norm = 0.0;
    for (std::size_t j = 0; j < bands; ++j) {
      const double dz = p.center_bark[b] - p.center_bark[j];  // maskee - masker
      const double slope = dz >= 0.0 ? c.upper_slope_db_per_bark : c.lower_slope_db_per_bark;
      const double w = std::pow(10.0, -slope * std::abs(dz) / 10.0);
      m[b * bands + j] = w;
      norm += w;
    }
    for (std::size_t j = 0; j < bands; ++j) m[b * bands + j] *= offset / norm;
  }
  return m;
}

std::vector<double> quiet_floor(const CriticalBandPartition& p, const MaskingConfig& c) {
  const double bin_hz = static_cast<double>(p.sample_rate) / static_cast<double>(p.fft_size);
  std::vector<double> floor(p.num_bands(), 0.0);
  for (std::size_t k = 0; k < p.num_bins(); ++k) {
    const double db = std::min(threshold_in_quiet_spl(k * bin_hz) + c.quiet_offset_db,
                               c.quiet_ceiling_db);
    floor[p.bin_to_band[k]] += std::pow(10.0, db / 10.0);
  }
  return floor;
}

struct ThresholdKernel {
  const audio::Spectrogram& spec;
  const CriticalBandPartition& partition;
  std::vector<double> weights;
  std::vector<double> spreading;

  void frame(std::size_t f, MaskingThreshold& out) const {
    const std::size_t bands = partition.num_bands();
    const auto bins = spec.frame(f);
    double* energy = out.band_energy.data() + f * bands;
    for (std::size_t k = 0; k < bins.size(); ++k) {
      energy[partition.bin_to_band[k]] += std::norm(bins[k]) * weights[k];
    }
    double* threshold = out.threshold.data() + f * bands;
    for (std::size_t b = 0; b < bands; ++b) {
      double spread = 0.0;
      const double* row = spreading.data() + b * bands;
      for (std::size_t j = 0; j < bands; ++j) spread += row[j] * energy[j];
      threshold[b] = std::max(spread, out.quiet[b]);
    }
  }
};

MaskingThreshold prepare(const audio::Spectrogram& spec, const CriticalBandPartition& partition,
                         const MaskingConfig& config) {
  check_geometry(spec, partition);
  MaskingThreshold out;
  out.num_frames = spec.num_frames;
  out.num_bands = partition.num_bands();
  out.threshold.assign(out.num_frames * out.num_bands, 0.0);
  out.band_energy.assign(out.num_frames * out.num_bands, 0.0);
  out.quiet = quiet_floor(partition, config);
  return out;
}

}  // namespace

MaskingThreshold masking_threshold_serial(const audio::Spectrogram& spec,
                                          const CriticalBandPartition& partition,
                                          const MaskingConfig& config) {
  MaskingThreshold out = prepare(spec, partition, config);
  const ThresholdKernel kernel{spec, partition, bin_power_weights(spec.config),
                               spreading_matrix(partition, config)};
  for (std::size_t f = 0; f < out.num_frames; ++f) kernel.frame(f, out);
  return out;
}

MaskingThreshold masking_threshold(const audio::Spectrogram& spec,
                                   const CriticalBandPartition& partition,
                                   const MaskingConfig& config) {
  MaskingThreshold out = prepare(spec, partition, config);
  const ThresholdKernel kernel{spec, partition, bin_power_weights(spec.config),
                               spreading_matrix(partition, config)};
  const auto frames = static_cast<std::ptrdiff_t>(out.num_frames);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t f = 0; f < frames; ++f) kernel.frame(static_cast<std::size_t>(f), out);
  return out;
}

std::vector<double> band_energies(const audio::Spectrogram& spec,
                                  const CriticalBandPartition& partition) {
  check_geometry(spec, partition);
  const auto weights = bin_power_weights(spec.config);
  const std::size_t bands = partition.num_bands();
  std::vector<double> out(spec.num_frames * bands, 0.0);
  for (std::size_t f = 0; f < spec.num_frames; ++f) {
    const auto bins = spec.frame(f);
    for (std::size_t k = 0; k < bins.size(); ++k) {
      out[f * bands + partition.bin_to_band[k]] += std::norm(bins[k]) * weights[k];
    }
  }
  return out;
}

NmrReport measure_nmr(const MaskingThreshold& threshold, const std::vector<double>& noise_energy,
                      const MaskingConfig& config) {
  if (noise_energy.size() != threshold.threshold.size()) {
    throw std::invalid_argument("noise energy does not match threshold geometry");
  }
  NmrReport r;
  r.num_frames = threshold.num_frames;
  r.num_bands = threshold.num_bands;
  r.nmr_db.assign(noise_energy.size(), config.nmr_floor_db);
  r.active.assign(r.num_frames, false);

  const double activity = std::pow(10.0, config.activity_floor_db / 10.0);
  for (std::size_t f = 0; f < r.num_frames; ++f) {
    r.active[f] = threshold.frame_energy(f) >= activity;
    if (r.active[f]) ++r.active_frames;
    for (std::size_t b = 0; b < r.num_bands; ++b) {
      const std::size_t i = f * r.num_bands + b;
      if (noise_energy[i] > 0.0) {
        r.nmr_db[i] = std::max(10.0 * std::log10(noise_energy[i] / threshold.threshold[i]),
                               config.nmr_floor_db);
      }
      if (r.active[f]) {
        r.noise_energy += noise_energy[i];
        r.threshold_energy += threshold.threshold[i];
      }
    }
  }
  r.mean_nmr_db = r.noise_energy > 0.0 && r.threshold_energy > 0.0
                      ? std::max(10.0 * std::log10(r.noise_energy / r.threshold_energy),
                                 config.nmr_floor_db)
                      : config.nmr_floor_db;
  return r;
}

NmrReport measure_nmr(const audio::Spectrogram& reference, const audio::Spectrogram& degraded,
                      const CriticalBandPartition& partition, const MaskingConfig& config) {
  if (!reference.same_geometry(degraded)) {
    throw std::invalid_argument("reference and degraded spectrograms differ in geometry");
  }
  audio::Spectrogram noise = reference;
  for (std::size_t i = 0; i < noise.bins.size(); ++i) noise.bins[i] = degraded.bins[i] - reference.bins[i];
  return measure_nmr(masking_threshold(reference, partition, config),
                     band_energies(noise, partition), config);
}

void write_db_matrix(std::ostream& out, std::size_t frames, std::size_t bands,
                     const std::vector<double>& values_db) {
  out << "# frames=" << frames << " bands=" << bands << " unit=dB\n";
  char buf[32];
  for (std::size_t f = 0; f < frames; ++f) {
    for (std::size_t b = 0; b < bands; ++b) {
      std::snprintf(buf, sizeof buf, "%.3f", values_db[f * bands + b]);
      out << (b == 0 ? "" : " ") << buf;
    }
    out << '\n';
  }
}

void write_threshold_matrix(std::ostream& out, const MaskingThreshold& threshold) {
  std::vector<double> db(threshold.threshold.size());
  std::transform(threshold.threshold.begin(), threshold.threshold.end(), db.begin(),
                 [](double v) { return 10.0 * std::log10(v); });
  write_db_matrix(out, threshold.num_frames, threshold.num_bands, db);
}

void write_nmr_matrix(std::ostream& out, const NmrReport& report) {
  write_db_matrix(out, report.num_frames, report.num_bands, report.nmr_db);
}

}  // namespace mushra::psy
