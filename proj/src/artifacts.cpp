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

#include "mushra/artifacts.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "mushra/anchors.hpp"
#include "mushra/error.hpp"
#include "mushra/seeds.hpp"
#include "mushra/sha256.hpp"
#include "mushra/wav.hpp"

namespace mushra::artifact {

std::string to_string(ArtifactKind kind) { return kind == ArtifactKind::kQN ? "QN" : "SH"; }
std::string to_string(Quality q) { return "Q" + std::to_string(static_cast<int>(q)); }
std::string to_string(StereoMode mode) { return mode == StereoMode::kLR ? "LR" : "MS"; }

ArtifactKind kind_from_string(const std::string& s) {
  if (s == "QN") return ArtifactKind::kQN;
  if (s == "SH") return ArtifactKind::kSH;
  throw std::invalid_argument("unknown artifact kind '" + s + "'");
}

Quality quality_from_string(const std::string& s) {
  if (s.size() == 2 && s[0] == 'Q' && s[1] >= '1' && s[1] <= '5') {
    return static_cast<Quality>(s[1] - '0');
  }
  throw std::invalid_argument("unknown quality level '" + s + "'");
}

StereoMode mode_from_string(const std::string& s) {
  if (s == "LR") return StereoMode::kLR;
  if (s == "MS") return StereoMode::kMS;
  throw std::invalid_argument("unknown stereo mode '" + s + "'");
}

double quality_parameter(ArtifactKind kind, Quality q) {
  static constexpr std::array<double, 5> kNmrDb{0.0, 6.0, 12.0, 18.0, 24.0};
  static constexpr std::array<double, 5> kHoleProb{0.70, 0.50, 0.30, 0.20, 0.10};
  const auto i = static_cast<std::size_t>(q) - 1;
  return kind == ArtifactKind::kQN ? kNmrDb.at(i) : kHoleProb.at(i);
}

ArtifactSpec ArtifactSpec::make(ArtifactKind kind, Quality q, std::uint64_t seed) {
  return {kind, q, quality_parameter(kind, q), seed};
}

std::string ArtifactSpec::label() const {
  const double shown = kind == ArtifactKind::kSH ? parameter * 100.0 : parameter;
  return to_string(kind) + std::to_string(static_cast<long>(std::lround(shown)));
}

namespace {

void require_mono(const audio::AudioBuffer& channel) {
  channel.validate();
  if (channel.num_channels() != 1) throw std::invalid_argument("expected a single channel");
  if (channel.empty()) throw std::invalid_argument("channel is empty");
}

// Energy of a re-analysed ISTFT output relative to the energy of the
// independent-frame spectra it was synthesized from.
double reanalysis_gain(const audio::StftConfig& c) {
  const auto wa = c.analysis_window();
  const auto ws = c.synthesis_window();
  double ea = 0.0, es = 0.0;
  for (double v : wa) ea += v * v;
  for (double v : ws) es += v * v;
  const double overlap = es / static_cast<double>(c.hop_size);
  const double gain = c.overlap_gain();
  return overlap * ea / (gain * gain * static_cast<double>(c.fft_size));
}

}  // namespace

MonoResult apply_qn_mono(const audio::AudioBuffer& channel, double nmr_db, std::uint64_t seed,
                         const EngineConfig& config) {
  require_mono(channel);
  if (!std::isfinite(nmr_db)) throw std::invalid_argument("nmr_db must be finite");

  const auto partition =
      psy::CriticalBandPartition::make(channel.sample_rate, config.stft.fft_size, config.bark_resolution);
  const auto reference = audio::stft(channel.channel(0), channel.sample_rate, config.stft);
  const auto threshold = psy::masking_threshold(reference, partition, config.masking);
  const auto weights = psy::bin_power_weights(config.stft);
  const double target_ratio = std::pow(10.0, nmr_db / 10.0);
  const double rho = reanalysis_gain(config.stft);

  audio::Spectrogram noise = reference;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const std::size_t last_bin = config.stft.num_bins() - 1;
  for (std::size_t f = 0; f < noise.num_frames; ++f) {
    auto bins = noise.frame(f);
    for (std::size_t b = 0; b < partition.num_bands(); ++b) {
      double power = 0.0;
      for (std::size_t k = partition.band_start[b]; k < partition.band_start[b + 1]; ++k) {
        const bool real_only = k == 0 || k == last_bin;
        const double re = gauss(rng);
        const double im = real_only ? 0.0 : gauss(rng);
        bins[k] = {re, im};
        power += std::norm(bins[k]) * weights[k];
      }
      const double target = threshold.at(f, b) * target_ratio / rho;
      const double scale = power > 0.0 ? std::sqrt(target / power) : 0.0;
      for (std::size_t k = partition.band_start[b]; k < partition.band_start[b + 1]; ++k) bins[k] *= scale;
    }
  }

  auto noise_signal = audio::istft(noise);
  auto measure = [&](const audio::AudioBuffer& n) {
    const auto spec = audio::stft(n.channel(0), n.sample_rate, config.stft);
    return psy::measure_nmr(threshold, psy::band_energies(spec, partition), config.masking);
  };
  auto report = measure(noise_signal);
  if (config.calibrate_qn && report.active_frames > 0 && report.noise_energy > 0.0) {
    const double g = std::sqrt(target_ratio * report.threshold_energy / report.noise_energy);
    for (double& v : noise_signal.channels[0]) v *= g;
    report = measure(noise_signal);
  }

  MonoResult out;
  out.signal = channel;
  auto& samples = out.signal.channels[0];
  for (std::size_t n = 0; n < samples.size(); ++n) samples[n] += noise_signal.channels[0][n];
  out.stats.measured_nmr_db = report.mean_nmr_db;
  return out;
}

std::vector<std::uint8_t> sh_hole_mask(std::size_t num_frames, std::size_t num_bands,
                                       double hole_prob, std::uint64_t seed) {
  if (!(hole_prob >= 0.0 && hole_prob <= 1.0)) {
    throw std::invalid_argument("hole probability must lie in [0, 1]");
  }
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution hole(hole_prob);
  std::vector<std::uint8_t> mask(num_frames * num_bands);
  for (auto& m : mask) m = hole(rng) ? 1 : 0;
  return mask;
}

MonoResult apply_sh_mono(const audio::AudioBuffer& channel, double hole_prob, std::uint64_t seed,
                         const EngineConfig& config) {
  require_mono(channel);
  const auto partition =
      psy::CriticalBandPartition::make(channel.sample_rate, config.stft.fft_size, config.bark_resolution);
  auto spec = audio::stft(channel.channel(0), channel.sample_rate, config.stft);
  const auto mask = sh_hole_mask(spec.num_frames, partition.num_bands(), hole_prob, seed);

  MonoResult out;
  for (std::size_t f = 0; f < spec.num_frames; ++f) {
    auto bins = spec.frame(f);
    for (std::size_t b = 0; b < partition.num_bands(); ++b) {
      if (!mask[f * partition.num_bands() + b]) continue;
      ++out.stats.zeroed_cells;
      for (std::size_t k = partition.band_start[b]; k < partition.band_start[b + 1]; ++k) bins[k] = 0.0;
    }
  }
  out.stats.total_cells = mask.size();
  out.signal = audio::istft(spec);
  return out;
}

namespace {

MonoResult apply_mono(const audio::AudioBuffer& channel, const ArtifactSpec& spec,
                      std::uint64_t seed, const EngineConfig& config) {
  return spec.kind == ArtifactKind::kQN ? apply_qn_mono(channel, spec.parameter, seed, config)
                                        : apply_sh_mono(channel, spec.parameter, seed, config);
}

}  // namespace

StereoResult process_stereo(const audio::AudioBuffer& stereo, const ArtifactSpec& spec,
                            StereoMode mode, const EngineConfig& config) {
  stereo.validate();
  if (stereo.num_channels() != 2) throw std::invalid_argument("stereo processing needs 2 channels");

  StereoResult out;
  auto branch = [&](const audio::AudioBuffer& in, const char* role) {
    auto r = apply_mono(in, spec, derive_seed(spec.seed, role), config);
    r.stats.role = role;
    out.branches.push_back(r.stats);
    return std::move(r.signal);
  };

  if (mode == StereoMode::kLR) {
    auto l = branch(stereo.extract(0), "L");
    auto r = branch(stereo.extract(1), "R");
    out.signal = audio::AudioBuffer::stereo(stereo.sample_rate, std::move(l.channels[0]),
                                            std::move(r.channels[0]));
  } else {
    auto pair = audio::ms_forward(stereo, config.ms_gain);
    pair.mid = branch(pair.mid, "M");
    pair.side = branch(pair.side, "S");
    out.signal = audio::ms_inverse(pair);
  }
  return out;
}

std::string condition_file_name(const std::string& item, const ArtifactSpec& spec, StereoMode mode) {
  return item + "__" + spec.label() + "__" + to_string(mode) + ".wav";
}

std::string condition_label(const ArtifactSpec& spec, StereoMode mode) {
  return spec.label() + "-" + to_string(mode);
}

std::uint64_t condition_seed(std::uint64_t master, const std::string& item,
                             const ArtifactSpec& spec, StereoMode mode) {
  return derive_seed(master, item + "|" + spec.label() + "|" + to_string(mode));
}

namespace {

struct RenderTask {
  ManifestRow row;
  std::optional<ArtifactSpec> spec;
  StereoMode mode = StereoMode::kLR;
  double cutoff = 0.0;
};

audio::AudioBuffer render_task(const RenderTask& task, const audio::AudioBuffer& item,
                               const EngineConfig& config) {
  if (task.spec) return process_stereo(item, *task.spec, task.mode, config).signal;
  if (task.row.kind == "mono") return audio::mono_anchor(item);
  if (task.row.kind == "ref") return item;
  return audio::lowpass_anchor(item, task.cutoff);
}

}  // namespace

std::vector<ManifestRow> render_condition_set(const std::string& item_name,
                                              const audio::AudioBuffer& item,
                                              const RenderRequest& request, std::uint64_t seed,
                                              const std::string& out_dir,
                                              const EngineConfig& config) {
  item.validate();
  if (item.num_channels() != 2 || item.empty()) {
    throw InputError("item '" + item_name + "' must be a non-empty stereo buffer");
  }

  std::vector<RenderTask> tasks;
  for (auto kind : request.kinds) {
    for (auto mode : request.modes) {
      for (auto q : request.qualities) {
        RenderTask t;
        t.spec = ArtifactSpec::make(kind, q, 0);
        t.spec->seed = condition_seed(seed, item_name, *t.spec, mode);
        t.mode = mode;
        t.row = {item_name, to_string(kind), to_string(q), t.spec->parameter, to_string(mode),
                 t.spec->seed, "", condition_file_name(item_name, *t.spec, mode),
                 condition_label(*t.spec, mode)};
        tasks.push_back(std::move(t));
      }
    }
  }
  const bool any_processed = !tasks.empty();
  if (request.anchors && any_processed) {
    for (double cutoff : {audio::kLowpassAnchor35, audio::kLowpassAnchor70}) {
      const std::string kind = cutoff == audio::kLowpassAnchor35 ? "LP3500" : "LP7000";
      RenderTask t;
      t.cutoff = cutoff;
      t.row = {item_name, kind, std::nullopt, cutoff, std::nullopt, 0, "",
               item_name + "__" + kind + ".wav", kind};
      tasks.push_back(std::move(t));
    }
    RenderTask mono;
    mono.row = {item_name, "mono", std::nullopt, std::nullopt, std::nullopt, 0, "",
                item_name + "__mono.wav", "mono"};
    tasks.push_back(std::move(mono));
  }
  if (request.reference && any_processed) {
    RenderTask ref;
    ref.row = {item_name, "ref", std::nullopt, std::nullopt, std::nullopt, 0, "",
               item_name + "__ref.wav", "ref"};
    tasks.push_back(std::move(ref));
  }
  if (tasks.empty()) return {};

  std::filesystem::create_directories(out_dir);
  std::vector<std::string> errors(tasks.size());
  auto run = [&](std::size_t i) {
    try {
      const auto buffer = render_task(tasks[i], item, config);
      const auto bytes = audio::encode_wav(buffer, audio::BitDepth::kPcm24);
      tasks[i].row.sha256 = sha256_hex(bytes);
      const auto path = std::filesystem::path(out_dir) / tasks[i].row.file;
      std::ofstream out(path, std::ios::binary | std::ios::trunc);
      out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
      if (!out) throw std::runtime_error("cannot write " + path.string());
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  };

  const auto n = static_cast<std::ptrdiff_t>(tasks.size());
  if (request.parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i) run(static_cast<std::size_t>(i));
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) run(static_cast<std::size_t>(i));
  }

  std::vector<ManifestRow> rows;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (!errors[i].empty()) {
      throw InputError("rendering " + item_name + " condition " + tasks[i].row.label + ": " + errors[i]);
    }
    rows.push_back(tasks[i].row);
  }
  return rows;
}

namespace {

nlohmann::json row_to_json(const ManifestRow& r) {
  nlohmann::json j;
  j["item"] = r.item;
  j["kind"] = r.kind;
  j["quality"] = r.quality ? nlohmann::json(*r.quality) : nlohmann::json(nullptr);
  j["parameter"] = r.parameter ? nlohmann::json(*r.parameter) : nlohmann::json(nullptr);
  j["mode"] = r.mode ? nlohmann::json(*r.mode) : nlohmann::json(nullptr);
  j["seed"] = r.seed;
  j["sha256"] = r.sha256;
  j["file"] = r.file;
  j["label"] = r.label;
  return j;
}

template <typename T>
std::optional<T> optional_field(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return j[key].get<T>();
}

}  // namespace

std::string manifest_to_jsonl(const std::vector<ManifestRow>& rows) {
  std::string out;
  for (const auto& r : rows) out += row_to_json(r).dump() + "\n";
  return out;
}

void write_manifest(const std::string& path, const std::vector<ManifestRow>& rows) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw InputError("cannot write manifest " + path);
  out << manifest_to_jsonl(rows);
}

std::vector<ManifestRow> read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open manifest " + path);
  std::vector<ManifestRow> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      ManifestRow r;
      r.item = j.at("item").get<std::string>();
      r.kind = j.at("kind").get<std::string>();
      r.quality = optional_field<std::string>(j, "quality");
      r.parameter = optional_field<double>(j, "parameter");
      r.mode = optional_field<std::string>(j, "mode");
      r.seed = j.at("seed").get<std::uint64_t>();
      r.sha256 = j.at("sha256").get<std::string>();
      r.file = j.at("file").get<std::string>();
      r.label = j.at("label").get<std::string>();
      rows.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      throw InputError("manifest " + path + " line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return rows;
}

}  // namespace mushra::artifact
