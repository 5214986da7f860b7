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

#include "mushra/commands.hpp"

#include <csignal>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#include "mushra/error.hpp"
#include "mushra/figure_data.hpp"
#include "mushra/psychoacoustics.hpp"
#include "mushra/seeds.hpp"
#include "mushra/session.hpp"
#include "mushra/session_server.hpp"
#include "mushra/sha256.hpp"
#include "mushra/wav.hpp"

namespace mushra::app {

namespace fs = std::filesystem;
using artifact::ArtifactKind;

std::map<std::string, std::set<ArtifactKind>> required_items(const RunConfig& config) {
  std::map<std::string, std::set<ArtifactKind>> out;
  for (auto series : config.plan.series) {
    const auto kind = plan::series_kind(series);
    if (const auto it = config.plan.series_items.find(series); it != config.plan.series_items.end()) {
      for (const auto& item : it->second) out[item].insert(kind);
    } else if (const auto k = config.plan.items.find(kind); k != config.plan.items.end()) {
      for (const auto& item : k->second) out[item].insert(kind);
    }
  }
  for (const auto& t : config.plan.training) out[t.item].insert(plan::series_kind(t.series));
  return out;
}

std::vector<artifact::ManifestRow> cmd_generate(const RunConfig& config, std::ostream& log) {
  const auto needed = required_items(config);
  std::map<std::string, audio::AudioBuffer> inputs;
  std::vector<std::string> problems;
  for (const auto& [item, kinds] : needed) {
    const auto path = fs::path(config.paths.items_dir) / (item + ".wav");
    if (!fs::exists(path)) {
      problems.push_back(path.string() + ": missing");
      continue;
    }
    try {
      auto buffer = audio::read_wav(path.string());
      if (buffer.num_channels() != 2) {
        problems.push_back(path.string() + ": expected stereo, found " + std::to_string(buffer.num_channels()) +
                           " channel(s)");
        continue;
      }
      inputs.emplace(item, std::move(buffer));
    } catch (const InputError& e) {
      problems.push_back(path.string() + ": " + e.what());
    }
  }
  if (!problems.empty()) {
    std::string msg = "input items are missing or invalid (expected {item}.wav in " + config.paths.items_dir + "):";
    for (const auto& p : problems) msg += "\n  " + p;
    throw InputError(msg);
  }

  fs::create_directories(config.stimuli_dir());
  const std::uint64_t seed = derive_seed(config.seed, "generate");
  std::vector<artifact::ManifestRow> rows;
  for (const auto& [item, kinds] : needed) {
    artifact::RenderRequest req{{kinds.begin(), kinds.end()},
                                {artifact::StereoMode::kLR, artifact::StereoMode::kMS},
                                {artifact::kAllQualities.begin(), artifact::kAllQualities.end()},
                                true,
                                true,
                                true};
    auto item_rows = artifact::render_condition_set(item, inputs.at(item), req, seed, config.stimuli_dir(),
                                                    config.engine);
    log << "rendered " << item_rows.size() << " stimuli for " << item << "\n";
    rows.insert(rows.end(), item_rows.begin(), item_rows.end());
  }
  artifact::write_manifest(config.manifest_path(), rows);
  log << "manifest: " << config.manifest_path() << " (" << rows.size() << " rows)\n";
  return rows;
}

plan::TrialPlan cmd_plan(const RunConfig& config, std::ostream& log) {
  if (!fs::exists(config.manifest_path())) {
    throw InputError("no manifest at " + config.manifest_path() + "; run generate first");
  }
  const auto manifest = artifact::read_manifest(config.manifest_path());
  const auto p = plan::build_plan(config.plan, manifest);
  fs::create_directories(config.paths.out_dir);
  plan::write_plan(config.plan_path(), p);
  log << "plan: " << config.plan_path() << "\n";
  log << "test trials: " << p.trials.size() << ", training trials: " << p.training.size()
      << ", stimuli per trial: " << plan::kStimuliPerTrial << "\n";
  for (const auto& w : p.warnings) {
    log << "note: " << w << " (set plan.series_items to choose which cells to drop)\n";
  }
  return p;
}

namespace {

plan::TrialPlan load_verified_plan(const RunConfig& config) {
  if (!fs::exists(config.plan_path())) throw InputError("no plan at " + config.plan_path() + "; run plan first");
  const auto p = plan::read_plan(config.plan_path());
  const auto problems = session::verify_plan_audio(p, config.stimuli_dir());
  if (!problems.empty()) {
    std::string msg = "stimuli do not match the plan; regenerate and replan before serving:";
    for (const auto& pr : problems) msg += "\n  " + pr;
    throw ContractError(msg);
  }
  return p;
}

}  // namespace

void cmd_serve(const RunConfig& config, bool dry_run, std::ostream& log) {
  auto p = load_verified_plan(config);
  log << "plan verified: " << p.trials.size() + p.training.size() << " trials, all stimulus hashes match\n";
  if (dry_run) return;
  session::SessionService service(std::move(p), {config.database_path(), config.stimuli_dir(),
                                                 derive_seed(config.seed, "sessions"), {}});
  session::HttpServer server(service, config.paths.static_dir);
  const int port = server.bind(config.serve.host, config.serve.port);
  log << "listening on http://" << config.serve.host << ":" << port << " (database " << config.database_path()
      << ")" << std::endl;

  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);
  std::thread worker([&server] { server.run(); });
  int received = 0;
  sigwait(&signals, &received);
  log << "stopping\n";
  server.stop();
  worker.join();
}

namespace {

// Physical severity in [0, 1] of a condition, used by the simulated listeners.
double severity(const std::string& condition) {
  const auto info = stats::parse_condition(condition);
  switch (info.role) {
    case stats::ConditionRole::kReference: return 0.0;
    case stats::ConditionRole::kMonoAnchor: return 0.45;
    case stats::ConditionRole::kLowpassAnchor: return condition == "LP3500" ? 1.1 : 0.8;
    case stats::ConditionRole::kArtifact: {
      const double p = artifact::quality_parameter(*info.kind, *info.quality);
      return *info.kind == ArtifactKind::kQN ? 0.1 + 0.8 * p / 24.0 : 0.1 + 0.8 * p / 0.7;
    }
    case stats::ConditionRole::kOther: break;
  }
  return 0.5;
}

}  // namespace

std::string cmd_simulate(const RunConfig& config, std::ostream& log) {
  auto p = load_verified_plan(config);
  std::map<std::string, std::string> condition_of_file;
  for (const auto* list : {&p.training, &p.trials}) {
    for (const auto& t : *list) {
      for (const auto& s : t.stimuli) condition_of_file[s.audio.file] = s.condition;
    }
  }
  const auto db = (fs::path(config.paths.out_dir) / "simulation.db").string();
  for (const char* suffix : {"", "-wal", "-shm"}) fs::remove(db + suffix);
  session::SessionService service(std::move(p), {db, config.stimuli_dir(), derive_seed(config.seed, "sessions"),
                                                  [] { return std::int64_t{0}; }});
  for (int i = 1; i <= config.simulation.listeners; ++i) {
    char name[16];
    std::snprintf(name, sizeof name, "sim%02d", i);
    std::mt19937_64 rng(derive_seed(config.seed, std::string("simulate|") + name));
    std::normal_distribution<double> bias(0.0, 5.0), noise(0.0, config.simulation.noise_sd);
    const double b = bias(rng);
    const auto s = service.create_session(name);
    while (const auto view = service.current_trial(s.session_id)) {
      std::vector<session::Rating> ratings;
      for (const auto& st : view->stimuli) {
        const auto file = fs::path(service.audio_path(s.session_id, st.stimulus_id)).filename().string();
        const double mu = 95.0 - 75.0 * severity(condition_of_file.at(file)) + b;
        const double score = std::clamp(std::round(mu + noise(rng)), 0.0, 100.0);
        ratings.push_back({st.stimulus_id, static_cast<int>(score)});
      }
      service.submit(s.session_id, view->trial_id, ratings);
    }
  }
  const auto csv = service.export_csv();
  fs::create_directories(fs::path(config.scores_path()).parent_path());
  std::ofstream(config.scores_path(), std::ios::binary) << csv;
  log << "simulated " << config.simulation.listeners << " listeners; scores: " << config.scores_path() << "\n";
  return csv;
}

std::map<std::string, std::string> cmd_analyze(const RunConfig& config, std::ostream& log) {
  stats::ColumnMapping mapping;
  if (!config.paths.column_mapping.empty()) {
    std::ifstream in(config.paths.column_mapping);
    if (!in) throw InputError("cannot open column mapping " + config.paths.column_mapping);
    std::stringstream ss;
    ss << in.rdbuf();
    mapping = stats::mapping_from_json(ss.str());
  }
  const auto data = stats::read_scores(config.scores_path(), mapping);
  const auto sc = config.effective_stats();
  std::vector<std::string> notes;
  const auto by_item = stats::summarize(data, {true, true}, sc, &notes);
  const auto pooled = stats::summarize(data, {false, true}, sc, &notes);
  const auto by_condition = stats::summarize(data, {false, false}, sc, &notes);
  const auto comparisons = stats::compare_lr_ms(data, sc, &notes);

  std::map<std::string, std::string> files{
      {"summary_by_item.csv", stats::summaries_to_csv(by_item)},
      {"summary_pooled.csv", stats::summaries_to_csv(pooled)},
      {"summary_by_condition.csv", stats::summaries_to_csv(by_condition)},
      {"significance.csv", stats::significance_to_csv(comparisons)},
  };
  for (auto layout : {stats::FigureLayout::kOverall, stats::FigureLayout::kMixed, stats::FigureLayout::kItemwise}) {
    const auto t = stats::export_figure_data(layout == stats::FigureLayout::kItemwise ? by_item : pooled,
                                             comparisons, layout);
    files["figure_" + stats::to_string(layout) + "_points.csv"] = t.points_csv;
    files["figure_" + stats::to_string(layout) + "_significance.csv"] = t.significance_csv;
  }
  fs::create_directories(config.analysis_dir());
  std::map<std::string, std::string> hashes;
  for (const auto& [name, content] : files) {
    std::ofstream out(fs::path(config.analysis_dir()) / name, std::ios::binary);
    if (!out) throw InputError("cannot write " + name);
    out << content;
    hashes[name] = sha256_hex(content);
  }

  log << "listeners: " << data.listeners().size() << ", ratings: " << data.size() << "\n";
  for (const auto& s : by_condition) {
    if (s.key.condition == "mono") {
      log << "pooled mono anchor: mean " << s.mean << " [" << s.ci_low << ", " << s.ci_high << "]\n";
    }
  }
  std::size_t significant = 0;
  for (const auto& c : comparisons) significant += !c.stars.empty();
  log << "LR vs MS comparisons: " << comparisons.size() << " (" << significant << " significant)\n";
  for (const auto& n : notes) log << "note: " << n << "\n";
  log << "analysis written to " << config.analysis_dir() << "\n";
  return hashes;
}

void cmd_thresholds(const RunConfig& config, const std::string& reference, const std::string& degraded,
                    std::size_t channel, std::ostream& out) {
  const auto ref = audio::read_wav(reference);
  if (channel >= ref.num_channels()) {
    throw InputError(reference + " has no channel " + std::to_string(channel));
  }
  const auto& e = config.engine;
  const auto part = psy::CriticalBandPartition::make(ref.sample_rate, e.stft.fft_size, e.bark_resolution);
  const auto ref_spec = audio::stft(ref.channel(channel), ref.sample_rate, e.stft, channel);
  if (degraded.empty()) {
    psy::write_threshold_matrix(out, psy::masking_threshold(ref_spec, part, e.masking));
    return;
  }
  const auto deg = audio::read_wav(degraded);
  if (deg.sample_rate != ref.sample_rate || deg.num_frames() != ref.num_frames() || channel >= deg.num_channels()) {
    throw InputError(degraded + " does not match the layout of " + reference);
  }
  const auto deg_spec = audio::stft(deg.channel(channel), deg.sample_rate, e.stft, channel);
  psy::write_nmr_matrix(out, psy::measure_nmr(ref_spec, deg_spec, part, e.masking));
}

}  // namespace mushra::app
