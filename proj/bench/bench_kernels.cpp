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

// Serial reference vs OpenMP kernel, pairwise. Run with OMP_NUM_THREADS set to
// compare scaling; on a single core the two should be close.
#include <benchmark/benchmark.h>

#include <filesystem>

#include "mushra/anchors.hpp"
#include "mushra/artifacts.hpp"
#include "mushra/bootstrap.hpp"
#include "mushra/psychoacoustics.hpp"
#include "mushra/synth.hpp"

namespace {

using namespace mushra;

const audio::AudioBuffer& item() {
  static const auto buf = app::synthesize_item("Pop", 4.0, 11);
  return buf;
}

std::vector<double> fir_input() { return item().channels[0]; }

void BM_FirSerial(benchmark::State& st) {
  const auto x = fir_input();
  const auto taps = audio::design_lowpass(3500.0, 48000);
  for (auto _ : st) benchmark::DoNotOptimize(audio::fir_filter_serial(x, taps));
}
void BM_FirParallel(benchmark::State& st) {
  const auto x = fir_input();
  const auto taps = audio::design_lowpass(3500.0, 48000);
  for (auto _ : st) benchmark::DoNotOptimize(audio::fir_filter(x, taps));
}

struct MaskingInput {
  audio::Spectrogram spec;
  psy::CriticalBandPartition partition;
};
const MaskingInput& masking_input() {
  static const MaskingInput in = [] {
    audio::StftConfig cfg;
    auto spec = audio::stft(item().channels[0], 48000, cfg);
    auto part = psy::CriticalBandPartition::make(48000, cfg.fft_size);
    return MaskingInput{std::move(spec), std::move(part)};
  }();
  return in;
}
void BM_MaskingSerial(benchmark::State& st) {
  const auto& in = masking_input();
  for (auto _ : st) benchmark::DoNotOptimize(psy::masking_threshold_serial(in.spec, in.partition));
}
void BM_MaskingParallel(benchmark::State& st) {
  const auto& in = masking_input();
  for (auto _ : st) benchmark::DoNotOptimize(psy::masking_threshold(in.spec, in.partition));
}

std::vector<double> scores() {
  std::vector<double> v;
  for (int i = 0; i < 16; ++i) v.push_back(40.0 + 3.0 * i);
  return v;
}
void BM_BootstrapSerial(benchmark::State& st) {
  const auto v = scores();
  for (auto _ : st) benchmark::DoNotOptimize(stats::bootstrap_means_serial(v, 10000, 5));
}
void BM_BootstrapParallel(benchmark::State& st) {
  const auto v = scores();
  for (auto _ : st) benchmark::DoNotOptimize(stats::bootstrap_means(v, 10000, 5));
}

void render(benchmark::State& st, bool parallel) {
  const auto dir = std::filesystem::temp_directory_path() / "mushra_bench_render";
  std::filesystem::create_directories(dir);
  artifact::RenderRequest req;
  req.kinds = {artifact::ArtifactKind::kSH, artifact::ArtifactKind::kQN};
  req.modes = {artifact::StereoMode::kLR, artifact::StereoMode::kMS};
  req.qualities = {artifact::Quality::kQ1, artifact::Quality::kQ3, artifact::Quality::kQ5};
  req.parallel = parallel;
  for (auto _ : st) {
    benchmark::DoNotOptimize(artifact::render_condition_set("Pop", item(), req, 3, dir.string()));
  }
}
void BM_RenderSerial(benchmark::State& st) { render(st, false); }
void BM_RenderParallel(benchmark::State& st) { render(st, true); }

BENCHMARK(BM_FirSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FirParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MaskingSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MaskingParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BootstrapSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BootstrapParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RenderSerial)->Unit(benchmark::kMillisecond)->Iterations(2);
BENCHMARK(BM_RenderParallel)->Unit(benchmark::kMillisecond)->Iterations(2);

}  // namespace

BENCHMARK_MAIN();
