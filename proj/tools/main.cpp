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

#include <iostream>

#include "CLI11.hpp"
#include "mushra/commands.hpp"
#include "mushra/error.hpp"
#include "mushra/synth.hpp"

namespace {

constexpr int kInputError = 1;
constexpr int kContractError = 2;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stereo coding-artifact MUSHRA toolkit: stimuli, trial plans, rating service and analysis."};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  app.add_option("--config", config_path, "RunConfig JSON; defaults apply when omitted");
  app.add_option("--seed", seed, "Override the master seed");
  app.add_option("--out", out_dir, "Override the output directory");

  double duration = 12.0;
  auto* synth = app.add_subcommand("synth", "Write synthetic stereo stand-ins for every required item");
  synth->add_option("--duration", duration, "Item length in seconds")->check(CLI::PositiveNumber);

  auto* generate = app.add_subcommand("generate", "Render all conditions, anchors and references; write the manifest");
  auto* plan = app.add_subcommand("plan", "Build the trial plan from the manifest");

  bool dry_run = false;
  std::optional<int> port;
  std::string host;
  auto* serve = app.add_subcommand("serve", "Verify stimuli against the plan and run the rating service");
  serve->add_flag("--dry-run", dry_run, "Only verify the plan's stimulus hashes");
  serve->add_option("--port", port, "Listening port (0 picks a free one)");
  serve->add_option("--host", host, "Listening address");

  std::optional<int> listeners;
  auto* simulate = app.add_subcommand("simulate", "Rate the plan with simulated listeners and export scores");
  simulate->add_option("--listeners", listeners, "Number of simulated listeners")->check(CLI::NonNegativeNumber);

  std::string scores, mapping;
  auto* analyze = app.add_subcommand("analyze", "Summaries, LR/MS significance and figure tables");
  analyze->add_option("--scores", scores, "Score table (CSV)");
  analyze->add_option("--mapping", mapping, "Column mapping JSON for other score layouts");

  std::string reference, degraded;
  std::size_t channel = 0;
  auto* thresholds = app.add_subcommand("thresholds", "Dump a masking-threshold (or NMR) matrix in dB");
  thresholds->add_option("reference", reference, "Reference WAV")->required();
  thresholds->add_option("--nmr", degraded, "Degraded WAV; dump its NMR against the reference instead");
  thresholds->add_option("--channel", channel, "Channel index");

  auto* show = app.add_subcommand("config", "Print the effective configuration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    auto config = config_path.empty() ? mushra::app::RunConfig{} : mushra::app::load_config(config_path);
    if (seed) config.seed = *seed;
    if (!out_dir.empty()) config.paths.out_dir = out_dir;
    if (port) config.serve.port = *port;
    if (!host.empty()) config.serve.host = host;
    if (listeners) config.simulation.listeners = *listeners;
    if (!scores.empty()) config.paths.scores = scores;
    if (!mapping.empty()) config.paths.column_mapping = mapping;

    if (*synth) {
      mushra::app::cmd_synth(config, duration, std::cout);
    } else if (*generate) {
      mushra::app::cmd_generate(config, std::cout);
    } else if (*plan) {
      mushra::app::cmd_plan(config, std::cout);
    } else if (*serve) {
      mushra::app::cmd_serve(config, dry_run, std::cout);
    } else if (*simulate) {
      mushra::app::cmd_simulate(config, std::cout);
    } else if (*analyze) {
      mushra::app::cmd_analyze(config, std::cout);
    } else if (*thresholds) {
      mushra::app::cmd_thresholds(config, reference, degraded, channel, std::cout);
    } else if (*show) {
      std::cout << mushra::app::config_to_json(config);
    }
  } catch (const mushra::ContractError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kContractError;
  } catch (const mushra::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kContractError;
  }
  return 0;
}
