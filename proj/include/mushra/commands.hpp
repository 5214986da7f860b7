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

#include <map>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "mushra/config.hpp"

namespace mushra::app {

// Item name -> artifact kinds its trials need, from test and training trials.
std::map<std::string, std::set<artifact::ArtifactKind>> required_items(const RunConfig& config);

// Renders every quality level in both stereo modes for each kind an item
// needs, plus anchors and reference, and writes the manifest. Missing or
// unreadable inputs are all listed in one InputError.
std::vector<artifact::ManifestRow> cmd_generate(const RunConfig& config, std::ostream& log);

plan::TrialPlan cmd_plan(const RunConfig& config, std::ostream& log);

// Checks every plan file against its recorded hash first and throws
// ContractError on a mismatch. With dry_run it stops after the check.
void cmd_serve(const RunConfig& config, bool dry_run, std::ostream& log);

// Runs simulated listeners through the session service and exports their
// scores to config.scores_path(). For exercising the pipeline without people.
std::string cmd_simulate(const RunConfig& config, std::ostream& log);

// Writes summaries, comparisons and figure tables; returns file name -> SHA-256.
std::map<std::string, std::string> cmd_analyze(const RunConfig& config, std::ostream& log);

// Masking-threshold matrix of one channel of `reference`, or the NMR matrix of
// `degraded` against it when `degraded` is non-empty. Uses config.engine.
void cmd_thresholds(const RunConfig& config, const std::string& reference, const std::string& degraded,
                    std::size_t channel, std::ostream& out);

}  // namespace mushra::app
