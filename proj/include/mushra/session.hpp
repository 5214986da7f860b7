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

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "mushra/error.hpp"
#include "mushra/trial_planner.hpp"

namespace mushra::session {

class SessionError : public InputError {
 public:
  enum class Code { kBadRequest, kNotFound, kConflict };

  SessionError(Code code, const std::string& what, std::vector<std::string> missing = {})
      : InputError(what), code_(code), missing_(std::move(missing)) {}

  Code code() const { return code_; }
  // Stimulus IDs absent from a rejected submission.
  const std::vector<std::string>& missing() const { return missing_; }

 private:
  Code code_;
  std::vector<std::string> missing_;
};

enum class SessionState { kTraining, kInProgress, kComplete };
std::string to_string(SessionState s);

struct SessionInfo {
  std::string session_id;
  std::string listener_id;
  std::uint64_t seed = 0;
  SessionState state = SessionState::kTraining;
  std::size_t next_index = 0;  // position in the listener's trial sequence
  std::size_t total = 0;       // training + test trials
  std::int64_t created_at = 0;
};

struct StimulusView {
  std::string stimulus_id;  // opaque, unique within the session
};

struct TrialView {
  std::string session_id;
  std::string trial_id;
  std::size_t index = 0;
  std::size_t total = 0;
  bool training = false;
  std::vector<StimulusView> stimuli;  // listener's presentation order
};

struct Rating {
  std::string stimulus_id;
  int score = 0;
};

struct SubmitResult {
  SessionInfo session;
  std::optional<TrialView> next;  // empty once the session is complete
  bool replayed = false;          // the same submission arrived twice
};

struct ServiceOptions {
  std::string database_path;
  std::string audio_root;  // directory the plan's file references resolve against
  std::uint64_t seed = 0;
  std::function<std::int64_t()> clock;  // unix seconds; defaults to the system clock
};

// Thread-safe. Sessions, ratings and trial progress live in one SQLite file so
// a restarted service resumes every session at its first incomplete trial.
class SessionService {
 public:
  SessionService(plan::TrialPlan plan, ServiceOptions options);
  ~SessionService();
  SessionService(const SessionService&) = delete;
  SessionService& operator=(const SessionService&) = delete;

  SessionInfo create_session(const std::string& listener_id);
  SessionInfo get_session(const std::string& session_id);
  std::optional<TrialView> current_trial(const std::string& session_id);

  // `submission_id` makes retries idempotent: resending the accepted ratings
  // of the previous trial with the same ID returns the current state.
  SubmitResult submit(const std::string& session_id, const std::string& trial_id,
                      const std::vector<Rating>& ratings,
                      const std::optional<std::string>& submission_id = std::nullopt);

  // Path of a stimulus of the session's current trial; "reference" names the
  // open reference.
  std::string audio_path(const std::string& session_id, const std::string& stimulus_id);

  // Columns listener_id,item,series,condition,score sorted by those columns;
  // training trials are excluded.
  std::string export_csv();

  const plan::TrialPlan& plan() const { return plan_; }
  const std::string& plan_sha256() const { return plan_sha256_; }

 private:
  struct Impl;
  struct Sequence;

  const Sequence& sequence_for(const SessionInfo& info);
  SessionInfo load_session(const std::string& session_id);
  TrialView make_view(const SessionInfo& info, std::size_t index);
  std::string stimulus_token(const SessionInfo& info, const plan::Trial& trial,
                             const plan::Stimulus& stimulus) const;

  plan::TrialPlan plan_;
  std::string plan_sha256_;
  ServiceOptions options_;
  std::unique_ptr<Impl> impl_;
  std::mutex mutex_;
  std::map<std::string, std::unique_ptr<Sequence>> sequences_;
};

// Files of the plan whose SHA-256 no longer matches, as "file: reason" lines.
std::vector<std::string> verify_plan_audio(const plan::TrialPlan& plan, const std::string& audio_root);

}  // namespace mushra::session
