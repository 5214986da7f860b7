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

#include <sqlite3.h>

#include <algorithm>
#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <set>
#include <sstream>

#include "mushra/seeds.hpp"
#include "mushra/session.hpp"
#include "mushra/sha256.hpp"

namespace mushra::session {

std::string to_string(SessionState s) {
  switch (s) {
    case SessionState::kTraining: return "training";
    case SessionState::kInProgress: return "in-progress";
    case SessionState::kComplete: return "complete";
  }
  return "?";
}

namespace {

class Db {
 public:
  explicit Db(const std::string& path) {
    if (sqlite3_open_v2(path.c_str(), &db_, SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE | SQLITE_OPEN_NOMUTEX,
                        nullptr) != SQLITE_OK) {
      const std::string msg = db_ ? sqlite3_errmsg(db_) : "out of memory";
      sqlite3_close(db_);
      throw InputError("cannot open database " + path + ": " + msg);
    }
    sqlite3_busy_timeout(db_, 5000);
  }
  ~Db() { sqlite3_close(db_); }
  Db(const Db&) = delete;
  Db& operator=(const Db&) = delete;

  void exec(const std::string& sql) {
    char* err = nullptr;
    if (sqlite3_exec(db_, sql.c_str(), nullptr, nullptr, &err) != SQLITE_OK) {
      const std::string msg = err ? err : "unknown error";
      sqlite3_free(err);
      throw InputError("database error: " + msg);
    }
  }
  sqlite3* get() const { return db_; }

 private:
  sqlite3* db_ = nullptr;
};

class Stmt {
 public:
  Stmt(const Db& db, const char* sql) : db_(db.get()) {
    if (sqlite3_prepare_v2(db_, sql, -1, &stmt_, nullptr) != SQLITE_OK) {
      throw InputError(std::string("database error: ") + sqlite3_errmsg(db_));
    }
  }
  ~Stmt() { sqlite3_finalize(stmt_); }
  Stmt(const Stmt&) = delete;
  Stmt& operator=(const Stmt&) = delete;

  Stmt& bind(int i, const std::string& v) {
    sqlite3_bind_text(stmt_, i, v.c_str(), static_cast<int>(v.size()), SQLITE_TRANSIENT);
    return *this;
  }
  Stmt& bind(int i, std::int64_t v) {
    sqlite3_bind_int64(stmt_, i, v);
    return *this;
  }
  Stmt& bind_null(int i) {
    sqlite3_bind_null(stmt_, i);
    return *this;
  }
  // True while rows are available.
  bool step() {
    const int rc = sqlite3_step(stmt_);
    if (rc == SQLITE_ROW) return true;
    if (rc == SQLITE_DONE) return false;
    throw InputError(std::string("database error: ") + sqlite3_errmsg(db_));
  }
  std::string text(int col) const {
    const auto* p = sqlite3_column_text(stmt_, col);
    return p ? reinterpret_cast<const char*>(p) : "";
  }
  std::int64_t integer(int col) const { return sqlite3_column_int64(stmt_, col); }
  bool is_null(int col) const { return sqlite3_column_type(stmt_, col) == SQLITE_NULL; }

 private:
  sqlite3* db_;
  sqlite3_stmt* stmt_ = nullptr;
};

constexpr const char* kSchema = R"sql(
CREATE TABLE IF NOT EXISTS sessions (
  session_id TEXT PRIMARY KEY,
  listener_id TEXT NOT NULL UNIQUE,
  seed TEXT NOT NULL,
  plan_sha256 TEXT NOT NULL,
  next_index INTEGER NOT NULL,
  created_at INTEGER NOT NULL,
  completed_at INTEGER
);
CREATE TABLE IF NOT EXISTS submissions (
  session_id TEXT NOT NULL,
  trial_id TEXT NOT NULL,
  position INTEGER NOT NULL,
  submission_id TEXT,
  submitted_at INTEGER NOT NULL,
  PRIMARY KEY (session_id, trial_id)
);
CREATE TABLE IF NOT EXISTS ratings (
  session_id TEXT NOT NULL,
  listener_id TEXT NOT NULL,
  trial_id TEXT NOT NULL,
  item TEXT NOT NULL,
  series TEXT NOT NULL,
  training INTEGER NOT NULL,
  condition TEXT NOT NULL,
  stimulus_id TEXT NOT NULL,
  score INTEGER NOT NULL CHECK (score BETWEEN 0 AND 100),
  PRIMARY KEY (session_id, trial_id, condition)
);
)sql";

std::string hex16(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
  return buf;
}

bool valid_listener_id(const std::string& id) {
  if (id.empty() || id.size() > 128) return false;
  return std::all_of(id.begin(), id.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_' || c == '-' || c == '.';
  });
}

std::int64_t system_clock_seconds() {
  return std::chrono::duration_cast<std::chrono::seconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

}  // namespace

struct SessionService::Impl {
  explicit Impl(const std::string& path) : writer(path), reader(path) {}
  Db writer;
  Db reader;  // export path, so long exports do not queue behind submits
  std::mutex reader_mutex;
};

struct SessionService::Sequence {
  struct Entry {
    const plan::Trial* trial;
    std::vector<std::size_t> order;         // stimulus permutation
    std::vector<std::string> tokens;        // token of stimuli[k], canonical order
  };
  std::vector<Entry> entries;
  std::size_t training_count = 0;
};

SessionService::SessionService(plan::TrialPlan plan, ServiceOptions options)
    : plan_(std::move(plan)), options_(std::move(options)) {
  if (plan_.trials.empty()) throw ContractError("plan has no test trials");
  if (options_.database_path.empty()) throw InputError("no session database path given");
  if (!options_.clock) options_.clock = system_clock_seconds;
  plan_sha256_ = sha256_hex(plan::plan_to_json(plan_));
  impl_ = std::make_unique<Impl>(options_.database_path);
  // WAL commits survive a crash of the service process with synchronous=NORMAL.
  impl_->writer.exec("PRAGMA journal_mode=WAL; PRAGMA synchronous=NORMAL;");
  impl_->writer.exec(kSchema);
}

SessionService::~SessionService() = default;

std::string SessionService::stimulus_token(const SessionInfo& info, const plan::Trial& trial,
                                           const plan::Stimulus& stimulus) const {
  return hex16(derive_seed(info.seed, "stimulus|" + trial.trial_id + "|" + stimulus.condition));
}

const SessionService::Sequence& SessionService::sequence_for(const SessionInfo& info) {
  auto& slot = sequences_[info.session_id];
  if (slot) return *slot;
  auto seq = std::make_unique<Sequence>();
  const auto order = plan::randomize(plan_, info.seed);
  const auto add = [&](const plan::Trial& t) {
    Sequence::Entry e{&t, order.stimulus_order.at(t.trial_id), {}};
    std::set<std::string> seen;
    for (const auto& s : t.stimuli) {
      e.tokens.push_back(stimulus_token(info, t, s));
      if (!seen.insert(e.tokens.back()).second || e.tokens.back() == "reference") {
        throw ContractError("stimulus token collision in " + t.trial_id);
      }
    }
    seq->entries.push_back(std::move(e));
  };
  for (auto i : order.training_order) add(plan_.training[i]);
  for (auto i : order.trial_order) add(plan_.trials[i]);
  seq->training_count = plan_.training.size();
  slot = std::move(seq);
  return *slot;
}

SessionInfo SessionService::load_session(const std::string& session_id) {
  Stmt q(impl_->writer,
         "SELECT listener_id, seed, plan_sha256, next_index, created_at FROM sessions WHERE session_id = ?");
  q.bind(1, session_id);
  if (!q.step()) throw SessionError(SessionError::Code::kNotFound, "unknown session " + session_id);
  if (q.text(2) != plan_sha256_) {
    throw SessionError(SessionError::Code::kConflict,
                       "session " + session_id + " was created for a different plan");
  }
  SessionInfo info;
  info.session_id = session_id;
  info.listener_id = q.text(0);
  info.seed = std::stoull(q.text(1));
  info.next_index = static_cast<std::size_t>(q.integer(3));
  info.created_at = q.integer(4);
  info.total = plan_.training.size() + plan_.trials.size();
  info.state = info.next_index >= info.total                ? SessionState::kComplete
               : info.next_index < plan_.training.size() ? SessionState::kTraining
                                                          : SessionState::kInProgress;
  return info;
}

SessionInfo SessionService::create_session(const std::string& listener_id) {
  if (!valid_listener_id(listener_id)) {
    throw SessionError(SessionError::Code::kBadRequest,
                       "listener_id must be 1-128 characters of [A-Za-z0-9_.-]");
  }
  std::lock_guard lock(mutex_);
  {
    Stmt q(impl_->writer, "SELECT session_id FROM sessions WHERE listener_id = ?");
    q.bind(1, listener_id);
    if (q.step()) {
      throw SessionError(SessionError::Code::kConflict,
                         "listener " + listener_id + " already has session " + q.text(0));
    }
  }
  const std::string id = "s" + hex16(derive_seed(options_.seed, "session|" + listener_id));
  const std::uint64_t seed = derive_seed(options_.seed, "listener|" + listener_id);
  Stmt ins(impl_->writer,
           "INSERT INTO sessions (session_id, listener_id, seed, plan_sha256, next_index, created_at) "
           "VALUES (?, ?, ?, ?, 0, ?)");
  ins.bind(1, id).bind(2, listener_id).bind(3, std::to_string(seed)).bind(4, plan_sha256_);
  ins.bind(5, options_.clock());
  ins.step();
  return load_session(id);
}

SessionInfo SessionService::get_session(const std::string& session_id) {
  std::lock_guard lock(mutex_);
  return load_session(session_id);
}

TrialView SessionService::make_view(const SessionInfo& info, std::size_t index) {
  const auto& e = sequence_for(info).entries.at(index);
  TrialView v;
  v.session_id = info.session_id;
  v.trial_id = e.trial->trial_id;
  v.index = index;
  v.total = info.total;
  v.training = e.trial->training;
  for (auto k : e.order) v.stimuli.push_back({e.tokens[k]});
  return v;
}

std::optional<TrialView> SessionService::current_trial(const std::string& session_id) {
  std::lock_guard lock(mutex_);
  const auto info = load_session(session_id);
  if (info.state == SessionState::kComplete) return std::nullopt;
  return make_view(info, info.next_index);
}

SubmitResult SessionService::submit(const std::string& session_id, const std::string& trial_id,
                                    const std::vector<Rating>& ratings,
                                    const std::optional<std::string>& submission_id) {
  using Code = SessionError::Code;
  std::lock_guard lock(mutex_);
  auto info = load_session(session_id);
  const auto& seq = sequence_for(info);
  const auto pos = std::find_if(seq.entries.begin(), seq.entries.end(),
                                [&](const Sequence::Entry& e) { return e.trial->trial_id == trial_id; });
  if (pos == seq.entries.end()) throw SessionError(Code::kNotFound, "unknown trial " + trial_id);
  const auto index = static_cast<std::size_t>(pos - seq.entries.begin());
  const auto& entry = *pos;

  std::map<std::string, int> by_token;
  for (const auto& r : ratings) {
    if (r.score < 0 || r.score > 100) {
      throw SessionError(Code::kBadRequest, "score " + std::to_string(r.score) + " for stimulus " +
                                                r.stimulus_id + " is outside 0..100");
    }
    if (!by_token.emplace(r.stimulus_id, r.score).second) {
      throw SessionError(Code::kBadRequest, "stimulus " + r.stimulus_id + " rated twice");
    }
  }

  if (index < info.next_index) {
    // Already stored: only an identical retry of the same submission is accepted.
    Stmt q(impl_->writer, "SELECT submission_id FROM submissions WHERE session_id = ? AND trial_id = ?");
    q.bind(1, session_id).bind(2, trial_id);
    const bool same_id = q.step() && submission_id && !q.is_null(0) && q.text(0) == *submission_id;
    bool same_scores = same_id;
    if (same_id) {
      Stmt r(impl_->writer, "SELECT stimulus_id, score FROM ratings WHERE session_id = ? AND trial_id = ?");
      r.bind(1, session_id).bind(2, trial_id);
      std::map<std::string, int> stored;
      while (r.step()) stored[r.text(0)] = static_cast<int>(r.integer(1));
      same_scores = stored == by_token;
    }
    if (!same_scores) throw SessionError(Code::kConflict, "trial " + trial_id + " was already submitted");
    SubmitResult out{info, std::nullopt, true};
    if (info.state != SessionState::kComplete) out.next = make_view(info, info.next_index);
    return out;
  }
  if (index > info.next_index) {
    throw SessionError(Code::kConflict, "trial " + trial_id + " is not the current trial " +
                                            seq.entries[info.next_index].trial->trial_id);
  }

  std::vector<std::string> missing;
  for (auto k : entry.order) {
    if (by_token.count(entry.tokens[k]) == 0) missing.push_back(entry.tokens[k]);
  }
  for (const auto& [token, score] : by_token) {
    if (std::find(entry.tokens.begin(), entry.tokens.end(), token) == entry.tokens.end()) {
      throw SessionError(Code::kBadRequest, "stimulus " + token + " is not part of trial " + trial_id);
    }
  }
  if (!missing.empty()) {
    std::string msg = "missing rating for stimulus";
    for (const auto& m : missing) msg += " " + m;
    throw SessionError(Code::kBadRequest, msg, missing);
  }

  auto& db = impl_->writer;
  db.exec("BEGIN IMMEDIATE");
  try {
    const auto now = options_.clock();
    Stmt sub(db,
             "INSERT INTO submissions (session_id, trial_id, position, submission_id, submitted_at) "
             "VALUES (?, ?, ?, ?, ?)");
    sub.bind(1, session_id).bind(2, trial_id).bind(3, static_cast<std::int64_t>(index)).bind(5, now);
    if (submission_id) {
      sub.bind(4, *submission_id);
    } else {
      sub.bind_null(4);
    }
    sub.step();
    const auto& trial = *entry.trial;
    for (std::size_t k = 0; k < trial.stimuli.size(); ++k) {
      Stmt ins(db,
               "INSERT INTO ratings (session_id, listener_id, trial_id, item, series, training, condition, "
               "stimulus_id, score) VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?)");
      ins.bind(1, session_id).bind(2, info.listener_id).bind(3, trial_id).bind(4, trial.item);
      ins.bind(5, plan::to_string(trial.series)).bind(6, std::int64_t{trial.training ? 1 : 0});
      ins.bind(7, trial.stimuli[k].condition).bind(8, entry.tokens[k]);
      ins.bind(9, std::int64_t{by_token.at(entry.tokens[k])});
      ins.step();
    }
    Stmt upd(db, "UPDATE sessions SET next_index = ?, completed_at = ? WHERE session_id = ?");
    upd.bind(1, static_cast<std::int64_t>(index + 1)).bind(3, session_id);
    if (index + 1 == info.total) {
      upd.bind(2, now);
    } else {
      upd.bind_null(2);
    }
    upd.step();
    db.exec("COMMIT");
  } catch (...) {
    db.exec("ROLLBACK");
    throw;
  }
  info = load_session(session_id);
  SubmitResult out{info, std::nullopt, false};
  if (info.state != SessionState::kComplete) out.next = make_view(info, info.next_index);
  return out;
}

std::string SessionService::audio_path(const std::string& session_id, const std::string& stimulus_id) {
  std::lock_guard lock(mutex_);
  const auto info = load_session(session_id);
  if (info.state == SessionState::kComplete) {
    throw SessionError(SessionError::Code::kNotFound, "session " + session_id + " is complete");
  }
  const auto& e = sequence_for(info).entries.at(info.next_index);
  std::string file;
  if (stimulus_id == "reference") {
    file = e.trial->reference.file;
  } else {
    const auto it = std::find(e.tokens.begin(), e.tokens.end(), stimulus_id);
    if (it == e.tokens.end()) {
      throw SessionError(SessionError::Code::kNotFound, "unknown stimulus " + stimulus_id);
    }
    file = e.trial->stimuli[static_cast<std::size_t>(it - e.tokens.begin())].audio.file;
  }
  return (std::filesystem::path(options_.audio_root) / file).string();
}

std::string SessionService::export_csv() {
  std::lock_guard lock(impl_->reader_mutex);
  Stmt q(impl_->reader,
         "SELECT listener_id, item, series, condition, score FROM ratings WHERE training = 0 "
         "ORDER BY listener_id, item, series, condition");
  std::ostringstream out;
  out << "listener_id,item,series,condition,score\n";
  while (q.step()) {
    out << q.text(0) << ',' << q.text(1) << ',' << q.text(2) << ',' << q.text(3) << ',' << q.integer(4)
        << '\n';
  }
  return out.str();
}

std::vector<std::string> verify_plan_audio(const plan::TrialPlan& plan, const std::string& audio_root) {
  std::map<std::string, std::string> expected;
  for (const auto* list : {&plan.training, &plan.trials}) {
    for (const auto& t : *list) {
      expected[t.reference.file] = t.reference.sha256;
      for (const auto& s : t.stimuli) expected[s.audio.file] = s.audio.sha256;
    }
  }
  std::vector<std::string> problems;
  for (const auto& [file, sha] : expected) {
    const auto path = std::filesystem::path(audio_root) / file;
    if (!std::filesystem::exists(path)) {
      problems.push_back(file + ": missing");
    } else if (sha256_file(path) != sha) {
      problems.push_back(file + ": hash differs from plan");
    }
  }
  return problems;
}

}  // namespace mushra::session
