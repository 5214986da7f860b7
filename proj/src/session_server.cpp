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

#include "mushra/session_server.hpp"

#include <fstream>
#include <sstream>

#include "httplib.h"
#include "json.hpp"

namespace mushra::session {

namespace {

using nlohmann::json;

json session_json(const SessionInfo& s) {
  return {{"session_id", s.session_id},
          {"listener_id", s.listener_id},
          {"state", to_string(s.state)},
          {"trial_index", s.next_index},
          {"trial_count", s.total}};
}

json trial_json(const SessionInfo& s, const std::optional<TrialView>& view) {
  if (!view) {
    return {{"session_id", s.session_id}, {"state", to_string(s.state)}, {"index", s.total},
            {"total", s.total}};
  }
  const std::string base = "/api/sessions/" + s.session_id + "/audio/";
  json stimuli = json::array();
  for (const auto& st : view->stimuli) {
    stimuli.push_back({{"stimulus_id", st.stimulus_id}, {"audio_url", base + st.stimulus_id}});
  }
  return {{"session_id", s.session_id},
          {"state", to_string(s.state)},
          {"trial_id", view->trial_id},
          {"index", view->index},
          {"total", view->total},
          {"training", view->training},
          {"reference_url", base + "reference"},
          {"stimuli", stimuli}};
}

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& message,
                const std::vector<std::string>& missing = {}) {
  json body{{"error", message}};
  if (!missing.empty()) body["missing"] = missing;
  send_json(res, status, body);
}

int status_of(SessionError::Code code) {
  switch (code) {
    case SessionError::Code::kBadRequest: return 400;
    case SessionError::Code::kNotFound: return 404;
    case SessionError::Code::kConflict: return 409;
  }
  return 500;
}

template <class F>
httplib::Server::Handler guarded(F&& f) {
  return [f = std::forward<F>(f)](const httplib::Request& req, httplib::Response& res) {
    try {
      f(req, res);
    } catch (const SessionError& e) {
      send_error(res, status_of(e.code()), e.what(), e.missing());
    } catch (const json::exception& e) {
      send_error(res, 400, std::string("malformed request body: ") + e.what());
    } catch (const std::exception& e) {
      send_error(res, 500, e.what());
    }
  };
}

std::vector<Rating> parse_ratings(const json& body) {
  const auto& arr = body.at("ratings");
  if (!arr.is_array()) throw SessionError(SessionError::Code::kBadRequest, "ratings must be an array");
  std::vector<Rating> out;
  for (const auto& r : arr) {
    const auto& score = r.at("score");
    if (!score.is_number_integer()) {
      throw SessionError(SessionError::Code::kBadRequest, "score must be an integer");
    }
    const auto id = r.at("stimulus_id").get<std::string>();
    const auto v = score.get<std::int64_t>();
    if (v < 0 || v > 100) {
      throw SessionError(SessionError::Code::kBadRequest,
                         "score " + std::to_string(v) + " for stimulus " + id + " is outside 0..100");
    }
    out.push_back({id, static_cast<int>(v)});
  }
  return out;
}

}  // namespace

struct HttpServer::Impl {
  httplib::Server server;
};

HttpServer::HttpServer(SessionService& service, std::string static_dir) : impl_(std::make_unique<Impl>()) {
  auto& srv = impl_->server;
  srv.set_payload_max_length(1 << 20);

  srv.Post("/api/sessions", guarded([&service](const httplib::Request& req, httplib::Response& res) {
             const auto body = json::parse(req.body);
             const auto info = service.create_session(body.at("listener_id").get<std::string>());
             send_json(res, 201, session_json(info));
           }));

  srv.Get(R"(/api/sessions/([^/]+))",
          guarded([&service](const httplib::Request& req, httplib::Response& res) {
            send_json(res, 200, session_json(service.get_session(req.matches[1])));
          }));

  srv.Get(R"(/api/sessions/([^/]+)/trial)",
          guarded([&service](const httplib::Request& req, httplib::Response& res) {
            const std::string id = req.matches[1];
            const auto view = service.current_trial(id);
            send_json(res, 200, trial_json(service.get_session(id), view));
          }));

  srv.Get(R"(/api/sessions/([^/]+)/audio/([^/]+))",
          guarded([&service](const httplib::Request& req, httplib::Response& res) {
            const auto path = service.audio_path(req.matches[1], req.matches[2]);
            std::ifstream in(path, std::ios::binary);
            if (!in) throw std::runtime_error("stimulus file unavailable");
            std::ostringstream ss;
            ss << in.rdbuf();
            res.set_header("Cache-Control", "no-store");
            res.set_content(ss.str(), "audio/wav");
          }));

  srv.Post(R"(/api/sessions/([^/]+)/trials/([^/]+))",
           guarded([&service](const httplib::Request& req, httplib::Response& res) {
             const auto body = json::parse(req.body);
             std::optional<std::string> submission;
             if (body.contains("submission_id") && !body["submission_id"].is_null()) {
               submission = body["submission_id"].get<std::string>();
             }
             const auto result = service.submit(req.matches[1], req.matches[2], parse_ratings(body), submission);
             auto out = trial_json(result.session, result.next);
             out["accepted"] = true;
             out["replayed"] = result.replayed;
             send_json(res, 200, out);
           }));

  srv.Get("/api/export.csv", guarded([&service](const httplib::Request&, httplib::Response& res) {
            res.set_content(service.export_csv(), "text/csv");
          }));

  if (!static_dir.empty()) srv.set_mount_point("/", static_dir);
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) {
    const int p = impl_->server.bind_to_any_port(host);
    if (p < 0) throw InputError("cannot bind " + host);
    return p;
  }
  if (!impl_->server.bind_to_port(host, port)) {
    throw InputError("cannot bind " + host + ":" + std::to_string(port));
  }
  return port;
}

void HttpServer::run() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_->server.is_running()) impl_->server.stop();
}

void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace mushra::session
