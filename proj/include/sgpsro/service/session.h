// Copyright 2026 The sgpsro Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SGPSRO_SERVICE_SESSION_H_
#define SGPSRO_SERVICE_SESSION_H_

#include <atomic>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>

#include "json.hpp"
#include "sgpsro/game/registry.h"
#include "sgpsro/service/agents.h"
#include "sgpsro/service/episode_log.h"

namespace sgpsro {

struct ServiceConfig {
  GameSpec game = GameSpec::FromJson("dond");
  int episodes_per_session = 5;
  double deadline_seconds = 120.0;
  // Mean of an exponential pause before each agent move; 0 replies at once.
  double reply_delay_seconds = 0.0;
  // "random" (coin toss per episode), "first" or "second".
  std::string human_seat = "random";
  std::string log_path;           // no episode log when empty
  bool exclude_timeouts = false;  // for log summaries
  int max_sessions = 10000;

  void Validate() const;
  nlohmann::json ToJson() const;
  // Unknown keys are rejected as "service.<key>".
  static ServiceConfig FromJson(const nlohmann::json& j);
};

// Milliseconds since the Unix epoch.
using ClockMs = std::function<std::int64_t()>;
std::int64_t SystemClockMs();

enum class EpisodeStatus { kActive, kDeal, kNoDeal, kTimeout, kDone };
std::string EpisodeStatusName(EpisodeStatus status);

class Session;

// Sessions of human-vs-agent Deal or No Deal. Requests on one session are
// serialized; different sessions run in parallel. Responses carry only what
// the human may see.
class SessionManager {
 public:
  SessionManager(ServiceConfig config,
                 std::shared_ptr<const AgentRegistry> agents,
                 ClockMs clock = SystemClockMs);
  ~SessionManager();

  // {"session_id", "view"}. Throws kNotFound for unknown agents.
  nlohmann::json Create(const std::string& agent_id,
                        std::optional<std::uint64_t> seed = std::nullopt);
  // {"view"}.
  nlohmann::json Get(const std::string& session_id);
  // action = {"type": "propose", "split": [...]} | {"type": "accept"} |
  // {"type": "continue"}; returns {"view"}.
  nlohmann::json Act(const std::string& session_id,
                     const nlohmann::json& action);

  std::vector<AgentInfo> Agents() const { return agents_->List(); }
  int num_sessions() const;
  int log_failures() const { return log_failures_.load(); }
  const ServiceConfig& config() const { return config_; }

 private:
  std::shared_ptr<Session> Find(const std::string& id) const;
  void Log(const EpisodeLogRecord& record);

  ServiceConfig config_;
  std::shared_ptr<const AgentRegistry> agents_;
  ClockMs clock_;
  std::unique_ptr<EpisodeLog> log_;
  mutable std::shared_mutex mu_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::atomic<std::uint64_t> counter_{0};
  std::uint64_t id_salt_;
  std::atomic<int> log_failures_{0};

  friend class Session;
};

}  // namespace sgpsro

#endif  // SGPSRO_SERVICE_SESSION_H_
