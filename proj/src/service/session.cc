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

#include "sgpsro/service/session.h"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <mutex>
#include <random>
#include <thread>
#include <utility>

#include "sgpsro/core/error.h"
#include "sgpsro/core/random.h"
#include "sgpsro/game/dond.h"
#include "spdlog/spdlog.h"

namespace sgpsro {

void ServiceConfig::Validate() const {
  if (game.id != "dond" && game.id != "mini_dond") {
    Fail(ErrorCode::kInvalidArgument,
         "service.game: the play service needs dond or mini_dond, got '",
         game.id, "'");
  }
  game.Validate();
  if (episodes_per_session < 1) {
    Fail(ErrorCode::kInvalidArgument,
         "service.episodes_per_session must be >= 1");
  }
  if (!(deadline_seconds > 0.0)) {
    Fail(ErrorCode::kInvalidArgument, "service.deadline_seconds must be > 0");
  }
  if (!(reply_delay_seconds >= 0.0)) {
    Fail(ErrorCode::kInvalidArgument,
         "service.reply_delay_seconds must be >= 0");
  }
  if (human_seat != "random" && human_seat != "first" &&
      human_seat != "second") {
    Fail(ErrorCode::kInvalidArgument,
         "service.human_seat must be random, first or second");
  }
  if (max_sessions < 1) {
    Fail(ErrorCode::kInvalidArgument, "service.max_sessions must be >= 1");
  }
}

nlohmann::json ServiceConfig::ToJson() const {
  return {{"game", game.ToJson()},
          {"episodes_per_session", episodes_per_session},
          {"deadline_seconds", deadline_seconds},
          {"reply_delay_seconds", reply_delay_seconds},
          {"human_seat", human_seat},
          {"log_path", log_path},
          {"exclude_timeouts", exclude_timeouts},
          {"max_sessions", max_sessions}};
}

ServiceConfig ServiceConfig::FromJson(const nlohmann::json& j) {
  ServiceConfig c;
  if (j.is_null()) return c;
  if (!j.is_object()) {
    Fail(ErrorCode::kInvalidArgument, "service: expected a JSON object");
  }
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "game") {
        c.game = GameSpec::FromJson(value);
      } else if (key == "episodes_per_session") {
        c.episodes_per_session = value.get<int>();
      } else if (key == "deadline_seconds") {
        c.deadline_seconds = value.get<double>();
      } else if (key == "reply_delay_seconds") {
        c.reply_delay_seconds = value.get<double>();
      } else if (key == "human_seat") {
        c.human_seat = value.get<std::string>();
      } else if (key == "log_path") {
        c.log_path = value.get<std::string>();
      } else if (key == "exclude_timeouts") {
        c.exclude_timeouts = value.get<bool>();
      } else if (key == "max_sessions") {
        c.max_sessions = value.get<int>();
      } else {
        Fail(ErrorCode::kInvalidArgument, "service.", key, ": unknown field");
      }
    } catch (const nlohmann::json::exception& e) {
      Fail(ErrorCode::kInvalidArgument, "service.", key, ": ", e.what());
    }
  }
  c.Validate();
  return c;
}

std::int64_t SystemClockMs() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

std::string EpisodeStatusName(EpisodeStatus status) {
  switch (status) {
    case EpisodeStatus::kActive:
      return "active";
    case EpisodeStatus::kDeal:
      return "deal";
    case EpisodeStatus::kNoDeal:
      return "no-deal";
    case EpisodeStatus::kTimeout:
      return "timeout";
    case EpisodeStatus::kDone:
      return "done";
  }
  return "unknown";
}

class Session {
 public:
  Session(std::string id, std::string agent_id, AgentPtr agent,
          std::uint64_t seed, SessionManager* manager)
      : id_(std::move(id)),
        agent_id_(std::move(agent_id)),
        agent_(std::move(agent)),
        seed_(seed),
        manager_(manager),
        game_(
            std::static_pointer_cast<const DondGame>(manager->agents_->game())),
        delay_rng_(DeriveSeed(seed, 0xde1a7)) {}

  nlohmann::json Start() {
    std::lock_guard<std::mutex> lock(mu_);
    StartEpisode(1);
    return View();
  }

  nlohmann::json Get() {
    std::lock_guard<std::mutex> lock(mu_);
    CheckDeadline();
    return View();
  }

  nlohmann::json Act(const nlohmann::json& action) {
    std::lock_guard<std::mutex> lock(mu_);
    if (!action.is_object() || !action.contains("type") ||
        !action["type"].is_string()) {
      Fail(ErrorCode::kInvalidArgument,
           "action must be an object with a string \"type\"");
    }
    const std::string type = action["type"];
    if (type != "propose" && type != "accept" && type != "continue") {
      Fail(ErrorCode::kInvalidArgument, "unknown action type '", type,
           "'; expected propose, accept or continue");
    }
    if (CheckDeadline()) return View();
    if (status_ == EpisodeStatus::kDone) {
      Fail(ErrorCode::kFailedPrecondition, "session is complete");
    }
    if (type == "continue") {
      if (status_ == EpisodeStatus::kActive) {
        Fail(ErrorCode::kConflict, "episode ", episode_, " is in progress");
      }
      if (episode_ < config().episodes_per_session) {
        StartEpisode(episode_ + 1);
      } else {
        status_ = EpisodeStatus::kDone;
      }
      return View();
    }
    if (status_ != EpisodeStatus::kActive) {
      Fail(ErrorCode::kConflict, "episode ", episode_,
           " has ended; send continue");
    }
    if (state_->CurrentPlayer() != human_seat_) {
      Fail(ErrorCode::kConflict, "it is not your turn");
    }
    Action a;
    if (type == "accept") {
      if (state_->moves().empty()) {
        Fail(ErrorCode::kFailedPrecondition, "there is no proposal to accept");
      }
      a = game_->accept_action();
    } else {
      a = game_->EncodeSplit(ParseSplit(action));
    }
    Apply(human_seat_, a);
    RunAgent();
    return View();
  }

 private:
  const ServiceConfig& config() const { return manager_->config_; }
  std::int64_t Now() const { return manager_->clock_(); }

  void StartEpisode(int episode) {
    episode_ = episode;
    Rng rng(DeriveSeed(seed_, episode));
    const int n = static_cast<int>(game_->instances().size());
    const int index = std::uniform_int_distribution<int>(0, n - 1)(rng);
    const std::string& seat = config().human_seat;
    human_seat_ = seat == "first"    ? 0
                  : seat == "second" ? 1
                                     : (Uniform01(rng) < 0.5 ? 0 : 1);
    state_.reset(
        static_cast<DondState*>(game_->NewStateForInstance(index).release()));
    actions_.clear();
    status_ = EpisodeStatus::kActive;
    started_ms_ = Now();
    deadline_ms_ = started_ms_ +
                   static_cast<std::int64_t>(config().deadline_seconds * 1e3);
    agent_rng_.seed(DeriveSeed(seed_, 0x10000 + episode));
    agent_->BeginEpisode(agent_rng_);
    RunAgent();
  }

  std::vector<int> ParseSplit(const nlohmann::json& action) const {
    const auto& pool = state_->instance().pool;
    std::string bounds = "[";
    for (size_t k = 0; k < pool.size(); ++k) {
      bounds += (k ? ", " : "") + std::string("0..") + std::to_string(pool[k]);
    }
    bounds += "]";
    if (!action.contains("split") || !action["split"].is_array() ||
        action["split"].size() != pool.size()) {
      Fail(ErrorCode::kInvalidArgument, "split must list ", pool.size(),
           " item counts within ", bounds);
    }
    std::vector<int> split;
    for (size_t k = 0; k < pool.size(); ++k) {
      const auto& x = action["split"][k];
      if (!x.is_number_integer() || x.get<long>() < 0 ||
          x.get<long>() > pool[k]) {
        Fail(ErrorCode::kInvalidArgument, "split ", action["split"].dump(),
             " is outside the pool bounds ", bounds);
      }
      split.push_back(x.get<int>());
    }
    return split;
  }

  void Apply(Player player, Action a) {
    LoggedAction la;
    la.player = player;
    if (a == game_->accept_action()) {
      la.type = "accept";
    } else {
      la.type = "propose";
      la.split = game_->DecodeSplit(a);
    }
    actions_.push_back(std::move(la));
    std::unique_ptr<State> next = state_->Child(a);
    state_.reset(static_cast<DondState*>(next.release()));
    if (state_->IsTerminal()) Finish(false);
  }

  void RunAgent() {
    while (status_ == EpisodeStatus::kActive &&
           state_->CurrentPlayer() != human_seat_) {
      if (config().reply_delay_seconds > 0.0) {
        std::exponential_distribution<double> d(1.0 /
                                                config().reply_delay_seconds);
        std::this_thread::sleep_for(
            std::chrono::duration<double>(d(delay_rng_)));
      }
      const auto legal = state_->LegalActions();
      Action a = kInvalidAction;
      try {
        a = agent_->Act(*state_, agent_rng_);
      } catch (const std::exception& e) {
        spdlog::error("session {}: agent {} failed: {}", id_, agent_id_,
                      e.what());
      }
      if (std::find(legal.begin(), legal.end(), a) == legal.end()) {
        spdlog::error(
            "session {}: agent {} chose an illegal move; playing a "
            "random legal one",
            id_, agent_id_);
        a = legal[std::uniform_int_distribution<size_t>(
            0, legal.size() - 1)(agent_rng_)];
      }
      Apply(1 - human_seat_, a);
    }
  }

  // True if the episode just timed out.
  bool CheckDeadline() {
    if (status_ == EpisodeStatus::kActive && Now() > deadline_ms_) {
      Finish(true);
      return true;
    }
    return false;
  }

  void Finish(bool timeout) {
    returns_ = timeout ? std::vector<double>{0.0, 0.0} : state_->Returns();
    status_ = timeout            ? EpisodeStatus::kTimeout
              : state_->agreed() ? EpisodeStatus::kDeal
                                 : EpisodeStatus::kNoDeal;
    const double human = returns_[human_seat_];
    const double agent = returns_[1 - human_seat_];
    totals_[0] += human;
    totals_[1] += agent;
    results_.push_back({{"episode", episode_},
                        {"status", EpisodeStatusName(status_)},
                        {"human", human},
                        {"agent", agent}});
    EpisodeLogRecord r;
    r.session_id = id_;
    r.episode = episode_;
    r.agent_id = agent_id_;
    r.game = config().game;
    r.instance = state_->instance();
    r.human_seat = human_seat_;
    r.actions = actions_;
    r.returns = returns_;
    r.deal = status_ == EpisodeStatus::kDeal;
    r.timeout = timeout;
    r.started_ms = started_ms_;
    r.ended_ms = Now();
    manager_->Log(r);
  }

  nlohmann::json Role(Player p) const {
    return p == human_seat_ ? "human" : "agent";
  }

  nlohmann::json View() const {
    const auto& inst = state_->instance();
    nlohmann::json history = nlohmann::json::array();
    for (const auto& a : actions_) {
      nlohmann::json h = {{"player", Role(a.player)}, {"type", a.type}};
      if (a.type == "propose") h["split"] = a.split;
      history.push_back(std::move(h));
    }
    nlohmann::json v = {
        {"session_id", id_},
        {"agent_id", agent_id_},
        {"episode", episode_},
        {"episodes_total", config().episodes_per_session},
        {"status", EpisodeStatusName(status_)},
        {"pool", inst.pool},
        {"my_values", inst.values[human_seat_]},
        {"my_seat", human_seat_},
        {"history", std::move(history)},
        {"turns_left", game_->params().max_turns - state_->turns_taken()},
        {"deadline_epoch_ms", deadline_ms_},
        {"totals", {{"human", totals_[0]}, {"agent", totals_[1]}}},
        {"results", results_}};
    if (status_ == EpisodeStatus::kActive) {
      v["to_move"] = Role(state_->CurrentPlayer());
      const auto standing = state_->StandingSplit();
      if (!standing.empty()) {
        // What the human would receive by accepting.
        std::vector<int> offer(inst.pool.size());
        for (size_t k = 0; k < offer.size(); ++k) {
          offer[k] = inst.pool[k] - standing[k];
        }
        v["offer_to_you"] = offer;
      }
    } else {
      v["to_move"] = nullptr;
      if (status_ != EpisodeStatus::kDone) {
        v["scores"] = {{"human", returns_[human_seat_]},
                       {"agent", returns_[1 - human_seat_]}};
      }
    }
    return v;
  }

  std::string id_;
  std::string agent_id_;
  AgentPtr agent_;
  std::uint64_t seed_;
  SessionManager* manager_;
  std::shared_ptr<const DondGame> game_;
  std::mutex mu_;

  int episode_ = 0;
  Player human_seat_ = 0;
  std::unique_ptr<DondState> state_;
  EpisodeStatus status_ = EpisodeStatus::kActive;
  std::int64_t started_ms_ = 0;
  std::int64_t deadline_ms_ = 0;
  std::vector<LoggedAction> actions_;
  std::vector<double> returns_;
  double totals_[2] = {0.0, 0.0};
  nlohmann::json results_ = nlohmann::json::array();
  Rng agent_rng_;
  Rng delay_rng_;
};

SessionManager::SessionManager(ServiceConfig config,
                               std::shared_ptr<const AgentRegistry> agents,
                               ClockMs clock)
    : config_(std::move(config)),
      agents_(std::move(agents)),
      clock_(std::move(clock)) {
  config_.Validate();
  if (agents_->game_spec().ToJson() != config_.game.ToJson()) {
    Fail(ErrorCode::kInvalidArgument,
         "agent registry and service config disagree on the game");
  }
  if (!config_.log_path.empty()) {
    log_ = std::make_unique<EpisodeLog>(config_.log_path);
  }
  std::random_device rd;
  id_salt_ = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

SessionManager::~SessionManager() = default;

nlohmann::json SessionManager::Create(const std::string& agent_id,
                                      std::optional<std::uint64_t> seed) {
  AgentPtr agent = agents_->Create(agent_id);
  if (!seed) {
    std::random_device rd;
    seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(
                    DeriveSeed(id_salt_, counter_.fetch_add(1))));
  const std::string id = buf;
  auto session =
      std::make_shared<Session>(id, agent_id, std::move(agent), *seed, this);
  {
    std::unique_lock<std::shared_mutex> lock(mu_);
    if (static_cast<int>(sessions_.size()) >= config_.max_sessions) {
      Fail(ErrorCode::kResourceExhausted, "session limit of ",
           config_.max_sessions, " reached");
    }
    sessions_.emplace(id, session);
  }
  return {{"session_id", id}, {"view", session->Start()}};
}

std::shared_ptr<Session> SessionManager::Find(const std::string& id) const {
  std::shared_lock<std::shared_mutex> lock(mu_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) {
    Fail(ErrorCode::kNotFound, "unknown session '", id, "'");
  }
  return it->second;
}

nlohmann::json SessionManager::Get(const std::string& session_id) {
  return {{"view", Find(session_id)->Get()}};
}

nlohmann::json SessionManager::Act(const std::string& session_id,
                                   const nlohmann::json& action) {
  return {{"view", Find(session_id)->Act(action)}};
}

int SessionManager::num_sessions() const {
  std::shared_lock<std::shared_mutex> lock(mu_);
  return static_cast<int>(sessions_.size());
}

void SessionManager::Log(const EpisodeLogRecord& record) {
  if (!log_) return;
  try {
    log_->Append(record);
  } catch (const std::exception& e) {
    ++log_failures_;
    spdlog::error("episode log: {}", e.what());
  }
}

}  // namespace sgpsro
