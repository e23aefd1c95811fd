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

#include "sgpsro/service/episode_log.h"

#include <algorithm>
#include <fstream>
#include <utility>

#include "sgpsro/core/error.h"
#include "spdlog/spdlog.h"

namespace sgpsro {

nlohmann::ordered_json EpisodeLogRecord::ToJson() const {
  nlohmann::ordered_json acts = nlohmann::ordered_json::array();
  for (const auto& a : actions) {
    nlohmann::ordered_json x;
    x["player"] = a.player;
    x["type"] = a.type;
    if (a.type == "propose") x["split"] = a.split;
    acts.push_back(std::move(x));
  }
  nlohmann::ordered_json j;
  j["v"] = kEpisodeLogVersion;
  j["session_id"] = session_id;
  j["episode"] = episode;
  j["agent_id"] = agent_id;
  j["game"] = game.ToJson();
  j["instance"] = {{"pool", instance.pool},
                   {"values", {instance.values[0], instance.values[1]}}};
  j["human_seat"] = human_seat;
  j["actions"] = std::move(acts);
  j["returns"] = returns;
  j["deal"] = deal;
  j["timeout"] = timeout;
  j["started_ms"] = started_ms;
  j["ended_ms"] = ended_ms;
  return j;
}

EpisodeLogRecord EpisodeLogRecord::FromJson(const nlohmann::json& j) {
  try {
    if (j.at("v").get<int>() != kEpisodeLogVersion) {
      Fail(ErrorCode::kInvalidArgument, "unsupported episode log version ",
           j.at("v").dump());
    }
    EpisodeLogRecord r;
    r.session_id = j.at("session_id").get<std::string>();
    r.episode = j.at("episode").get<int>();
    r.agent_id = j.at("agent_id").get<std::string>();
    r.game = GameSpec::FromJson(j.at("game"));
    r.instance.pool = j.at("instance").at("pool").get<std::vector<int>>();
    const auto& v = j.at("instance").at("values");
    r.instance.values[0] = v.at(0).get<std::vector<int>>();
    r.instance.values[1] = v.at(1).get<std::vector<int>>();
    r.human_seat = j.at("human_seat").get<int>();
    for (const auto& a : j.at("actions")) {
      LoggedAction la;
      la.player = a.at("player").get<int>();
      la.type = a.at("type").get<std::string>();
      if (a.contains("split")) la.split = a["split"].get<std::vector<int>>();
      r.actions.push_back(std::move(la));
    }
    r.returns = j.at("returns").get<std::vector<double>>();
    r.deal = j.at("deal").get<bool>();
    r.timeout = j.at("timeout").get<bool>();
    r.started_ms = j.at("started_ms").get<std::int64_t>();
    r.ended_ms = j.at("ended_ms").get<std::int64_t>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kInvalidArgument, "malformed episode record: ", e.what());
  }
}

std::vector<double> ReplayEpisode(const EpisodeLogRecord& record) {
  if (record.game.id != "dond" && record.game.id != "mini_dond") {
    Fail(ErrorCode::kInvalidArgument, "episode log game '", record.game.id,
         "' is not Deal or No Deal");
  }
  auto game = std::make_shared<DondGame>(
      record.game.dond, std::vector<DondInstance>{record.instance},
      record.game.id);
  std::unique_ptr<State> state = game->NewStateForInstance(0);
  for (const auto& a : record.actions) {
    if (state->IsTerminal() || state->CurrentPlayer() != a.player) {
      Fail(ErrorCode::kInvalidArgument, "logged action out of turn");
    }
    const Action action =
        a.type == "accept" ? game->accept_action() : game->EncodeSplit(a.split);
    const auto legal = state->LegalActions();
    if (std::find(legal.begin(), legal.end(), action) == legal.end()) {
      Fail(ErrorCode::kInvalidArgument, "logged action is illegal");
    }
    state = state->Child(action);
  }
  if (record.timeout) return {0.0, 0.0};
  if (!state->IsTerminal()) {
    Fail(ErrorCode::kInvalidArgument, "logged episode did not end");
  }
  return state->Returns();
}

bool ReplayMatches(const EpisodeLogRecord& record) {
  try {
    return ReplayEpisode(record) == record.returns;
  } catch (const Error&) {
    return false;
  }
}

EpisodeLog::EpisodeLog(std::string path) : path_(std::move(path)) {}

void EpisodeLog::Append(const EpisodeLogRecord& record) {
  const std::string line = record.ToJson().dump() + "\n";
  std::lock_guard<std::mutex> lock(mu_);
  std::ofstream out(path_, std::ios::app);
  out << line;
  out.flush();
  if (!out) Fail(ErrorCode::kIo, "cannot append to episode log ", path_);
}

EpisodeLogContents ReadEpisodeLog(const std::string& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kIo, "cannot open episode log ", path);
  EpisodeLogContents out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      out.records.push_back(
          EpisodeLogRecord::FromJson(nlohmann::json::parse(line)));
    } catch (const std::exception& e) {
      ++out.malformed;
      spdlog::warn("{}:{}: skipping malformed record: {}", path, lineno,
                   e.what());
    }
  }
  return out;
}

nlohmann::json EpisodeLogSummary::ToJson() const {
  return {{"episodes", episodes},
          {"deals", deals},
          {"timeouts", timeouts},
          {"mean_human", mean_human},
          {"mean_agent", mean_agent}};
}

EpisodeLogSummary SummarizeEpisodes(
    const std::vector<EpisodeLogRecord>& records, bool exclude_timeouts) {
  EpisodeLogSummary s;
  for (const auto& r : records) {
    if (r.timeout) {
      ++s.timeouts;
      if (exclude_timeouts) continue;
    }
    ++s.episodes;
    s.deals += r.deal;
    s.mean_human += r.returns[r.human_seat];
    s.mean_agent += r.returns[1 - r.human_seat];
  }
  if (s.episodes > 0) {
    s.mean_human /= s.episodes;
    s.mean_agent /= s.episodes;
  }
  return s;
}

}  // namespace sgpsro
