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

#ifndef SGPSRO_SERVICE_EPISODE_LOG_H_
#define SGPSRO_SERVICE_EPISODE_LOG_H_

#include <cstdint>
#include <mutex>
#include <string>
#include <vector>

#include "json.hpp"
#include "sgpsro/game/dond.h"
#include "sgpsro/game/registry.h"

namespace sgpsro {

inline constexpr int kEpisodeLogVersion = 1;

struct LoggedAction {
  Player player = 0;       // seat
  std::string type;        // "propose" or "accept"
  std::vector<int> split;  // counts kept by the proposer; empty for accept
};

struct EpisodeLogRecord {
  std::string session_id;
  int episode = 0;
  std::string agent_id;
  GameSpec game;
  DondInstance instance;
  Player human_seat = 0;
  std::vector<LoggedAction> actions;
  std::vector<double> returns;  // by seat
  bool deal = false;
  bool timeout = false;
  std::int64_t started_ms = 0;
  std::int64_t ended_ms = 0;

  // Fixed field order, starting with "v".
  nlohmann::ordered_json ToJson() const;
  static EpisodeLogRecord FromJson(const nlohmann::json& j);
};

// Re-simulates the action list on the logged instance and returns the
// returns by seat; a timeout scores (0, 0). Throws on illegal actions.
std::vector<double> ReplayEpisode(const EpisodeLogRecord& record);
// True when the replay reproduces the logged returns exactly.
bool ReplayMatches(const EpisodeLogRecord& record);

// Line-delimited log, safe to share between threads.
class EpisodeLog {
 public:
  explicit EpisodeLog(std::string path);
  // Appends one line and flushes; throws kIo on failure.
  void Append(const EpisodeLogRecord& record);
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::mutex mu_;
};

struct EpisodeLogContents {
  std::vector<EpisodeLogRecord> records;
  int malformed = 0;  // lines skipped
};

// Malformed lines are skipped with a warning. Throws kIo if the file cannot
// be opened.
EpisodeLogContents ReadEpisodeLog(const std::string& path);

struct EpisodeLogSummary {
  int episodes = 0;
  int deals = 0;
  int timeouts = 0;
  double mean_human = 0.0;
  double mean_agent = 0.0;
  nlohmann::json ToJson() const;
};

// Means over the logged episodes; timed-out episodes count as (0, 0) unless
// `exclude_timeouts`.
EpisodeLogSummary SummarizeEpisodes(
    const std::vector<EpisodeLogRecord>& records, bool exclude_timeouts);

}  // namespace sgpsro

#endif  // SGPSRO_SERVICE_EPISODE_LOG_H_
