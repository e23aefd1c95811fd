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

#ifndef SGPSRO_SERVICE_AGENTS_H_
#define SGPSRO_SERVICE_AGENTS_H_

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "sgpsro/game/registry.h"
#include "sgpsro/psro/final_agent.h"

namespace sgpsro {

struct AgentInfo {
  std::string id;
  std::string label;
  std::string description;
  nlohmann::json ToJson() const;
};

// Agents the play service can seat. Every session gets its own instance, so
// agents with per-episode state never leak between sessions.
class AgentRegistry {
 public:
  using Factory = std::function<AgentPtr()>;

  explicit AgentRegistry(GameSpec game);

  void Add(AgentInfo info, Factory factory);
  void AddPolicy(AgentInfo info, PolicyPtr policy);
  // Registers "<name>:<mode>" for each mode from a PSRO checkpoint. The
  // checkpoint must be for the registry's game.
  void AddCheckpoint(const std::string& name, const std::string& dir,
                     const std::vector<FinalAgentMode>& modes,
                     const RationalPlanningOptions& options = {});
  // "uniform" and "rule" baselines.
  void AddBaselines();

  std::vector<AgentInfo> List() const;
  bool Contains(const std::string& id) const;
  // Throws kNotFound for unknown ids.
  AgentPtr Create(const std::string& id) const;

  const GameSpec& game_spec() const { return spec_; }
  const std::shared_ptr<const Game>& game() const { return game_; }

 private:
  struct Entry {
    AgentInfo info;
    Factory factory;
  };
  GameSpec spec_;
  std::shared_ptr<const Game> game_;
  std::map<std::string, Entry> entries_;
};

}  // namespace sgpsro

#endif  // SGPSRO_SERVICE_AGENTS_H_
