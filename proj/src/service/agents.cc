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

#include "sgpsro/service/agents.h"

#include <utility>

#include "sgpsro/core/error.h"
#include "sgpsro/psro/psro.h"

namespace sgpsro {

nlohmann::json AgentInfo::ToJson() const {
  return {{"id", id}, {"label", label}, {"description", description}};
}

AgentRegistry::AgentRegistry(GameSpec game)
    : spec_(std::move(game)), game_(LoadGame(spec_)) {}

void AgentRegistry::Add(AgentInfo info, Factory factory) {
  if (info.id.empty()) Fail(ErrorCode::kInvalidArgument, "empty agent id");
  if (entries_.count(info.id)) {
    Fail(ErrorCode::kConflict, "agent '", info.id, "' already registered");
  }
  const std::string id = info.id;
  entries_.emplace(id, Entry{std::move(info), std::move(factory)});
}

void AgentRegistry::AddPolicy(AgentInfo info, PolicyPtr policy) {
  const std::string name = info.id;
  Add(std::move(info),
      [name, policy] { return std::make_shared<PolicyAgent>(name, policy); });
}

void AgentRegistry::AddCheckpoint(const std::string& name,
                                  const std::string& dir,
                                  const std::vector<FinalAgentMode>& modes,
                                  const RationalPlanningOptions& options) {
  auto run = Psro::Resume(dir);
  if (run->config().game.ToJson() != spec_.ToJson()) {
    Fail(ErrorCode::kInvalidArgument, "checkpoint ", dir, " is for game ",
         run->config().game.ToJson().dump(), ", the service plays ",
         spec_.ToJson().dump());
  }
  auto catalogs = run->catalogs();
  const MetaSolution solution = run->solution();
  const std::string mss = run->config().meta_solver;
  const int epoch = run->epoch();
  for (FinalAgentMode mode : modes) {
    AgentInfo info;
    info.id = name + ":" + FinalAgentModeName(mode);
    info.label = name + " (" + FinalAgentModeName(mode) + ")";
    info.description = "PSRO " + mss + " after " + std::to_string(epoch) +
                       " epochs, " + FinalAgentModeName(mode) + " play";
    auto game = game_;
    Add(std::move(info), [game, catalogs, solution, mode, options] {
      return std::make_shared<FinalAgent>(game, catalogs, solution, mode,
                                          options);
    });
  }
}

void AgentRegistry::AddBaselines() {
  AddPolicy({"uniform", "Uniform random", "Picks uniformly among legal moves"},
            std::make_shared<UniformRandomPolicy>());
  if (spec_.id == "dond" || spec_.id == "mini_dond") {
    const int total = spec_.dond.total_value;
    AddPolicy(
        {"rule", "Rule based",
         "Asks for a fixed share and accepts fair offers"},
        std::make_shared<DondRulePolicy>((total * 6 + 9) / 10, total / 2));
  }
}

std::vector<AgentInfo> AgentRegistry::List() const {
  std::vector<AgentInfo> out;
  for (const auto& [id, e] : entries_) out.push_back(e.info);
  return out;
}

bool AgentRegistry::Contains(const std::string& id) const {
  return entries_.count(id) > 0;
}

AgentPtr AgentRegistry::Create(const std::string& id) const {
  auto it = entries_.find(id);
  if (it == entries_.end()) {
    Fail(ErrorCode::kNotFound, "unknown agent '", id, "'");
  }
  return it->second.factory();
}

}  // namespace sgpsro
