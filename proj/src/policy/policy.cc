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

#include "sgpsro/policy/policy.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "sgpsro/core/error.h"
#include "sgpsro/game/dond.h"

namespace sgpsro {

Action Policy::SampleAction(const State& state, Player player, Rng& rng) const {
  return sgpsro::SampleAction(GetStatePolicy(state, player), rng);
}

ActionsAndProbs UniformRandomPolicy::GetStatePolicy(const State& state,
                                                    Player player) const {
  return UniformOver(state.LegalActions());
}

ActionsAndProbs ConstantActionPolicy::GetStatePolicy(const State& state,
                                                     Player player) const {
  const auto legal = state.LegalActions();
  for (Action a : preferences_) {
    if (std::binary_search(legal.begin(), legal.end(), a)) return {{a, 1.0}};
  }
  return {{legal.front(), 1.0}};
}

nlohmann::json ConstantActionPolicy::ToJson() const {
  return {{"kind", "constant"}, {"preferences", preferences_}};
}

ActionsAndProbs TabularPolicy::GetStatePolicy(const State& state,
                                              Player player) const {
  const auto it = table_.find(state.InfoStateKeyFor(player));
  if (it == table_.end()) return UniformOver(state.LegalActions());
  return it->second;
}

void TabularPolicy::Set(const InfoStateKey& key, ActionsAndProbs policy) {
  table_[key] = std::move(policy);
}

const ActionsAndProbs* TabularPolicy::Find(const InfoStateKey& key) const {
  const auto it = table_.find(key);
  return it == table_.end() ? nullptr : &it->second;
}

nlohmann::json TabularPolicy::ToJson() const {
  // Sorted keys make the serialized form deterministic.
  std::vector<const InfoStateKey*> keys;
  for (const auto& [k, v] : table_) keys.push_back(&k);
  std::sort(
      keys.begin(), keys.end(),
      [](const InfoStateKey* a, const InfoStateKey* b) { return *a < *b; });
  nlohmann::json table = nlohmann::json::array();
  for (const InfoStateKey* k : keys) {
    nlohmann::json probs = nlohmann::json::array();
    for (const auto& [a, p] : table_.at(*k)) probs.push_back({a, p});
    table.push_back({{"key", k->ToString()}, {"policy", probs}});
  }
  return {{"kind", "tabular"}, {"table", table}};
}

std::shared_ptr<TabularPolicy> TabularPolicy::FromJson(
    const nlohmann::json& j) {
  auto policy = std::make_shared<TabularPolicy>();
  for (const auto& entry : j.at("table")) {
    ActionsAndProbs probs;
    for (const auto& ap : entry.at("policy")) {
      probs.emplace_back(ap.at(0).get<Action>(), ap.at(1).get<double>());
    }
    policy->Set(InfoStateKey::Parse(entry.at("key").get<std::string>()),
                std::move(probs));
  }
  return policy;
}

ActionsAndProbs DondRulePolicy::GetStatePolicy(const State& state,
                                               Player player) const {
  const auto& s = dynamic_cast<const DondState&>(state);
  const auto& game = static_cast<const DondGame&>(s.game());
  const auto& pool = s.instance().pool;
  const auto& values = s.instance().values[player];
  if (!s.moves().empty()) {
    // The standing offer leaves this player pool - kept counts.
    const auto kept = s.StandingSplit();
    int offered = 0;
    for (size_t k = 0; k < pool.size(); ++k) {
      offered += values[k] * (pool[k] - kept[k]);
    }
    if (offered >= accept_threshold_) return {{game.accept_action(), 1.0}};
  }
  Action best = kInvalidAction, fallback = kInvalidAction;
  int best_items = 1 << 30, fallback_value = -1;
  for (Action a : game.ProposalsForPool(pool)) {
    const auto split = game.DecodeSplit(a);
    int value = 0, items = 0;
    for (size_t k = 0; k < pool.size(); ++k) {
      value += values[k] * split[k];
      items += split[k];
    }
    if (value >= target_ && items < best_items) {
      best = a;
      best_items = items;
    }
    if (value > fallback_value) {
      fallback = a;
      fallback_value = value;
    }
  }
  return {{best != kInvalidAction ? best : fallback, 1.0}};
}

nlohmann::json DondRulePolicy::ToJson() const {
  return {{"kind", "dond_rule"},
          {"target", target_},
          {"accept_threshold", accept_threshold_}};
}

PolicyPtr BasicPolicyFromJson(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "uniform") return std::make_shared<UniformRandomPolicy>();
  if (kind == "constant") {
    return std::make_shared<ConstantActionPolicy>(
        j.at("preferences").get<std::vector<Action>>());
  }
  if (kind == "tabular") return TabularPolicy::FromJson(j);
  if (kind == "dond_rule") {
    return std::make_shared<DondRulePolicy>(
        j.at("target").get<int>(), j.at("accept_threshold").get<int>());
  }
  return nullptr;
}

void CheckDistribution(const ActionsAndProbs& policy,
                       const std::vector<Action>& legal, double tol) {
  double total = 0.0;
  for (const auto& [a, p] : policy) {
    if (!std::binary_search(legal.begin(), legal.end(), a)) {
      Fail(ErrorCode::kInternal, "policy puts mass on illegal action ", a);
    }
    if (!(p >= -tol) || !std::isfinite(p)) {
      Fail(ErrorCode::kInternal, "policy has invalid probability ", p);
    }
    total += p;
  }
  if (std::abs(total - 1.0) > tol) {
    Fail(ErrorCode::kInternal, "policy mass sums to ", total);
  }
}

std::vector<std::pair<InfoStateKey, std::vector<Action>>> EnumerateInfoStates(
    const Game& game, Player player, long node_budget) {
  std::map<InfoStateKey, std::vector<Action>> found;
  long visited = 0;
  std::vector<std::unique_ptr<State>> stack;
  stack.push_back(game.NewInitialState());
  while (!stack.empty()) {
    std::unique_ptr<State> s = std::move(stack.back());
    stack.pop_back();
    if (++visited > node_budget) {
      Fail(ErrorCode::kResourceExhausted,
           "information-state enumeration exceeded node budget ", node_budget);
    }
    if (s->IsTerminal()) continue;
    const auto legal = s->LegalActions();
    if (s->CurrentPlayer() == player) {
      found.emplace(s->InfoStateKeyFor(player), legal);
    }
    for (Action a : legal) stack.push_back(s->Child(a));
  }
  return {found.begin(), found.end()};
}

std::shared_ptr<TabularPolicy> RandomTabularPolicy(const Game& game,
                                                   Player player, Rng& rng,
                                                   bool pure,
                                                   long node_budget) {
  auto policy = std::make_shared<TabularPolicy>();
  std::exponential_distribution<double> expo(1.0);
  for (const auto& [key, legal] :
       EnumerateInfoStates(game, player, node_budget)) {
    ActionsAndProbs dist;
    if (pure) {
      std::uniform_int_distribution<size_t> pick(0, legal.size() - 1);
      const size_t chosen = pick(rng);
      for (size_t k = 0; k < legal.size(); ++k) {
        dist.push_back({legal[k], k == chosen ? 1.0 : 0.0});
      }
    } else {
      double total = 0.0;
      for (Action a : legal) {
        dist.push_back({a, expo(rng)});
        total += dist.back().second;
      }
      for (auto& [a, p] : dist) p /= total;
    }
    policy->Set(key, std::move(dist));
  }
  return policy;
}

}  // namespace sgpsro
