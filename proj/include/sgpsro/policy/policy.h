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

#ifndef SGPSRO_POLICY_POLICY_H_
#define SGPSRO_POLICY_POLICY_H_

#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "sgpsro/core/info_state_key.h"
#include "sgpsro/core/random.h"
#include "sgpsro/core/types.h"
#include "sgpsro/game/game.h"

namespace sgpsro {

// A behavior policy. GetStatePolicy may only depend on what `player` observes
// at `state` (its information state); implementations receive the state so
// they can read their own private observation and the public actions.
class Policy {
 public:
  virtual ~Policy() = default;

  // Distribution over state.LegalActions(); `player` is the player to act.
  virtual ActionsAndProbs GetStatePolicy(const State& state,
                                         Player player) const = 0;

  // Serialized form with a "kind" discriminator.
  virtual nlohmann::json ToJson() const = 0;

  virtual std::string Describe() const { return ToJson().at("kind"); }

  double ActionProbability(const State& state, Player player,
                           Action action) const {
    return GetProb(GetStatePolicy(state, player), action);
  }
  Action SampleAction(const State& state, Player player, Rng& rng) const;
};

using PolicyPtr = std::shared_ptr<const Policy>;

class UniformRandomPolicy : public Policy {
 public:
  ActionsAndProbs GetStatePolicy(const State& state,
                                 Player player) const override;
  nlohmann::json ToJson() const override { return {{"kind", "uniform"}}; }
};

// Plays the first legal action in `preferences`; falls back to the lowest
// legal action.
class ConstantActionPolicy : public Policy {
 public:
  explicit ConstantActionPolicy(std::vector<Action> preferences)
      : preferences_(std::move(preferences)) {}
  ActionsAndProbs GetStatePolicy(const State& state,
                                 Player player) const override;
  nlohmann::json ToJson() const override;

 private:
  std::vector<Action> preferences_;
};

// Explicit distributions per information state; unlisted states are played
// uniformly at random.
class TabularPolicy : public Policy {
 public:
  TabularPolicy() = default;

  ActionsAndProbs GetStatePolicy(const State& state,
                                 Player player) const override;
  nlohmann::json ToJson() const override;

  void Set(const InfoStateKey& key, ActionsAndProbs policy);
  const ActionsAndProbs* Find(const InfoStateKey& key) const;
  size_t size() const { return table_.size(); }
  const std::unordered_map<InfoStateKey, ActionsAndProbs, InfoStateKeyHash>&
  table() const {
    return table_;
  }

  static std::shared_ptr<TabularPolicy> FromJson(const nlohmann::json& j);

 private:
  std::unordered_map<InfoStateKey, ActionsAndProbs, InfoStateKeyHash> table_;
};

// Rule-based Deal or No Deal negotiator. It proposes the split that keeps
// the fewest items among those worth at least `target` to it (ties: lowest
// action id; if none reach `target`, it keeps the most valuable split), and
// accepts a standing offer worth at least `accept_threshold`. It never
// concedes over time, so its proposals reveal information about its values.
class DondRulePolicy : public Policy {
 public:
  DondRulePolicy(int target, int accept_threshold)
      : target_(target), accept_threshold_(accept_threshold) {}

  ActionsAndProbs GetStatePolicy(const State& state,
                                 Player player) const override;
  nlohmann::json ToJson() const override;

  int target() const { return target_; }
  int accept_threshold() const { return accept_threshold_; }

 private:
  int target_;
  int accept_threshold_;
};

// Every information state of `player` with its legal actions, by walking
// the whole tree; ordered by key. Throws kResourceExhausted past
// `node_budget` nodes.
std::vector<std::pair<InfoStateKey, std::vector<Action>>> EnumerateInfoStates(
    const Game& game, Player player, long node_budget = 10'000'000);

// A policy for `player` with an independent random distribution at every
// information state: flat Dirichlet draws, or a uniformly chosen single
// action when `pure`.
std::shared_ptr<TabularPolicy> RandomTabularPolicy(
    const Game& game, Player player, Rng& rng, bool pure = false,
    long node_budget = 10'000'000);

// Reconstructs the basic policy kinds above; returns nullptr for kinds
// defined in other modules.
PolicyPtr BasicPolicyFromJson(const nlohmann::json& j);

// Validates that `policy` is a distribution over exactly a subset of
// `legal`, summing to one within `tol`.
void CheckDistribution(const ActionsAndProbs& policy,
                       const std::vector<Action>& legal, double tol = 1e-9);

}  // namespace sgpsro

#endif  // SGPSRO_POLICY_POLICY_H_
