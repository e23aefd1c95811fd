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

#ifndef SGPSRO_PSRO_FINAL_AGENT_H_
#define SGPSRO_PSRO_FINAL_AGENT_H_

#include <atomic>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "sgpsro/belief/belief_model.h"
#include "sgpsro/belief/posterior.h"
#include "sgpsro/core/random.h"
#include "sgpsro/egame/normal_form.h"
#include "sgpsro/game/game.h"
#include "sgpsro/policy/policy.h"
#include "sgpsro/search/estimators.h"
#include "sgpsro/search/ismcts.h"

namespace sgpsro {

// Something that plays any seat of a game, one episode at a time.
class Agent {
 public:
  virtual ~Agent() = default;
  virtual std::string name() const = 0;
  // Called before each episode.
  virtual void BeginEpisode(Rng& rng) {}
  // Action for the player to move at `state`.
  virtual Action Act(const State& state, Rng& rng) = 0;
};

using AgentPtr = std::shared_ptr<Agent>;

// Samples from a fixed policy.
class PolicyAgent : public Agent {
 public:
  PolicyAgent(std::string name, PolicyPtr policy)
      : name_(std::move(name)), policy_(std::move(policy)) {}
  std::string name() const override { return name_; }
  Action Act(const State& state, Rng& rng) override {
    return policy_->SampleAction(state, state.CurrentPlayer(), rng);
  }
  const PolicyPtr& policy() const { return policy_; }

 private:
  std::string name_;
  PolicyPtr policy_;
};

enum class FinalAgentMode {
  kNaive,
  kSelfPosterior,
  kAggregate,
  kRationalPlanning
};

// "naive", "self-posterior", "aggregate", "rational-planning".
std::string FinalAgentModeName(FinalAgentMode mode);
FinalAgentMode ParseFinalAgentMode(const std::string& name);

// Pr(pi_k | s, sigma_i) proportional to sigma_i(pi_k) times pi_k's own reach
// of `state` for `player`. Empty when every term is zero.
std::vector<double> SelfPosterior(const State& state, Player player,
                                  const std::vector<PolicyPtr>& catalog,
                                  const std::vector<double>& sigma);

// The behaviour policy equivalent to mixing the catalog with sigma (Kuhn's
// theorem): sum_k Pr(pi_k | s) pi_k(s). Uniform over legal actions where the
// mixture has zero reach.
class AggregatePolicy : public Policy {
 public:
  // catalogs[p] and sigmas[p] for every player.
  AggregatePolicy(std::vector<std::vector<PolicyPtr>> catalogs,
                  std::vector<std::vector<double>> sigmas);
  ActionsAndProbs GetStatePolicy(const State& state,
                                 Player player) const override;
  nlohmann::json ToJson() const override;

 private:
  std::vector<std::vector<PolicyPtr>> catalogs_;
  std::vector<std::vector<double>> sigmas_;
};

struct RationalPlanningOptions {
  SearchConfig search;
  // Exact belief under sigma_{-i} by default; a learned model can be given.
  BeliefModelPtr belief;
  // Leaf values; random rollouts when null.
  std::shared_ptr<const ValueEstimator> value;
  std::shared_ptr<const PolicyEstimator> prior;
  int rollouts = 1;
};

// Final agent of a PSRO run.
//   naive: one oracle sampled from sigma_i per episode, played throughout.
//   self-posterior: at every decision, an oracle is resampled from
//     SelfPosterior and its action distribution is played.
//   aggregate: samples from AggregatePolicy.
//   rational-planning: search at every decision against sigma_{-i}, with the
//     opponent-type posterior updated from the observed history.
class FinalAgent : public Agent {
 public:
  FinalAgent(std::shared_ptr<const Game> game,
             std::vector<std::vector<PolicyPtr>> catalogs,
             MetaSolution solution, FinalAgentMode mode,
             RationalPlanningOptions options = {});

  std::string name() const override;
  void BeginEpisode(Rng& rng) override;
  Action Act(const State& state, Rng& rng) override;

  // Exact action distribution of the self-posterior and aggregate modes.
  ActionsAndProbs ActionDistribution(const State& state) const;
  // Marginal posterior over mixture profiles of sigma_{-player} at `state`
  // (rational planning); the prior when the history is inconsistent.
  std::vector<double> TypePosterior(const State& state) const;
  const OpponentMixture& opponent_mixture(Player player) const {
    return mixtures_[player];
  }
  // Full search result behind the last rational-planning action.
  SearchResult Plan(const State& state) const;

  FinalAgentMode mode() const { return mode_; }
  const std::vector<double>& sigma(Player p) const { return sigmas_[p]; }
  // Decisions where the posterior had no support and a fallback was used.
  int fallbacks() const { return fallbacks_.load(); }

 private:
  const BeliefModel& BeliefFor(const State& state, Player player) const;

  std::shared_ptr<const Game> game_;
  std::vector<std::vector<PolicyPtr>> catalogs_;
  MetaSolution solution_;
  FinalAgentMode mode_;
  RationalPlanningOptions options_;
  std::vector<std::vector<double>> sigmas_;
  std::shared_ptr<AggregatePolicy> aggregate_;
  std::vector<int> episode_choice_;  // naive
  std::vector<OpponentMixture> mixtures_;
  std::vector<BeliefModelPtr> beliefs_, fallback_beliefs_;
  std::shared_ptr<const LeafEvaluator> evaluator_;
  mutable std::atomic<int> fallbacks_{0};
  std::uint64_t decisions_ = 0;
};

}  // namespace sgpsro

#endif  // SGPSRO_PSRO_FINAL_AGENT_H_
