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

#ifndef SGPSRO_ORACLES_ABR_H_
#define SGPSRO_ORACLES_ABR_H_

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "sgpsro/belief/belief_model.h"
#include "sgpsro/belief/learned_belief.h"
#include "sgpsro/belief/posterior.h"
#include "sgpsro/core/fifo_buffer.h"
#include "sgpsro/game/game.h"
#include "sgpsro/policy/policy.h"
#include "sgpsro/search/estimators.h"
#include "sgpsro/search/ismcts.h"

namespace sgpsro {

enum class ReturnedPolicy { kSearch, kPolicyEstimator, kGreedyValue };

// "search", "policy", "greedy_value".
std::string ReturnedPolicyName(ReturnedPolicy mode);
ReturnedPolicy ParseReturnedPolicy(const std::string& name);

// 2e-3 for IR and IE, 1e-3 for SW, 5e-4 for NBS.
double DefaultAbrLearningRate(BackpropType type);

struct AbrConfig {
  int num_episodes = 10000;
  std::optional<double> learning_rate;  // DefaultAbrLearningRate when unset
  double c1 = 1e-3;                     // L2 on v and p
  double c2 = 1e-3;                     // L2 on g
  int batch_size = 64;
  int buffer_capacity = kDefaultBufferCapacity;
  int target_delay = 200;
  int updates_per_episode = 1;
  SearchConfig search;
  // Learned for Deal or No Deal, exact otherwise. The cheat model is
  // rejected.
  std::optional<BeliefKind> belief;
  ReturnedPolicy returned = ReturnedPolicy::kGreedyValue;
  // Belief samples per action in the greedy-value policy.
  int greedy_samples = 32;
  std::uint64_t seed = 0;

  double lr() const {
    return learning_rate ? *learning_rate
                         : DefaultAbrLearningRate(search.backprop);
  }
  BeliefKind BeliefFor(const Game& game) const;
  void Validate() const;
  nlohmann::json ToJson() const;
  static AbrConfig FromJson(const nlohmann::json& j);
};

// v, p and g with the delayed copies used inside search.
struct LearnerBundle {
  std::shared_ptr<TabularValueEstimator> v, v_delayed;
  std::shared_ptr<TabularPolicyEstimator> p, p_delayed;
  BeliefModelPtr g, g_delayed;

  void RefreshDelayed();
  std::uint64_t Checksum() const;
  std::uint64_t DelayedChecksum() const;
};

struct TrainBuffers {
  explicit TrainBuffers(int capacity = kDefaultBufferCapacity)
      : value(capacity), policy(capacity), gen(capacity) {}
  FifoBuffer<ValueSample> value;
  FifoBuffer<PolicySample> policy;
  GenBuffer gen;
};

// One optimizer step for each of v and p on batches drawn with `rng`, and one
// Fit step for a learned g. Empty buffers are skipped.
void UpdateLearners(LearnerBundle& bundle, const TrainBuffers& buffers,
                    const AbrConfig& config, Rng& rng);

// Episode-by-episode ABR training of `player` against the mixture.
class AbrTrainer {
 public:
  AbrTrainer(std::shared_ptr<const Game> game, Player player,
             OpponentMixture mixture, AbrConfig config);

  // Plays one episode with search at every decision of the player, fills the
  // buffers, updates the learners and refreshes the delayed copies every
  // target_delay episodes. Returns the player's return.
  double RunEpisode();
  void Train(int episodes);
  void Train() { Train(config_.num_episodes); }

  PolicyPtr FinalPolicy() const;

  const LearnerBundle& learners() const { return bundle_; }
  const TrainBuffers& buffers() const { return buffers_; }
  int episodes_done() const { return episodes_done_; }
  int decisions() const { return decisions_; }
  const AbrConfig& config() const { return config_; }

 private:
  std::shared_ptr<const Game> game_;
  Player player_;
  OpponentMixture mixture_;
  AbrConfig config_;
  LearnerBundle bundle_;
  TrainBuffers buffers_;
  int episodes_done_ = 0;
  int decisions_ = 0;
};

struct AbrResult {
  LearnerBundle learners;
  PolicyPtr policy;
};

AbrResult AbrTrain(std::shared_ptr<const Game> game, Player player,
                   const OpponentMixture& mixture, const AbrConfig& config);

// Shared state of the search-based returned policies.
struct AbrPolicyParts {
  std::shared_ptr<const Game> game;
  Player player = 0;
  OpponentMixture mixture;
  BeliefModelPtr belief;
  std::shared_ptr<const TabularValueEstimator> v;
  std::shared_ptr<const TabularPolicyEstimator> p;
  AbrConfig config;
};

// Greedy towards v: for each legal action, the mean over belief samples of
// the value after playing it and letting opponents (sampled from the type
// posterior) and chance move until the player's next decision, where v is
// read, or the end. Picks the argmax, ties to the lowest id. Results are
// cached per information state; sampling is seeded by the key.
class GreedyValuePolicy : public Policy {
 public:
  explicit GreedyValuePolicy(AbrPolicyParts parts);
  ActionsAndProbs GetStatePolicy(const State& state,
                                 Player player) const override;
  nlohmann::json ToJson() const override;
  // Per-action estimates in legal order.
  std::vector<double> ActionValues(const State& state) const;
  const AbrPolicyParts& parts() const { return parts_; }

 private:
  AbrPolicyParts parts_;
  mutable std::mutex mu_;
  mutable std::unordered_map<InfoStateKey, ActionsAndProbs, InfoStateKeyHash>
      cache_;
};

// Visit distribution of a fresh search with v as leaf evaluator and p as
// prior, seeded by the key and cached per information state.
class SearchPolicy : public Policy {
 public:
  explicit SearchPolicy(AbrPolicyParts parts);
  ActionsAndProbs GetStatePolicy(const State& state,
                                 Player player) const override;
  nlohmann::json ToJson() const override;

 private:
  AbrPolicyParts parts_;
  std::shared_ptr<const LeafEvaluator> evaluator_;
  mutable std::mutex mu_;
  mutable std::unordered_map<InfoStateKey, ActionsAndProbs, InfoStateKeyHash>
      cache_;
};

// The policy estimator's distribution.
class PolicyEstimatorPolicy : public Policy {
 public:
  explicit PolicyEstimatorPolicy(
      std::shared_ptr<const TabularPolicyEstimator> p)
      : p_(std::move(p)) {}
  ActionsAndProbs GetStatePolicy(const State& state,
                                 Player player) const override;
  nlohmann::json ToJson() const override;

 private:
  std::shared_ptr<const TabularPolicyEstimator> p_;
};

// Loads "abr_greedy_value", "abr_search" and "abr_policy_estimator";
// nullptr for other kinds.
PolicyPtr AbrPolicyFromJson(const nlohmann::json& j,
                            std::shared_ptr<const Game> game,
                            const PolicyResolver& resolver);

}  // namespace sgpsro

#endif  // SGPSRO_ORACLES_ABR_H_
