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

#ifndef SGPSRO_SEARCH_ESTIMATORS_H_
#define SGPSRO_SEARCH_ESTIMATORS_H_

#include <cstdint>
#include <memory>
#include <unordered_map>
#include <utility>
#include <vector>

#include "json.hpp"
#include "sgpsro/belief/posterior.h"
#include "sgpsro/core/info_state_key.h"
#include "sgpsro/core/random.h"
#include "sgpsro/game/game.h"

namespace sgpsro {

enum class BackpropType { kIR, kIE, kSW, kNBS };

// "IR", "IE", "SW", "NBS" (case-insensitive on parse).
std::string BackpropTypeName(BackpropType type);
BackpropType ParseBackpropType(const std::string& name);

// The scalar a searcher maximizes: IR r_i; IE r_i - 0.5 max(r_-i - r_i, 0);
// SW r_i + r_-i; NBS r_i r_-i. IE, SW and NBS need exactly two players.
double BackpropValue(const std::vector<double>& returns, Player searcher,
                     BackpropType type);

// Adam moments of one parameter.
struct AdamSlot {
  double m = 0.0;
  double v = 0.0;
  std::int64_t t = 0;
};

// Lazy Adam: only parameters with a gradient in this step move, each with
// its own bias-correction count.
double AdamDelta(AdamSlot& slot, double grad, double learning_rate);

// v: information state -> scalar, defaulting to 0 for unseen states.
class ValueEstimator {
 public:
  virtual ~ValueEstimator() = default;
  virtual double Value(const InfoStateKey& key) const = 0;
};

// p: information state -> distribution over the given legal actions.
class PolicyEstimator {
 public:
  virtual ~PolicyEstimator() = default;
  virtual ActionsAndProbs Prior(const InfoStateKey& key,
                                const std::vector<Action>& legal) const = 0;
};

struct ValueSample {
  InfoStateKey key;
  double target;
};

struct PolicySample {
  InfoStateKey key;
  ActionsAndProbs target;  // pi*, normalized
};

// Loss: mean (r - v)^2 over the batch plus c1 times the squared norm of the
// entries the batch touches.
class TabularValueEstimator : public ValueEstimator {
 public:
  double Value(const InfoStateKey& key) const override;

  double Loss(const std::vector<ValueSample>& batch, double l2) const;
  void Update(const std::vector<ValueSample>& batch, double learning_rate,
              double l2);

  size_t size() const { return table_.size(); }
  std::uint64_t Checksum() const;

  nlohmann::json ToJson() const;
  static std::shared_ptr<TabularValueEstimator> FromJson(
      const nlohmann::json& j);

 private:
  struct Entry {
    double value = 0.0;
    AdamSlot adam;
  };
  std::unordered_map<InfoStateKey, Entry, InfoStateKeyHash> table_;
};

// Softmax over per-action logits. Loss: mean cross-entropy -pi*^T log p plus
// c1 times the squared norm of the touched logits. Unseen states and unseen
// actions have logit 0.
class TabularPolicyEstimator : public PolicyEstimator {
 public:
  ActionsAndProbs Prior(const InfoStateKey& key,
                        const std::vector<Action>& legal) const override;

  double Loss(const std::vector<PolicySample>& batch, double l2) const;
  void Update(const std::vector<PolicySample>& batch, double learning_rate,
              double l2);

  size_t size() const { return table_.size(); }
  std::uint64_t Checksum() const;

  nlohmann::json ToJson() const;
  static std::shared_ptr<TabularPolicyEstimator> FromJson(
      const nlohmann::json& j);

 private:
  struct Logit {
    double value = 0.0;
    AdamSlot adam;
  };
  // Logits keyed by action, ordered by action id.
  using Row = std::vector<std::pair<Action, Logit>>;
  ActionsAndProbs Softmax(const Row* row,
                          const std::vector<Action>& actions) const;
  std::unordered_map<InfoStateKey, Row, InfoStateKeyHash> table_;
};

// Scores a newly expanded searcher node. `h` is the determinized world state
// at the node and `opponents` the sampled opponent profile.
class LeafEvaluator {
 public:
  virtual ~LeafEvaluator() = default;
  virtual double Evaluate(const State& h, Player searcher,
                          const OpponentProfile& opponents, BackpropType type,
                          Rng& rng) const = 0;
};

// v(s_i(h)); a null estimator scores every leaf 0.
class ValueLeafEvaluator : public LeafEvaluator {
 public:
  explicit ValueLeafEvaluator(std::shared_ptr<const ValueEstimator> v)
      : v_(std::move(v)) {}
  double Evaluate(const State& h, Player searcher,
                  const OpponentProfile& opponents, BackpropType type,
                  Rng& rng) const override;

 private:
  std::shared_ptr<const ValueEstimator> v_;
};

// Plays `h` out with `rollout` for the searcher (uniform when null), the
// sampled opponents, and true chance; averages `rollouts` playouts.
class RolloutLeafEvaluator : public LeafEvaluator {
 public:
  explicit RolloutLeafEvaluator(
      int rollouts = 1, std::shared_ptr<const Policy> rollout = nullptr);
  double Evaluate(const State& h, Player searcher,
                  const OpponentProfile& opponents, BackpropType type,
                  Rng& rng) const override;

 private:
  int rollouts_;
  std::shared_ptr<const Policy> rollout_;
};

}  // namespace sgpsro

#endif  // SGPSRO_SEARCH_ESTIMATORS_H_
