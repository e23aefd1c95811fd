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

#ifndef SGPSRO_BELIEF_LEARNED_BELIEF_H_
#define SGPSRO_BELIEF_LEARNED_BELIEF_H_

#include <cstdint>
#include <deque>
#include <memory>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "json.hpp"
#include "sgpsro/belief/belief_model.h"
#include "sgpsro/core/fifo_buffer.h"
#include "sgpsro/game/dond.h"

namespace sgpsro {

// A training pair for the generative model: the searcher's key and the true
// history behind it.
struct GenEntry {
  InfoStateKey key;
  std::vector<Action> history;
};
using GenBuffer = FifoBuffer<GenEntry>;

// Index of the l2-nearest row of `feasible` to `raw`; ties go to the
// lexicographically smallest row. Throws kInvalidArgument if `feasible` is
// empty or a row's length differs from raw's.
int NearestFeasible(const std::vector<double>& raw,
                    const std::vector<std::vector<int>>& feasible);

// Nearest vector among all v >= 0 with v . pool == total.
std::vector<int> ProjectFeasibleValues(const std::vector<double>& raw,
                                       const std::vector<int>& pool, int total);

// Nearest opponent value vector among the database instances that match the
// searcher's pool and own values; these already satisfy the instance
// constraints.
std::vector<int> ProjectFeasibleValues(const std::vector<double>& raw,
                                       const DondGame& game,
                                       const std::vector<int>& pool,
                                       const std::vector<int>& own_values,
                                       Player searcher);

struct LearnedBeliefConfig {
  double learning_rate = 1e-3;
  double l2 = 1e-3;  // c_2
  int batch_size = 64;
  // Mix per-context counts into the head distributions.
  bool context_counts = true;
  std::uint64_t seed = 0;

  void Validate() const;
};

// Categorical generative model for Deal or No Deal: one head per item type
// predicting the opponent's value of that item (classes 0..total). Each head
// is a linear softmax over features of the searcher's observation (own
// values, pool, last proposals, histogram of opponent proposals, turn). With
// context counts enabled, a head's distribution in a context seen n times is
// (counts + C q) / (n + C), where q is the softmax and C the number of
// classes, i.e. Laplace smoothing towards the softmax. Heads are sampled
// independently and the result is projected onto the feasible value vectors.
class LearnedDondBelief : public BeliefModel {
 public:
  LearnedDondBelief(std::shared_ptr<const Game> game,
                    LearnedBeliefConfig config = {});

  BeliefKind kind() const override { return BeliefKind::kLearned; }
  std::unique_ptr<State> Sample(const State& state, Player searcher,
                                Rng& rng) const override;
  std::vector<WorldBelief> Distribution(const State& state,
                                        Player searcher) const override;

  // Brings the context counts in line with `buffer` and takes `steps`
  // optimizer steps on batches drawn from it. No-op on an empty buffer.
  void Fit(const GenBuffer& buffer, int steps);
  // One optimizer step on the given buffer rows.
  void Step(const GenBuffer& buffer, const std::vector<int>& rows);
  // Mean per-head cross-entropy of the softmax heads on `rows`, plus the L2
  // penalty.
  double Loss(const GenBuffer& buffer, const std::vector<int>& rows) const;

  // Per-head class probabilities at `state` for `searcher`.
  std::vector<std::vector<double>> HeadProbabilities(const State& state,
                                                     Player searcher) const;

  int num_heads() const { return num_heads_; }
  int num_classes() const { return num_classes_; }
  int num_features() const { return num_features_; }
  std::int64_t steps_taken() const { return steps_taken_; }
  const LearnedBeliefConfig& config() const { return config_; }

  // Versioned checkpoint: {"version": 1, "kind": "learned_dond_belief",
  // "config", "steps", "weights", "adam_m", "adam_v", "counts"}.
  nlohmann::json ToJson() const;
  static std::shared_ptr<LearnedDondBelief> FromJson(
      std::shared_ptr<const Game> game, const nlohmann::json& j);

 private:
  using SparseFeatures = std::vector<std::pair<int, double>>;
  struct ContextCounts {
    int n = 0;
    std::vector<std::vector<int>> per_head;
  };
  struct Decoded {
    std::string context;
    SparseFeatures features;
    std::vector<int> target;
  };

  SparseFeatures Features(const DondInstance& inst,
                          const std::vector<Action>& moves,
                          Player searcher) const;
  Decoded Decode(const GenEntry& entry) const;
  // Decode with a fast path for the buffer the counts are synced with.
  const Decoded& Row(const GenBuffer& buffer, int row, Decoded* scratch) const;
  std::vector<std::vector<double>> Softmax(const SparseFeatures& x) const;
  std::vector<std::vector<double>> Mix(
      const std::string& context, std::vector<std::vector<double>> q) const;
  void SyncCounts(const GenBuffer& buffer);
  void AddCount(const Decoded& d, int delta);
  std::vector<std::vector<int>> Candidates(const DondState& s, Player searcher,
                                           std::vector<int>* indices) const;
  std::unique_ptr<State> Rebuild(const DondState& s, int instance) const;

  const DondGame& dond_;
  LearnedBeliefConfig config_;
  int num_heads_;
  int num_classes_;
  int num_features_;
  // weights_[(h * C + c) * F + f]
  std::vector<double> weights_, adam_m_, adam_v_;
  std::int64_t steps_taken_ = 0;

  std::unordered_map<std::string, ContextCounts> counts_;
  // Entries currently reflected in counts_, with sequence numbers.
  std::deque<std::pair<std::int64_t, Decoded>> counted_;
  std::int64_t synced_until_ = 0;
  const GenBuffer* synced_buffer_ = nullptr;
};

// Builds a model of the given kind. `mixture` is used by the exact model.
BeliefModelPtr MakeBeliefModel(BeliefKind kind,
                               std::shared_ptr<const Game> game,
                               const OpponentMixture& mixture,
                               const LearnedBeliefConfig& learned = {});

}  // namespace sgpsro

#endif  // SGPSRO_BELIEF_LEARNED_BELIEF_H_
