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

#ifndef SGPSRO_BELIEF_BELIEF_MODEL_H_
#define SGPSRO_BELIEF_BELIEF_MODEL_H_

#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "sgpsro/belief/posterior.h"
#include "sgpsro/core/info_state_key.h"
#include "sgpsro/core/random.h"
#include "sgpsro/game/game.h"

namespace sgpsro {

enum class BeliefKind {
  kExact,
  kUniform,
  kCheat,
  kFixedFirst,
  kFixedLast,
  kLearned
};

// "exact", "uniform", "cheat", "fixed-first", "fixed-last", "learned".
std::string BeliefKindName(BeliefKind kind);
BeliefKind ParseBeliefKind(const std::string& name);

// Samples world states for a searching player. Every sample is a history
// whose information-state key for the searcher equals that of the query
// state. Only the cheat model looks at the hidden part of the query state.
// Sample and Distribution may be called concurrently.
class BeliefModel {
 public:
  explicit BeliefModel(std::shared_ptr<const Game> game)
      : game_(std::move(game)) {}
  virtual ~BeliefModel() = default;

  virtual BeliefKind kind() const = 0;
  std::string name() const { return BeliefKindName(kind()); }
  bool reads_hidden_state() const { return kind() == BeliefKind::kCheat; }

  virtual std::unique_ptr<State> Sample(const State& state, Player searcher,
                                        Rng& rng) const = 0;

  // The full sampling distribution, one entry per consistent history it can
  // produce (possibly with probability 0).
  virtual std::vector<WorldBelief> Distribution(const State& state,
                                                Player searcher) const = 0;

  const Game& game() const { return *game_; }

 protected:
  std::shared_ptr<const Game> game_;
};

using BeliefModelPtr = std::shared_ptr<BeliefModel>;

// Shared machinery of the models whose distribution is a function of the
// searcher's key: computes it once per key and caches action sequences.
class EnumeratingBelief : public BeliefModel {
 public:
  EnumeratingBelief(std::shared_ptr<const Game> game, long node_budget)
      : BeliefModel(std::move(game)), node_budget_(node_budget) {}

  std::unique_ptr<State> Sample(const State& state, Player searcher,
                                Rng& rng) const override;
  std::vector<WorldBelief> Distribution(const State& state,
                                        Player searcher) const override;

 protected:
  // Probabilities over `histories`, which are the consistent histories in
  // enumeration order. Must not be all zero.
  virtual std::vector<double> Weigh(
      const std::vector<WeightedHistory>& histories, Player searcher) const = 0;

  long node_budget_;

 private:
  struct Entry {
    std::vector<std::vector<Action>> histories;
    std::vector<double> probs;
  };
  std::shared_ptr<const Entry> Lookup(const State& state,
                                      Player searcher) const;

  mutable std::shared_mutex mu_;
  mutable std::unordered_map<InfoStateKey, std::shared_ptr<const Entry>,
                             InfoStateKeyHash>
      cache_;
};

// Pr(h | s, sigma_{-i}) via ExactPosterior.
class ExactBelief : public EnumeratingBelief {
 public:
  ExactBelief(std::shared_ptr<const Game> game, OpponentMixture mixture,
              long node_budget = 1'000'000);
  BeliefKind kind() const override { return BeliefKind::kExact; }
  const OpponentMixture& mixture() const { return mixture_; }

 protected:
  std::vector<double> Weigh(const std::vector<WeightedHistory>& histories,
                            Player searcher) const override;

 private:
  OpponentMixture mixture_;
};

// Uniform over the consistent histories, ignoring chance and opponents.
class UniformBelief : public EnumeratingBelief {
 public:
  explicit UniformBelief(std::shared_ptr<const Game> game,
                         long node_budget = 1'000'000)
      : EnumeratingBelief(std::move(game), node_budget) {}
  BeliefKind kind() const override { return BeliefKind::kUniform; }

 protected:
  std::vector<double> Weigh(const std::vector<WeightedHistory>& histories,
                            Player searcher) const override;
};

// Always the first (or last) consistent history in enumeration order, which
// for Deal or No Deal is database order.
class FixedBelief : public EnumeratingBelief {
 public:
  FixedBelief(std::shared_ptr<const Game> game, bool last,
              long node_budget = 1'000'000)
      : EnumeratingBelief(std::move(game), node_budget), last_(last) {}
  BeliefKind kind() const override {
    return last_ ? BeliefKind::kFixedLast : BeliefKind::kFixedFirst;
  }

 protected:
  std::vector<double> Weigh(const std::vector<WeightedHistory>& histories,
                            Player searcher) const override;

 private:
  bool last_;
};

// Returns the true state. For evaluation harnesses only.
class CheatBelief : public BeliefModel {
 public:
  explicit CheatBelief(std::shared_ptr<const Game> game)
      : BeliefModel(std::move(game)) {}
  BeliefKind kind() const override { return BeliefKind::kCheat; }
  std::unique_ptr<State> Sample(const State& state, Player searcher,
                                Rng& rng) const override;
  std::vector<WorldBelief> Distribution(const State& state,
                                        Player searcher) const override;
};

}  // namespace sgpsro

#endif  // SGPSRO_BELIEF_BELIEF_MODEL_H_
