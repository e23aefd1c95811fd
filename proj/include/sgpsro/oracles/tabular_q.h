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

#ifndef SGPSRO_ORACLES_TABULAR_Q_H_
#define SGPSRO_ORACLES_TABULAR_Q_H_

#include <cstdint>
#include <memory>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "sgpsro/belief/posterior.h"
#include "sgpsro/core/fifo_buffer.h"
#include "sgpsro/core/info_state_key.h"
#include "sgpsro/core/random.h"
#include "sgpsro/game/game.h"
#include "sgpsro/policy/policy.h"

namespace sgpsro {

struct TabularQConfig {
  int episodes = 10000;
  double learning_rate = 0.1;
  // Linear decay from epsilon_start to epsilon_end over `episodes`.
  double epsilon_start = 0.2;
  double epsilon_end = 0.02;
  // Replayed transitions per episode drawn from a FIFO buffer of
  // `buffer_capacity`; 0 disables replay.
  int replay_per_episode = 0;
  int buffer_capacity = kDefaultBufferCapacity;
  std::uint64_t seed = 0;

  void Validate() const;
  static TabularQConfig FromJson(const nlohmann::json& j);
};

// One of `player`'s decisions and what followed it: the next own information
// state, or a terminal with `reward`.
struct QTransition {
  InfoStateKey key;
  Action action = 0;
  double reward = 0.0;
  bool terminal = true;
  InfoStateKey next_key;
  std::vector<Action> next_legal;
};

// Epsilon-greedy Q-learning for `player` against opponent profiles sampled
// from the mixture once per episode. Undiscounted; unseen entries are 0.
class TabularQLearner {
 public:
  TabularQLearner(std::shared_ptr<const Game> game, Player player,
                  OpponentMixture mixture, TabularQConfig config);

  // Runs `episodes` more episodes; epsilon follows the schedule by the total
  // episode count.
  void Train(int episodes);
  void Train() { Train(config_.episodes); }

  double Epsilon() const;
  double Q(const InfoStateKey& key, Action action) const;
  void SetQ(const InfoStateKey& key, const std::vector<Action>& legal,
            Action action, double value);
  // Argmax of Q over legal actions, ties to the lowest id.
  Action Greedy(const InfoStateKey& key) const;

  // Deterministic greedy policy on every visited information state.
  std::shared_ptr<TabularPolicy> GreedyPolicy() const;

  int episodes_done() const { return episodes_done_; }
  size_t num_states() const { return table_.size(); }

 private:
  struct Row {
    std::vector<Action> legal;
    std::vector<double> q;  // aligned with legal
  };
  void Apply(const QTransition& t);
  Row& Touch(const InfoStateKey& key, const std::vector<Action>& legal);
  double MaxQ(const InfoStateKey& key, const std::vector<Action>& legal) const;

  std::shared_ptr<const Game> game_;
  Player player_;
  OpponentMixture mixture_;
  TabularQConfig config_;
  std::unordered_map<InfoStateKey, Row, InfoStateKeyHash> table_;
  FifoBuffer<QTransition> replay_;
  int episodes_done_ = 0;
};

std::shared_ptr<TabularPolicy> TabularQResponse(
    std::shared_ptr<const Game> game, Player player,
    const OpponentMixture& mixture, const TabularQConfig& config);

}  // namespace sgpsro

#endif  // SGPSRO_ORACLES_TABULAR_Q_H_
