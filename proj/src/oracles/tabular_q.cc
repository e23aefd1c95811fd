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

#include "sgpsro/oracles/tabular_q.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "sgpsro/core/error.h"

namespace sgpsro {

void TabularQConfig::Validate() const {
  if (episodes < 1) {
    Fail(ErrorCode::kInvalidArgument, "episodes must be >= 1, got ", episodes);
  }
  if (!(learning_rate > 0.0) || learning_rate > 1.0) {
    Fail(ErrorCode::kInvalidArgument, "learning_rate must be in (0, 1]");
  }
  for (double e : {epsilon_start, epsilon_end}) {
    if (!(e >= 0.0 && e <= 1.0)) {
      Fail(ErrorCode::kInvalidArgument, "epsilon must be in [0, 1]");
    }
  }
  if (replay_per_episode < 0) {
    Fail(ErrorCode::kInvalidArgument, "replay_per_episode must be >= 0");
  }
  if (buffer_capacity < 1) {
    Fail(ErrorCode::kInvalidArgument, "buffer_capacity must be >= 1");
  }
}

TabularQConfig TabularQConfig::FromJson(const nlohmann::json& j) {
  TabularQConfig c;
  if (j.is_null()) return c;
  for (const auto& [key, value] : j.items()) {
    if (key == "episodes") {
      c.episodes = value.get<int>();
    } else if (key == "learning_rate") {
      c.learning_rate = value.get<double>();
    } else if (key == "epsilon_start") {
      c.epsilon_start = value.get<double>();
    } else if (key == "epsilon_end") {
      c.epsilon_end = value.get<double>();
    } else if (key == "replay_per_episode") {
      c.replay_per_episode = value.get<int>();
    } else if (key == "buffer_capacity") {
      c.buffer_capacity = value.get<int>();
    } else if (key == "seed") {
      c.seed = value.get<std::uint64_t>();
    } else {
      Fail(ErrorCode::kInvalidArgument, "unknown tabular_q option '", key, "'");
    }
  }
  c.Validate();
  return c;
}

TabularQLearner::TabularQLearner(std::shared_ptr<const Game> game,
                                 Player player, OpponentMixture mixture,
                                 TabularQConfig config)
    : game_(std::move(game)),
      player_(player),
      mixture_(std::move(mixture)),
      config_(config),
      replay_(config.buffer_capacity) {
  config_.Validate();
  ValidateMixture(mixture_, game_->NumPlayers(), player_);
}

double TabularQLearner::Epsilon() const {
  const double frac = config_.episodes <= 1
                          ? 1.0
                          : std::min(1.0, static_cast<double>(episodes_done_) /
                                              (config_.episodes - 1));
  return config_.epsilon_start +
         frac * (config_.epsilon_end - config_.epsilon_start);
}

TabularQLearner::Row& TabularQLearner::Touch(const InfoStateKey& key,
                                             const std::vector<Action>& legal) {
  auto it = table_.find(key);
  if (it == table_.end()) {
    it = table_.emplace(key, Row{legal, std::vector<double>(legal.size(), 0.0)})
             .first;
  }
  return it->second;
}

double TabularQLearner::Q(const InfoStateKey& key, Action action) const {
  const auto it = table_.find(key);
  if (it == table_.end()) return 0.0;
  const auto& row = it->second;
  for (size_t i = 0; i < row.legal.size(); ++i) {
    if (row.legal[i] == action) return row.q[i];
  }
  return 0.0;
}

void TabularQLearner::SetQ(const InfoStateKey& key,
                           const std::vector<Action>& legal, Action action,
                           double value) {
  Row& row = Touch(key, legal);
  for (size_t i = 0; i < row.legal.size(); ++i) {
    if (row.legal[i] == action) {
      row.q[i] = value;
      return;
    }
  }
  Fail(ErrorCode::kInvalidArgument, "action ", action, " is not legal");
}

Action TabularQLearner::Greedy(const InfoStateKey& key) const {
  const auto it = table_.find(key);
  if (it == table_.end()) {
    Fail(ErrorCode::kNotFound, "no Q entries for ", key.ToString());
  }
  const auto& row = it->second;
  size_t best = 0;
  for (size_t i = 1; i < row.q.size(); ++i) {
    if (row.q[i] > row.q[best]) best = i;
  }
  return row.legal[best];
}

double TabularQLearner::MaxQ(const InfoStateKey& key,
                             const std::vector<Action>& legal) const {
  const auto it = table_.find(key);
  if (it == table_.end()) return 0.0;
  return *std::max_element(it->second.q.begin(), it->second.q.end());
}

void TabularQLearner::Apply(const QTransition& t) {
  const double target =
      t.terminal ? t.reward : t.reward + MaxQ(t.next_key, t.next_legal);
  const auto it = table_.find(t.key);
  auto& row = it->second;
  for (size_t i = 0; i < row.legal.size(); ++i) {
    if (row.legal[i] == t.action) {
      row.q[i] += config_.learning_rate * (target - row.q[i]);
      return;
    }
  }
}

void TabularQLearner::Train(int episodes) {
  std::vector<double> weights;
  for (const auto& p : mixture_) weights.push_back(p.weight);
  for (int e = 0; e < episodes; ++e) {
    Rng rng(DeriveSeed(config_.seed, episodes_done_));
    const double eps = Epsilon();
    const auto& profile = mixture_[SampleIndex(weights, rng)];
    auto state = game_->NewInitialState();
    std::vector<QTransition> pending;
    bool open = false;  // pending.back() awaits its successor
    while (!state->IsTerminal()) {
      const Player p = state->CurrentPlayer();
      if (p == kChancePlayerId) {
        state = state->Child(SampleAction(state->ChanceOutcomes(), rng));
        continue;
      }
      if (p != player_) {
        state = state->Child(profile.policies[p]->SampleAction(*state, p, rng));
        continue;
      }
      const InfoStateKey key = state->InfoStateKeyFor(player_);
      const auto legal = state->LegalActions();
      Touch(key, legal);
      if (open) {
        auto& prev = pending.back();
        prev.terminal = false;
        prev.next_key = key;
        prev.next_legal = legal;
        Apply(prev);
        replay_.Add(prev);
      }
      Action a;
      if (Uniform01(rng) < eps) {
        std::uniform_int_distribution<size_t> pick(0, legal.size() - 1);
        a = legal[pick(rng)];
      } else {
        a = Greedy(key);
      }
      QTransition t;
      t.key = key;
      t.action = a;
      pending.push_back(std::move(t));
      open = true;
      state = state->Child(a);
    }
    if (open) {
      auto& last = pending.back();
      last.terminal = true;
      last.reward = state->Returns()[player_];
      Apply(last);
      replay_.Add(last);
    }
    for (int idx : replay_.SampleIndices(config_.replay_per_episode, rng)) {
      Apply(replay_[idx]);
    }
    ++episodes_done_;
  }
}

std::shared_ptr<TabularPolicy> TabularQLearner::GreedyPolicy() const {
  auto policy = std::make_shared<TabularPolicy>();
  for (const auto& [key, row] : table_) {
    const Action best = Greedy(key);
    ActionsAndProbs dist;
    for (Action a : row.legal) dist.push_back({a, a == best ? 1.0 : 0.0});
    policy->Set(key, std::move(dist));
  }
  return policy;
}

std::shared_ptr<TabularPolicy> TabularQResponse(
    std::shared_ptr<const Game> game, Player player,
    const OpponentMixture& mixture, const TabularQConfig& config) {
  TabularQLearner learner(std::move(game), player, mixture, config);
  learner.Train();
  return learner.GreedyPolicy();
}

}  // namespace sgpsro
