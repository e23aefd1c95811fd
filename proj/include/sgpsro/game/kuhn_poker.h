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

#ifndef SGPSRO_GAME_KUHN_POKER_H_
#define SGPSRO_GAME_KUHN_POKER_H_

#include <memory>
#include <string>
#include <vector>

#include "sgpsro/game/game.h"

// N-player Kuhn poker. Every player antes one chip and is dealt one private
// card from a deck of `deck_size` cards (default n + 1). Players then act in
// turn with pass (0) or bet (1). The round ends when everyone passes, or once
// every player has responded to the first bet. The highest card among the
// players who put a second chip in wins the pot; if nobody bet, the highest
// card overall wins.

namespace sgpsro {

inline constexpr Action kKuhnPass = 0;
inline constexpr Action kKuhnBet = 1;

class KuhnGame : public Game {
 public:
  explicit KuhnGame(int num_players = 2, int deck_size = 0);

  std::string Id() const override { return "kuhn_poker"; }
  int NumPlayers() const override { return num_players_; }
  std::unique_ptr<State> NewInitialState() const override;
  double MinUtility() const override { return -2.0; }
  double MaxUtility() const override;
  int MaxGameLength() const override {
    return 2 * num_players_ - 1 + num_players_;
  }

  int deck_size() const { return deck_size_; }

  std::vector<WeightedHistory> ConsistentHistories(
      const State& state, Player player,
      long node_budget = 1'000'000) const override;

 private:
  int num_players_;
  int deck_size_;
};

class KuhnState : public State {
 public:
  explicit KuhnState(std::shared_ptr<const Game> game);

  Player CurrentPlayer() const override;
  std::vector<Action> LegalActions() const override;
  ActionsAndProbs ChanceOutcomes() const override;
  std::vector<double> Returns() const override;
  InfoStateKey InfoStateKeyFor(Player player) const override;
  std::string PrivateObservation(Player player) const override {
    return std::to_string(cards_[player]);
  }
  std::string ActionToString(Player player, Action action) const override;
  std::string ToString() const override;
  std::unique_ptr<State> Clone() const override;

  int card(Player p) const { return cards_[p]; }
  const std::vector<Action>& betting() const { return betting_; }

 protected:
  void DoApplyAction(Action action) override;

 private:
  int num_players_;
  int deck_size_;
  std::vector<int> cards_;       // -1 until dealt
  std::vector<Action> betting_;  // public pass/bet sequence
  int first_bettor_ = -1;
  std::vector<bool> bet_;  // put a second chip in
  bool finished_ = false;
};

}  // namespace sgpsro

#endif  // SGPSRO_GAME_KUHN_POKER_H_
