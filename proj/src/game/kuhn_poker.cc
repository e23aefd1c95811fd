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

#include "sgpsro/game/kuhn_poker.h"

#include <algorithm>
#include <functional>
#include <sstream>

#include "sgpsro/core/error.h"

namespace sgpsro {

KuhnGame::KuhnGame(int num_players, int deck_size)
    : num_players_(num_players),
      deck_size_(deck_size > 0 ? deck_size : num_players + 1) {
  if (num_players_ < 2) {
    Fail(ErrorCode::kInvalidArgument, "Kuhn poker needs >= 2 players");
  }
  if (deck_size_ < num_players_) {
    Fail(ErrorCode::kInvalidArgument, "Kuhn deck of ", deck_size_,
         " cards cannot deal ", num_players_, " players");
  }
}

double KuhnGame::MaxUtility() const { return 2.0 * (num_players_ - 1); }

std::unique_ptr<State> KuhnGame::NewInitialState() const {
  return std::make_unique<KuhnState>(shared_from_this());
}

std::vector<WeightedHistory> KuhnGame::ConsistentHistories(
    const State& state, Player player, long node_budget) const {
  const auto& kuhn = dynamic_cast<const KuhnState&>(state);
  std::vector<WeightedHistory> out;
  const int dealt = std::min<int>(num_players_, state.History().size());
  if (player < dealt) {
    // Enumerate the other dealt players' cards, excluding the player's own.
    const int own = kuhn.card(player);
    std::vector<int> cards(dealt, -1);
    long visited = 0;
    std::vector<bool> used(deck_size_, false);
    used[own] = true;
    cards[player] = own;
    std::function<void(int)> rec = [&](int seat) {
      if (++visited > node_budget) {
        Fail(ErrorCode::kResourceExhausted,
             "Kuhn consistent histories exceeded budget");
      }
      if (seat == dealt) {
        std::unique_ptr<State> s = NewInitialState();
        double total = 1.0;
        for (int p = 0; p < dealt; ++p) {
          total *= GetProb(s->ChanceOutcomes(), cards[p]);
          s = s->Child(cards[p]);
        }
        for (size_t k = dealt; k < state.History().size(); ++k) {
          s = s->Child(state.History()[k].action);
        }
        out.push_back({std::move(s), total});
        return;
      }
      if (seat == player) {
        rec(seat + 1);
        return;
      }
      for (int c = 0; c < deck_size_; ++c) {
        if (used[c]) continue;
        used[c] = true;
        cards[seat] = c;
        rec(seat + 1);
        used[c] = false;
      }
    };
    rec(0);
    return out;
  }
  return Game::ConsistentHistories(state, player, node_budget);
}

KuhnState::KuhnState(std::shared_ptr<const Game> game) : State(game) {
  const auto& kuhn = static_cast<const KuhnGame&>(*game_);
  num_players_ = kuhn.NumPlayers();
  deck_size_ = kuhn.deck_size();
  cards_.assign(num_players_, -1);
  bet_.assign(num_players_, false);
}

Player KuhnState::CurrentPlayer() const {
  if (finished_) return kTerminalPlayerId;
  if (history_.size() < static_cast<size_t>(num_players_)) {
    return kChancePlayerId;
  }
  return static_cast<Player>(betting_.size() % num_players_);
}

std::vector<Action> KuhnState::LegalActions() const {
  if (finished_) return {};
  if (IsChanceNode()) {
    std::vector<Action> out;
    for (int c = 0; c < deck_size_; ++c) {
      if (std::find(cards_.begin(), cards_.end(), c) == cards_.end()) {
        out.push_back(c);
      }
    }
    return out;
  }
  return {kKuhnPass, kKuhnBet};
}

ActionsAndProbs KuhnState::ChanceOutcomes() const {
  if (!IsChanceNode()) {
    Fail(ErrorCode::kFailedPrecondition, "not a chance node");
  }
  return UniformOver(LegalActions());
}

void KuhnState::DoApplyAction(Action action) {
  if (history_.size() < static_cast<size_t>(num_players_)) {
    cards_[history_.size()] = static_cast<int>(action);
    return;
  }
  const Player player = static_cast<Player>(betting_.size() % num_players_);
  betting_.push_back(action);
  if (action == kKuhnBet) {
    if (first_bettor_ < 0) first_bettor_ = player;
    bet_[player] = true;
  }
  const int n = static_cast<int>(betting_.size());
  if ((first_bettor_ < 0 && n == num_players_) ||
      (first_bettor_ >= 0 && n == num_players_ + first_bettor_)) {
    finished_ = true;
  }
}

std::vector<double> KuhnState::Returns() const {
  if (!finished_) {
    Fail(ErrorCode::kFailedPrecondition, "Kuhn returns at non-terminal state");
  }
  Player winner = -1;
  for (Player p = 0; p < num_players_; ++p) {
    if (first_bettor_ >= 0 && !bet_[p]) continue;
    if (winner < 0 || cards_[p] > cards_[winner]) winner = p;
  }
  double pot = 0.0;
  std::vector<double> contribution(num_players_);
  for (Player p = 0; p < num_players_; ++p) {
    contribution[p] = bet_[p] ? 2.0 : 1.0;
    pot += contribution[p];
  }
  std::vector<double> returns(num_players_);
  for (Player p = 0; p < num_players_; ++p) {
    returns[p] = (p == winner ? pot : 0.0) - contribution[p];
  }
  return returns;
}

InfoStateKey KuhnState::InfoStateKeyFor(Player player) const {
  KeyBuilder key(player);
  key.Field("kuhn").Ints({cards_[player]}).Actions(betting_);
  return key.Build();
}

std::string KuhnState::ActionToString(Player player, Action action) const {
  if (player == kChancePlayerId) return "Deal:" + std::to_string(action);
  return action == kKuhnBet ? "Bet" : "Pass";
}

std::string KuhnState::ToString() const {
  std::ostringstream out;
  for (int p = 0; p < num_players_; ++p) {
    if (p) out << ' ';
    out << cards_[p];
  }
  for (Action a : betting_) out << ' ' << (a == kKuhnBet ? 'b' : 'p');
  return out.str();
}

std::unique_ptr<State> KuhnState::Clone() const {
  return std::make_unique<KuhnState>(*this);
}

}  // namespace sgpsro
