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

#include "sgpsro/game/game.h"

#include <algorithm>
#include <set>
#include <sstream>

#include "sgpsro/core/error.h"

namespace sgpsro {
namespace {

std::string JoinActions(const std::vector<Action>& actions) {
  std::ostringstream out;
  out << '[';
  for (size_t i = 0; i < actions.size(); ++i) {
    if (i) out << ", ";
    out << actions[i];
  }
  out << ']';
  return out.str();
}

}  // namespace

State::State(std::shared_ptr<const Game> game) : game_(std::move(game)) {}

ActionsAndProbs State::ChanceOutcomes() const {
  Fail(ErrorCode::kFailedPrecondition,
       "ChanceOutcomes called at a non-chance node");
}

std::string State::ActionToString(Player player, Action action) const {
  return std::to_string(action);
}

std::string State::ToString() const {
  std::ostringstream out;
  for (size_t i = 0; i < history_.size(); ++i) {
    if (i) out << ' ';
    out << history_[i].action;
  }
  return out.str();
}

std::unique_ptr<State> State::Child(Action action) const {
  const Player player = CurrentPlayer();
  if (player == kTerminalPlayerId) {
    Fail(ErrorCode::kFailedPrecondition, "action ", action,
         " applied at a terminal state");
  }
  const std::vector<Action> legal = LegalActions();
  if (!std::binary_search(legal.begin(), legal.end(), action)) {
    Fail(ErrorCode::kInvalidArgument, "illegal action ", action, " for player ",
         player, "; legal actions are ", JoinActions(legal));
  }
  std::unique_ptr<State> child = Clone();
  child->DoApplyAction(action);
  child->history_.push_back({player, action});
  return child;
}

std::vector<Action> State::ActionHistory() const {
  std::vector<Action> out;
  out.reserve(history_.size());
  for (const auto& pa : history_) out.push_back(pa.action);
  return out;
}

int State::NumPlayers() const { return game_->NumPlayers(); }

std::vector<double> State::TerminalReturns() const {
  if (!IsTerminal()) {
    Fail(ErrorCode::kFailedPrecondition,
         "returns requested at a non-terminal state");
  }
  return Returns();
}

namespace {

struct WalkContext {
  const State* target;
  Player player;
  std::vector<InfoStateKey> prefix_keys;  // player's key at each depth
  long budget;
  long visited = 0;
  std::vector<WeightedHistory>* out;
};

void Walk(const State& node, double reach, WalkContext& ctx) {
  if (++ctx.visited > ctx.budget) {
    Fail(ErrorCode::kResourceExhausted,
         "consistent-history enumeration exceeded node budget ", ctx.budget);
  }
  const size_t depth = node.History().size();
  const auto& target_history = ctx.target->History();
  if (depth == target_history.size()) {
    if (node.InfoStateKeyFor(ctx.player) == ctx.prefix_keys[depth]) {
      ctx.out->push_back({node.Clone(), reach});
    }
    return;
  }
  if (node.IsTerminal()) return;
  const Player mover = node.CurrentPlayer();
  if (mover == ctx.player) {
    // Perfect recall: the player knows its own key and action here.
    if (target_history[depth].player != ctx.player) return;
    if (node.InfoStateKeyFor(ctx.player) != ctx.prefix_keys[depth]) return;
    const Action a = target_history[depth].action;
    const auto legal = node.LegalActions();
    if (!std::binary_search(legal.begin(), legal.end(), a)) return;
    Walk(*node.Child(a), reach, ctx);
    return;
  }
  if (target_history[depth].player == ctx.player) return;
  if (mover == kChancePlayerId) {
    for (const auto& [a, p] : node.ChanceOutcomes()) {
      if (p <= 0.0) continue;
      Walk(*node.Child(a), reach * p, ctx);
    }
  } else {
    for (Action a : node.LegalActions()) Walk(*node.Child(a), reach, ctx);
  }
}

void CountWalk(const State& node, std::vector<std::set<InfoStateKey>>& keys,
               long budget, long& visited) {
  if (++visited > budget) {
    Fail(ErrorCode::kResourceExhausted,
         "info-state count exceeded node budget ", budget);
  }
  if (node.IsTerminal()) return;
  const Player mover = node.CurrentPlayer();
  if (mover >= 0) keys[mover].insert(node.InfoStateKeyFor(mover));
  for (Action a : node.LegalActions()) {
    CountWalk(*node.Child(a), keys, budget, visited);
  }
}

}  // namespace

std::vector<WeightedHistory> Game::ConsistentHistories(const State& state,
                                                       Player player,
                                                       long node_budget) const {
  WalkContext ctx;
  ctx.target = &state;
  ctx.player = player;
  ctx.budget = node_budget;
  std::vector<WeightedHistory> out;
  ctx.out = &out;
  std::unique_ptr<State> cursor = NewInitialState();
  ctx.prefix_keys.push_back(cursor->InfoStateKeyFor(player));
  for (const auto& pa : state.History()) {
    cursor = cursor->Child(pa.action);
    ctx.prefix_keys.push_back(cursor->InfoStateKeyFor(player));
  }
  Walk(*NewInitialState(), 1.0, ctx);
  return out;
}

std::vector<long> CountInfoStates(const Game& game, long node_budget) {
  std::vector<std::set<InfoStateKey>> keys(game.NumPlayers());
  long visited = 0;
  CountWalk(*game.NewInitialState(), keys, node_budget, visited);
  std::vector<long> counts;
  for (const auto& k : keys) counts.push_back(static_cast<long>(k.size()));
  return counts;
}

std::unique_ptr<State> StateFromActions(const Game& game,
                                        const std::vector<Action>& actions) {
  std::unique_ptr<State> state = game.NewInitialState();
  for (Action a : actions) state = state->Child(a);
  return state;
}

}  // namespace sgpsro
