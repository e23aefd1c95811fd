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

#ifndef SGPSRO_GAME_GAME_H_
#define SGPSRO_GAME_GAME_H_

#include <memory>
#include <string>
#include <vector>

#include "sgpsro/core/info_state_key.h"
#include "sgpsro/core/types.h"

namespace sgpsro {

class Game;

// A history h. States are values: the only way to move forward is Child(),
// which returns a new state and leaves this one untouched, so a state can be
// shared freely across threads.
class State {
 public:
  explicit State(std::shared_ptr<const Game> game);
  virtual ~State() = default;

  State(const State&) = default;
  State& operator=(const State&) = delete;

  // Player to act, kChancePlayerId, or kTerminalPlayerId.
  virtual Player CurrentPlayer() const = 0;

  // Sorted legal actions (chance outcomes at chance nodes); empty iff
  // terminal.
  virtual std::vector<Action> LegalActions() const = 0;

  // Only valid at chance nodes.
  virtual ActionsAndProbs ChanceOutcomes() const;

  // Only valid at terminal states.
  virtual std::vector<double> Returns() const = 0;

  virtual InfoStateKey InfoStateKeyFor(Player player) const = 0;

  // The part of `player`'s observation not shared with everyone (cards,
  // private values). Empty for games without private information.
  virtual std::string PrivateObservation(Player player) const { return ""; }

  virtual std::string ActionToString(Player player, Action action) const;
  virtual std::string ToString() const;

  virtual std::unique_ptr<State> Clone() const = 0;

  // Successor after `action`. Throws kInvalidArgument naming the legal set if
  // the action is illegal, kFailedPrecondition at terminal states.
  std::unique_ptr<State> Child(Action action) const;

  bool IsTerminal() const { return CurrentPlayer() == kTerminalPlayerId; }
  bool IsChanceNode() const { return CurrentPlayer() == kChancePlayerId; }
  bool IsPlayerNode() const { return CurrentPlayer() >= 0; }

  const std::vector<PlayerAction>& History() const { return history_; }
  std::vector<Action> ActionHistory() const;
  int NumPlayers() const;
  const Game& game() const { return *game_; }
  std::shared_ptr<const Game> game_ptr() const { return game_; }

  // Returns() with a precondition check.
  std::vector<double> TerminalReturns() const;

 protected:
  // Applies a known-legal action in place; only used on fresh clones.
  virtual void DoApplyAction(Action action) = 0;

  std::shared_ptr<const Game> game_;
  std::vector<PlayerAction> history_;
};

// A history together with the chance probability of reaching it.
struct WeightedHistory {
  std::unique_ptr<State> state;
  double chance_reach = 1.0;
};

class Game : public std::enable_shared_from_this<Game> {
 public:
  virtual ~Game() = default;

  virtual std::string Id() const = 0;
  virtual int NumPlayers() const = 0;
  virtual std::unique_ptr<State> NewInitialState() const = 0;
  virtual double MinUtility() const = 0;
  virtual double MaxUtility() const = 0;
  // Upper bound on the number of actions (chance + players) in any history.
  virtual int MaxGameLength() const = 0;
  // Disagreement utility used by bargaining solvers when configured so.
  virtual double DisagreementUtility() const { return MinUtility(); }

  // All histories, with chance reach, that `player` cannot distinguish from
  // `state`. The default walks the tree, branching on every action and
  // pruning on `player`'s keys; games override it with direct enumeration.
  // Throws kResourceExhausted after visiting `node_budget` nodes.
  virtual std::vector<WeightedHistory> ConsistentHistories(
      const State& state, Player player, long node_budget = 1'000'000) const;
};

// Counts distinct information-state keys per player by exhaustive tree walk.
// Throws kResourceExhausted past `node_budget` nodes.
std::vector<long> CountInfoStates(const Game& game,
                                  long node_budget = 10'000'000);

// Applies `actions` from the initial state.
std::unique_ptr<State> StateFromActions(const Game& game,
                                        const std::vector<Action>& actions);

}  // namespace sgpsro

#endif  // SGPSRO_GAME_GAME_H_
