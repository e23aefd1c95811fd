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

#ifndef SGPSRO_GAME_MATRIX_GAME_H_
#define SGPSRO_GAME_MATRIX_GAME_H_

#include <memory>
#include <string>
#include <vector>

#include "sgpsro/core/payoff_tensor.h"
#include "sgpsro/game/game.h"

namespace sgpsro {

// A normal-form game played as an extensive-form game: players move in seat
// order and nobody observes earlier moves, so each player has a single
// information state.
class MatrixGame : public Game {
 public:
  MatrixGame(PayoffTensor payoffs, std::string name = "matrix",
             std::vector<std::vector<std::string>> action_names = {});

  std::string Id() const override { return name_; }
  int NumPlayers() const override { return payoffs_.num_players(); }
  std::unique_ptr<State> NewInitialState() const override;
  double MinUtility() const override { return payoffs_.MinValue(); }
  double MaxUtility() const override { return payoffs_.MaxValue(); }
  int MaxGameLength() const override { return NumPlayers(); }

  const PayoffTensor& payoffs() const { return payoffs_; }
  std::string ActionName(Player player, Action action) const;

 private:
  PayoffTensor payoffs_;
  std::string name_;
  std::vector<std::vector<std::string>> action_names_;
};

class MatrixState : public State {
 public:
  explicit MatrixState(std::shared_ptr<const Game> game);

  Player CurrentPlayer() const override;
  std::vector<Action> LegalActions() const override;
  std::vector<double> Returns() const override;
  InfoStateKey InfoStateKeyFor(Player player) const override;
  std::string ActionToString(Player player, Action action) const override;
  std::unique_ptr<State> Clone() const override;

 protected:
  void DoApplyAction(Action action) override {}
};

// Convenience constructors with conventional action labels.
std::shared_ptr<const MatrixGame> MakeChicken();
std::shared_ptr<const MatrixGame> MakeBattleOfSexes();
std::shared_ptr<const MatrixGame> MakeMatchingPennies();

}  // namespace sgpsro

#endif  // SGPSRO_GAME_MATRIX_GAME_H_
