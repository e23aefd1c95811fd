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

#include "sgpsro/game/matrix_game.h"

#include "sgpsro/core/error.h"

namespace sgpsro {

MatrixGame::MatrixGame(PayoffTensor payoffs, std::string name,
                       std::vector<std::vector<std::string>> action_names)
    : payoffs_(std::move(payoffs)),
      name_(std::move(name)),
      action_names_(std::move(action_names)) {
  if (!action_names_.empty()) {
    if (static_cast<int>(action_names_.size()) != payoffs_.num_players()) {
      Fail(ErrorCode::kInvalidArgument, "action names needed for every player");
    }
    for (int p = 0; p < payoffs_.num_players(); ++p) {
      if (static_cast<int>(action_names_[p].size()) != payoffs_.shape()[p]) {
        Fail(ErrorCode::kInvalidArgument, "player ", p, " has ",
             payoffs_.shape()[p], " actions but ", action_names_[p].size(),
             " names");
      }
    }
  }
}

std::unique_ptr<State> MatrixGame::NewInitialState() const {
  return std::make_unique<MatrixState>(shared_from_this());
}

std::string MatrixGame::ActionName(Player player, Action action) const {
  if (action_names_.empty()) return std::to_string(action);
  return action_names_[player][action];
}

MatrixState::MatrixState(std::shared_ptr<const Game> game) : State(game) {}

Player MatrixState::CurrentPlayer() const {
  if (static_cast<int>(history_.size()) == NumPlayers()) {
    return kTerminalPlayerId;
  }
  return static_cast<Player>(history_.size());
}

std::vector<Action> MatrixState::LegalActions() const {
  if (IsTerminal()) return {};
  const auto& game = static_cast<const MatrixGame&>(*game_);
  std::vector<Action> out(game.payoffs().shape()[history_.size()]);
  for (size_t a = 0; a < out.size(); ++a) out[a] = static_cast<Action>(a);
  return out;
}

std::vector<double> MatrixState::Returns() const {
  if (!IsTerminal()) {
    Fail(ErrorCode::kFailedPrecondition, "matrix returns before all moved");
  }
  const auto& payoffs = static_cast<const MatrixGame&>(*game_).payoffs();
  std::vector<int> joint;
  for (const auto& pa : history_) joint.push_back(static_cast<int>(pa.action));
  const int flat = payoffs.Flatten(joint);
  std::vector<double> out(NumPlayers());
  for (int p = 0; p < NumPlayers(); ++p) out[p] = payoffs.At(flat, p);
  return out;
}

InfoStateKey MatrixState::InfoStateKeyFor(Player player) const {
  // Own move is recalled; others' moves are hidden.
  std::vector<Action> own;
  if (player < static_cast<int>(history_.size())) {
    own.push_back(history_[player].action);
  }
  return KeyBuilder(player).Field("matrix").Actions(own).Build();
}

std::string MatrixState::ActionToString(Player player, Action action) const {
  return static_cast<const MatrixGame&>(*game_).ActionName(player, action);
}

std::unique_ptr<State> MatrixState::Clone() const {
  return std::make_unique<MatrixState>(*this);
}

std::shared_ptr<const MatrixGame> MakeChicken() {
  return std::make_shared<MatrixGame>(
      ChickenTensor(), "chicken",
      std::vector<std::vector<std::string>>{{"C", "S"}, {"C", "S"}});
}

std::shared_ptr<const MatrixGame> MakeBattleOfSexes() {
  return std::make_shared<MatrixGame>(
      BattleOfSexesTensor(), "bach_stravinsky",
      std::vector<std::vector<std::string>>{{"B", "S"}, {"B", "S"}});
}

std::shared_ptr<const MatrixGame> MakeMatchingPennies() {
  return std::make_shared<MatrixGame>(
      MatchingPenniesTensor(), "matching_pennies",
      std::vector<std::vector<std::string>>{{"H", "T"}, {"H", "T"}});
}

}  // namespace sgpsro
