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

#ifndef SGPSRO_GAME_REGISTRY_H_
#define SGPSRO_GAME_REGISTRY_H_

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "sgpsro/core/payoff_tensor.h"
#include "sgpsro/game/dond.h"
#include "sgpsro/game/game.h"

namespace sgpsro {

// Game ids: kuhn_poker, matrix, chicken, bach_stravinsky, matching_pennies,
// dond, mini_dond.
struct GameSpec {
  std::string id = "kuhn_poker";
  int num_players = 2;
  int kuhn_deck_size = 0;  // 0 means num_players + 1
  std::optional<PayoffTensor> matrix;
  DondParams dond;
  std::string dond_instance_db;  // optional database file

  void Validate() const;
  // {"id", "num_players", "kuhn_deck_size", "matrix": {"shape", "values"},
  // "dond": {...DondParams fields}, "dond_instance_db"}; omitted fields keep
  // their defaults (mini_dond defaults to MiniDondParams()). Unknown keys are
  // rejected with the offending path.
  nlohmann::json ToJson() const;
  static GameSpec FromJson(const nlohmann::json& j);
};

std::shared_ptr<const Game> LoadGame(const GameSpec& spec);

// Shorthand for the built-in ids with default parameters.
std::shared_ptr<const Game> LoadGame(const std::string& id);

const std::vector<std::string>& KnownGameIds();

}  // namespace sgpsro

#endif  // SGPSRO_GAME_REGISTRY_H_
