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

#include "sgpsro/game/registry.h"

#include <algorithm>

#include "sgpsro/core/error.h"
#include "sgpsro/game/kuhn_poker.h"
#include "sgpsro/game/matrix_game.h"

namespace sgpsro {

const std::vector<std::string>& KnownGameIds() {
  static const std::vector<std::string> kIds = {
      "kuhn_poker",       "matrix", "chicken",  "bach_stravinsky",
      "matching_pennies", "dond",   "mini_dond"};
  return kIds;
}

void GameSpec::Validate() const {
  const auto& ids = KnownGameIds();
  if (std::find(ids.begin(), ids.end(), id) == ids.end()) {
    Fail(ErrorCode::kInvalidArgument, "game.id: unknown game '", id, "'");
  }
  if (num_players < 2) {
    Fail(ErrorCode::kInvalidArgument, "game.num_players must be >= 2");
  }
  if (id == "matrix" && !matrix.has_value()) {
    Fail(ErrorCode::kInvalidArgument,
         "game.id 'matrix' requires a payoff tensor");
  }
  if ((id == "dond" || id == "mini_dond") && num_players != 2) {
    Fail(ErrorCode::kInvalidArgument, "Deal or No Deal is a 2-player game");
  }
  if (id == "dond" || id == "mini_dond") dond.Validate();
}

nlohmann::json GameSpec::ToJson() const {
  nlohmann::json j = {{"id", id}, {"num_players", num_players}};
  if (id == "kuhn_poker") j["kuhn_deck_size"] = kuhn_deck_size;
  if (matrix) {
    j["matrix"] = {{"shape", matrix->shape()}, {"values", matrix->values()}};
  }
  if (id == "dond" || id == "mini_dond") {
    j["dond"] = {{"num_item_types", dond.num_item_types},
                 {"min_pool", dond.min_pool},
                 {"max_pool", dond.max_pool},
                 {"total_value", dond.total_value},
                 {"max_turns", dond.max_turns},
                 {"min_item_count", dond.min_item_count}};
    if (!dond_instance_db.empty()) j["dond_instance_db"] = dond_instance_db;
  }
  return j;
}

GameSpec GameSpec::FromJson(const nlohmann::json& j) {
  GameSpec spec;
  if (j.is_string()) {
    spec.id = j.get<std::string>();
    if (spec.id == "mini_dond") spec.dond = MiniDondParams();
    spec.Validate();
    return spec;
  }
  if (!j.is_object()) {
    Fail(ErrorCode::kInvalidArgument, "game: expected an object or an id");
  }
  if (j.contains("id")) spec.id = j.at("id").get<std::string>();
  if (spec.id == "mini_dond") spec.dond = MiniDondParams();
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "id") {
        continue;
      } else if (key == "num_players") {
        spec.num_players = value.get<int>();
      } else if (key == "kuhn_deck_size") {
        spec.kuhn_deck_size = value.get<int>();
      } else if (key == "matrix") {
        spec.matrix =
            PayoffTensor(value.at("shape").get<std::vector<int>>(),
                         value.at("values").get<std::vector<double>>());
        spec.num_players = spec.matrix->num_players();
      } else if (key == "dond_instance_db") {
        spec.dond_instance_db = value.get<std::string>();
      } else if (key == "dond") {
        for (const auto& [dk, dv] : value.items()) {
          int* field = dk == "num_item_types"   ? &spec.dond.num_item_types
                       : dk == "min_pool"       ? &spec.dond.min_pool
                       : dk == "max_pool"       ? &spec.dond.max_pool
                       : dk == "total_value"    ? &spec.dond.total_value
                       : dk == "max_turns"      ? &spec.dond.max_turns
                       : dk == "min_item_count" ? &spec.dond.min_item_count
                                                : nullptr;
          if (!field) {
            Fail(ErrorCode::kInvalidArgument, "game.dond.", dk,
                 ": unknown field");
          }
          *field = dv.get<int>();
        }
      } else {
        Fail(ErrorCode::kInvalidArgument, "game.", key, ": unknown field");
      }
    } catch (const nlohmann::json::exception& e) {
      Fail(ErrorCode::kInvalidArgument, "game.", key, ": ", e.what());
    }
  }
  spec.Validate();
  return spec;
}

std::shared_ptr<const Game> LoadGame(const GameSpec& spec) {
  spec.Validate();
  if (spec.id == "kuhn_poker") {
    return std::make_shared<KuhnGame>(spec.num_players, spec.kuhn_deck_size);
  }
  if (spec.id == "matrix") {
    return std::make_shared<MatrixGame>(*spec.matrix, "matrix");
  }
  if (spec.id == "chicken") return MakeChicken();
  if (spec.id == "bach_stravinsky") return MakeBattleOfSexes();
  if (spec.id == "matching_pennies") return MakeMatchingPennies();
  std::vector<DondInstance> db;
  if (!spec.dond_instance_db.empty()) {
    db = DondReadDatabase(spec.dond_instance_db);
  }
  return std::make_shared<DondGame>(spec.dond, std::move(db), spec.id);
}

std::shared_ptr<const Game> LoadGame(const std::string& id) {
  GameSpec spec;
  spec.id = id;
  if (id == "mini_dond") spec.dond = MiniDondParams();
  return LoadGame(spec);
}

}  // namespace sgpsro
