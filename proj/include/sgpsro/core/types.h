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

#ifndef SGPSRO_CORE_TYPES_H_
#define SGPSRO_CORE_TYPES_H_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace sgpsro {

using Action = std::int64_t;
using Player = int;

inline constexpr Player kChancePlayerId = -1;
inline constexpr Player kTerminalPlayerId = -4;
inline constexpr Action kInvalidAction = -1;

// A player's (or chance's) move as it appears in a history.
struct PlayerAction {
  Player player;
  Action action;
  bool operator==(const PlayerAction&) const = default;
};

using ActionsAndProbs = std::vector<std::pair<Action, double>>;

// Probability of `action` in `policy`, zero if absent.
double GetProb(const ActionsAndProbs& policy, Action action);

// Uniform distribution over `actions`.
ActionsAndProbs UniformOver(const std::vector<Action>& actions);

// Sum of probabilities; used by validity checks.
double TotalMass(const ActionsAndProbs& policy);

}  // namespace sgpsro

#endif  // SGPSRO_CORE_TYPES_H_
