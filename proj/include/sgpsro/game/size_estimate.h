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

#ifndef SGPSRO_GAME_SIZE_ESTIMATE_H_
#define SGPSRO_GAME_SIZE_ESTIMATE_H_

#include <map>
#include <vector>

#include "sgpsro/core/random.h"
#include "sgpsro/game/game.h"

namespace sgpsro {

struct SizeEstimate {
  int num_rollouts = 0;
  // Mean number of legal actions over all player decisions in the rollouts.
  double branching_factor = 0.0;
  // Per player: number of distinct private observations at the first
  // decision.
  std::vector<double> private_types;
  // Per player: the player-action depths (number of player moves before the
  // decision) at which the player was observed to act, mapped to the
  // fraction of rollouts that reached such a decision.
  std::vector<std::map<int, double>> decision_depths;
  // Per player: U * sum_d b^d over observed decision depths d.
  std::vector<double> formula_info_states;
  // Per player: U * sum_d b^d * reach(d). Accounts for decisions that only
  // some rollouts reach.
  std::vector<double> reach_weighted_info_states;
};

// Plays `num_rollouts` episodes with uniformly random actions.
// `private_types[p]`, if given, overrides the count of distinct private
// observations seen in the rollouts, which misses types never dealt.
SizeEstimate EstimateGameSize(const Game& game, int num_rollouts, Rng& rng,
                              std::vector<double> private_types = {});

// U * sum_{d in depths} b^d.
double GeometricInfoStateCount(double num_private_types, double b,
                               const std::vector<int>& depths);

}  // namespace sgpsro

#endif  // SGPSRO_GAME_SIZE_ESTIMATE_H_
