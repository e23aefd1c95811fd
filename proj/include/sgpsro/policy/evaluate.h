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

#ifndef SGPSRO_POLICY_EVALUATE_H_
#define SGPSRO_POLICY_EVALUATE_H_

#include <vector>

#include "sgpsro/core/random.h"
#include "sgpsro/game/game.h"
#include "sgpsro/policy/policy.h"

namespace sgpsro {

// Exact expected returns when player p follows policies[p], by walking every
// history with positive probability. Throws kResourceExhausted past
// `node_budget` visited nodes.
std::vector<double> ExpectedReturns(const Game& game,
                                    const std::vector<PolicyPtr>& policies,
                                    long node_budget = 50'000'000);

// Same, starting from `state`.
std::vector<double> ExpectedReturnsFrom(const State& state,
                                        const std::vector<PolicyPtr>& policies,
                                        long node_budget = 50'000'000);

// Plays one episode; chance outcomes and actions sampled from `rng`.
std::vector<double> PlayEpisode(const Game& game,
                                const std::vector<PolicyPtr>& policies,
                                Rng& rng);

// Product over `player`'s own decisions along `state`'s history of the
// probability `policy` assigns to the action taken.
double PlayerReach(const State& state, Player player, const Policy& policy);

}  // namespace sgpsro

#endif  // SGPSRO_POLICY_EVALUATE_H_
