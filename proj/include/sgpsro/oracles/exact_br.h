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

#ifndef SGPSRO_ORACLES_EXACT_BR_H_
#define SGPSRO_ORACLES_EXACT_BR_H_

#include <memory>

#include "sgpsro/belief/posterior.h"
#include "sgpsro/game/game.h"
#include "sgpsro/policy/policy.h"

namespace sgpsro {

struct BestResponseResult {
  std::shared_ptr<TabularPolicy> policy;  // deterministic
  double value = 0.0;
};

// Best response of `player` to the opponent mixture by backward induction
// over `player`'s information states, weighting each history by chance
// reach times each profile's opponent reach. Information states the mixture
// never reaches are left out of the table (played uniformly). Ties go to the
// lowest action id. Throws kResourceExhausted past `node_budget` visited
// nodes.
BestResponseResult ExactBestResponse(const Game& game, Player player,
                                     const OpponentMixture& mixture,
                                     long node_budget = 50'000'000);

// Exact expected return of `policy` for `player` against the mixture.
double ExpectedReturnAgainst(const Game& game, Player player,
                             const PolicyPtr& policy,
                             const OpponentMixture& mixture);

}  // namespace sgpsro

#endif  // SGPSRO_ORACLES_EXACT_BR_H_
