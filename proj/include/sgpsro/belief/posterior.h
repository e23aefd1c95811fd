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

#ifndef SGPSRO_BELIEF_POSTERIOR_H_
#define SGPSRO_BELIEF_POSTERIOR_H_

#include <functional>
#include <memory>
#include <vector>

#include "json.hpp"
#include "sgpsro/core/payoff_tensor.h"
#include "sgpsro/core/random.h"
#include "sgpsro/egame/normal_form.h"
#include "sgpsro/game/game.h"
#include "sgpsro/policy/policy.h"

namespace sgpsro {

// One pure opponent profile of a searching player. policies[searcher] is
// unused and normally null.
struct OpponentProfile {
  std::vector<PolicyPtr> policies;
  double weight = 0.0;
  // Catalog index per player (-1 for the searcher) when the profile was
  // built from catalogs; empty otherwise. Used for compact serialization.
  std::vector<int> joint;
};

// sigma_{-i}: a finite distribution over pure opponent profiles.
using OpponentMixture = std::vector<OpponentProfile>;

// Opponent distribution of `player` under a meta-solution over `catalogs`.
OpponentMixture MixtureFromSolution(
    const std::vector<std::vector<PolicyPtr>>& catalogs,
    const MetaSolution& solution, Player player);

// A mixture with one profile of weight 1.
OpponentMixture PureMixture(std::vector<PolicyPtr> policies);

// Checks weights are finite, nonnegative and sum to 1, and that every
// opponent slot is filled.
void ValidateMixture(const OpponentMixture& mixture, int num_players,
                     Player searcher);

// Product over all non-searcher decisions along `state`'s history of the
// action probabilities under `profile`.
double OpponentReach(const State& state, Player searcher,
                     const OpponentProfile& profile);

// Pr(profile | h): prior weight times opponent reach, normalized. Entry k
// belongs to mixture[k]. Throws kInvalidArgument when every profile has zero
// reach.
std::vector<double> OpponentTypePosterior(const State& h, Player searcher,
                                          const OpponentMixture& mixture);

// Index into `mixture` drawn from OpponentTypePosterior. With
// `prior_fallback`, a history no profile can reach (possible when `h` comes
// from an approximate belief model) draws from the prior instead of
// throwing.
int SampleOpponentProfile(const State& h, Player searcher,
                          const OpponentMixture& mixture, Rng& rng,
                          bool prior_fallback = false);

// Resolves catalog references and inline policy JSON while loading.
struct PolicyResolver {
  std::function<PolicyPtr(Player, int)> by_index;
  std::function<PolicyPtr(const nlohmann::json&)> inline_policy;
};

// Profiles with `joint` are written as {"weight", "joint"}; others embed
// their opponents' ToJson().
nlohmann::json MixtureToJson(const OpponentMixture& mixture);
OpponentMixture MixtureFromJson(const nlohmann::json& j,
                                const PolicyResolver& resolver);

struct WorldBelief {
  std::unique_ptr<State> state;
  double probability = 0.0;
};

// Pr(h | s, sigma_{-i}) over the histories `searcher` cannot distinguish from
// `state`: chance reach times the mixture's opponent reach, normalized.
// Histories with zero mass are kept with probability 0. Throws
// kResourceExhausted past `node_budget`, kFailedPrecondition when no history
// has positive mass.
std::vector<WorldBelief> ExactPosterior(const State& state, Player searcher,
                                        const OpponentMixture& mixture,
                                        long node_budget = 1'000'000);

}  // namespace sgpsro

#endif  // SGPSRO_BELIEF_POSTERIOR_H_
