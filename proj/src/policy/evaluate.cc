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

#include "sgpsro/policy/evaluate.h"

#include "sgpsro/core/error.h"

namespace sgpsro {
namespace {

void Accumulate(const State& state, double reach,
                const std::vector<PolicyPtr>& policies,
                std::vector<double>& totals, long budget, long& visited) {
  if (++visited > budget) {
    Fail(ErrorCode::kResourceExhausted,
         "exact evaluation exceeded node budget ", budget);
  }
  if (state.IsTerminal()) {
    const auto r = state.Returns();
    for (size_t p = 0; p < r.size(); ++p) totals[p] += reach * r[p];
    return;
  }
  const ActionsAndProbs dist =
      state.IsChanceNode() ? state.ChanceOutcomes()
                           : policies[state.CurrentPlayer()]->GetStatePolicy(
                                 state, state.CurrentPlayer());
  for (const auto& [a, p] : dist) {
    if (p <= 0.0) continue;
    Accumulate(*state.Child(a), reach * p, policies, totals, budget, visited);
  }
}

}  // namespace

std::vector<double> ExpectedReturnsFrom(const State& state,
                                        const std::vector<PolicyPtr>& policies,
                                        long node_budget) {
  if (static_cast<int>(policies.size()) != state.NumPlayers()) {
    Fail(ErrorCode::kInvalidArgument, "need one policy per player");
  }
  std::vector<double> totals(state.NumPlayers(), 0.0);
  long visited = 0;
  Accumulate(state, 1.0, policies, totals, node_budget, visited);
  return totals;
}

std::vector<double> ExpectedReturns(const Game& game,
                                    const std::vector<PolicyPtr>& policies,
                                    long node_budget) {
  return ExpectedReturnsFrom(*game.NewInitialState(), policies, node_budget);
}

std::vector<double> PlayEpisode(const Game& game,
                                const std::vector<PolicyPtr>& policies,
                                Rng& rng) {
  std::unique_ptr<State> state = game.NewInitialState();
  while (!state->IsTerminal()) {
    if (state->IsChanceNode()) {
      state = state->Child(SampleAction(state->ChanceOutcomes(), rng));
    } else {
      const Player p = state->CurrentPlayer();
      state = state->Child(policies[p]->SampleAction(*state, p, rng));
    }
  }
  return state->Returns();
}

double PlayerReach(const State& state, Player player, const Policy& policy) {
  double reach = 1.0;
  std::unique_ptr<State> cursor = state.game().NewInitialState();
  for (const auto& pa : state.History()) {
    if (pa.player == player) {
      reach *= policy.ActionProbability(*cursor, player, pa.action);
      if (reach == 0.0) return 0.0;
    }
    cursor = cursor->Child(pa.action);
  }
  return reach;
}

}  // namespace sgpsro
