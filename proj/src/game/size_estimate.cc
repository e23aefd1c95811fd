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

#include "sgpsro/game/size_estimate.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "sgpsro/core/error.h"

namespace sgpsro {

double GeometricInfoStateCount(double num_private_types, double b,
                               const std::vector<int>& depths) {
  double total = 0.0;
  for (int d : depths) total += std::pow(b, d);
  return num_private_types * total;
}

SizeEstimate EstimateGameSize(const Game& game, int num_rollouts, Rng& rng,
                              std::vector<double> private_types) {
  if (num_rollouts < 1) {
    Fail(ErrorCode::kInvalidArgument, "num_rollouts must be >= 1");
  }
  const int n = game.NumPlayers();
  SizeEstimate est;
  est.num_rollouts = num_rollouts;
  est.decision_depths.resize(n);
  std::vector<std::set<std::string>> seen_types(n);
  double legal_total = 0.0;
  long decisions = 0;
  for (int r = 0; r < num_rollouts; ++r) {
    std::unique_ptr<State> state = game.NewInitialState();
    int depth = 0;
    std::vector<std::set<int>> reached(n);
    while (!state->IsTerminal()) {
      if (state->IsChanceNode()) {
        state = state->Child(SampleAction(state->ChanceOutcomes(), rng));
        continue;
      }
      const Player p = state->CurrentPlayer();
      const std::vector<Action> legal = state->LegalActions();
      legal_total += static_cast<double>(legal.size());
      ++decisions;
      if (reached[p].empty())
        seen_types[p].insert(state->PrivateObservation(p));
      reached[p].insert(depth);
      const size_t pick = static_cast<size_t>(Uniform01(rng) * legal.size());
      state = state->Child(legal[std::min(pick, legal.size() - 1)]);
      ++depth;
    }
    for (int p = 0; p < n; ++p) {
      for (int d : reached[p]) est.decision_depths[p][d] += 1.0;
    }
  }
  est.branching_factor = decisions ? legal_total / decisions : 0.0;
  for (int p = 0; p < n; ++p) {
    for (auto& [d, count] : est.decision_depths[p]) count /= num_rollouts;
  }
  if (private_types.empty()) {
    for (int p = 0; p < n; ++p) {
      private_types.push_back(static_cast<double>(seen_types[p].size()));
    }
  }
  if (static_cast<int>(private_types.size()) != n) {
    Fail(ErrorCode::kInvalidArgument,
         "private_types needs one entry per player");
  }
  est.private_types = private_types;
  for (int p = 0; p < n; ++p) {
    std::vector<int> depths;
    double weighted = 0.0;
    for (const auto& [d, reach] : est.decision_depths[p]) {
      depths.push_back(d);
      weighted += std::pow(est.branching_factor, d) * reach;
    }
    est.formula_info_states.push_back(GeometricInfoStateCount(
        private_types[p], est.branching_factor, depths));
    est.reach_weighted_info_states.push_back(private_types[p] * weighted);
  }
  return est;
}

}  // namespace sgpsro
