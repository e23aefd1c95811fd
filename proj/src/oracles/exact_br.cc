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

#include "sgpsro/oracles/exact_br.h"

#include <map>
#include <utility>
#include <vector>

#include "sgpsro/core/error.h"
#include "sgpsro/policy/evaluate.h"

namespace sgpsro {
namespace {

constexpr double kTieTolerance = 1e-12;

class BestResponseComputer {
 public:
  BestResponseComputer(const Game& game, Player player,
                       const OpponentMixture& mixture, long node_budget)
      : game_(game), player_(player), mixture_(mixture), budget_(node_budget) {
    ValidateMixture(mixture, game.NumPlayers(), player);
    Collect(*game.NewInitialState(), std::vector<double>(mixture.size(), 1.0));
  }

  double RootValue() {
    const auto v = Value(*game_.NewInitialState());
    double total = 0.0;
    for (size_t k = 0; k < mixture_.size(); ++k) {
      total += mixture_[k].weight * v[k];
    }
    return total;
  }

  std::shared_ptr<TabularPolicy> Policy() {
    auto policy = std::make_shared<TabularPolicy>();
    for (const auto& [key, members] : infosets_) {
      const Action best = BestAction(key);
      ActionsAndProbs dist;
      for (Action a : members.front().first->LegalActions()) {
        dist.push_back({a, a == best ? 1.0 : 0.0});
      }
      policy->Set(key, std::move(dist));
    }
    return policy;
  }

 private:
  using Reach = std::vector<double>;

  void Tick() {
    if (++visited_ > budget_) {
      Fail(ErrorCode::kResourceExhausted,
           "best-response enumeration exceeded node budget ", budget_);
    }
  }

  // Opponent action probabilities per profile at `state`.
  std::vector<ActionsAndProbs> OpponentPolicies(const State& state,
                                                Player p) const {
    std::vector<ActionsAndProbs> out(mixture_.size());
    for (size_t k = 0; k < mixture_.size(); ++k) {
      if (mixture_[k].weight > 0.0) {
        out[k] = mixture_[k].policies[p]->GetStatePolicy(state, p);
      }
    }
    return out;
  }

  void Collect(const State& state, const Reach& reach) {
    Tick();
    if (state.IsTerminal()) return;
    const Player p = state.CurrentPlayer();
    if (p == kChancePlayerId) {
      for (const auto& [a, prob] : state.ChanceOutcomes()) {
        Reach r = reach;
        for (double& x : r) x *= prob;
        Collect(*state.Child(a), r);
      }
      return;
    }
    if (p == player_) {
      infosets_[state.InfoStateKeyFor(player_)].emplace_back(state.Clone(),
                                                             reach);
      for (Action a : state.LegalActions()) Collect(*state.Child(a), reach);
      return;
    }
    const auto pols = OpponentPolicies(state, p);
    for (Action a : state.LegalActions()) {
      Reach r(reach.size(), 0.0);
      bool any = false;
      for (size_t k = 0; k < reach.size(); ++k) {
        if (reach[k] == 0.0 || mixture_[k].weight <= 0.0) continue;
        r[k] = reach[k] * GetProb(pols[k], a);
        any = any || r[k] > 0.0;
      }
      if (any) Collect(*state.Child(a), r);
    }
  }

  // Expected return of `player_` from `state` per profile.
  std::vector<double> Value(const State& state) {
    Tick();
    const size_t n = mixture_.size();
    if (state.IsTerminal()) {
      return std::vector<double>(n, state.Returns()[player_]);
    }
    const Player p = state.CurrentPlayer();
    if (p == kChancePlayerId) {
      std::vector<double> v(n, 0.0);
      for (const auto& [a, prob] : state.ChanceOutcomes()) {
        const auto c = Value(*state.Child(a));
        for (size_t k = 0; k < n; ++k) v[k] += prob * c[k];
      }
      return v;
    }
    if (p == player_) {
      return Value(*state.Child(BestAction(state.InfoStateKeyFor(player_))));
    }
    const auto pols = OpponentPolicies(state, p);
    std::vector<double> v(n, 0.0);
    for (Action a : state.LegalActions()) {
      bool any = false;
      for (size_t k = 0; k < n; ++k) any = any || GetProb(pols[k], a) > 0.0;
      if (!any) continue;
      const auto c = Value(*state.Child(a));
      for (size_t k = 0; k < n; ++k) v[k] += GetProb(pols[k], a) * c[k];
    }
    return v;
  }

  Action BestAction(const InfoStateKey& key) {
    const auto memo = best_.find(key);
    if (memo != best_.end()) return memo->second;
    const auto it = infosets_.find(key);
    if (it == infosets_.end()) {
      Fail(ErrorCode::kInternal, "best response reached an unrecorded state");
    }
    const auto& members = it->second;
    const auto legal = members.front().first->LegalActions();
    Action best = legal.front();
    double best_q = 0.0;
    for (size_t i = 0; i < legal.size(); ++i) {
      double q = 0.0;
      for (const auto& [h, reach] : members) {
        bool any = false;
        for (size_t k = 0; k < reach.size(); ++k) {
          any = any || (reach[k] > 0.0 && mixture_[k].weight > 0.0);
        }
        if (!any) continue;
        const auto c = Value(*h->Child(legal[i]));
        for (size_t k = 0; k < reach.size(); ++k) {
          q += mixture_[k].weight * reach[k] * c[k];
        }
      }
      if (i == 0 || q > best_q + kTieTolerance) {
        best = legal[i];
        best_q = q;
      }
    }
    best_[key] = best;
    return best;
  }

  const Game& game_;
  Player player_;
  const OpponentMixture& mixture_;
  long budget_;
  long visited_ = 0;
  std::map<InfoStateKey, std::vector<std::pair<std::unique_ptr<State>, Reach>>>
      infosets_;
  std::map<InfoStateKey, Action> best_;
};

}  // namespace

BestResponseResult ExactBestResponse(const Game& game, Player player,
                                     const OpponentMixture& mixture,
                                     long node_budget) {
  BestResponseComputer br(game, player, mixture, node_budget);
  BestResponseResult out;
  out.value = br.RootValue();
  out.policy = br.Policy();
  return out;
}

double ExpectedReturnAgainst(const Game& game, Player player,
                             const PolicyPtr& policy,
                             const OpponentMixture& mixture) {
  ValidateMixture(mixture, game.NumPlayers(), player);
  double total = 0.0;
  for (const auto& profile : mixture) {
    if (profile.weight <= 0.0) continue;
    std::vector<PolicyPtr> pols = profile.policies;
    pols[player] = policy;
    total += profile.weight * ExpectedReturns(game, pols)[player];
  }
  return total;
}

}  // namespace sgpsro
