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

#include "sgpsro/search/ismcts.h"

#include <cmath>
#include <utility>

#include "sgpsro/core/error.h"

namespace sgpsro {
namespace {

using Tree = std::unordered_map<InfoStateKey, SearchNode, InfoStateKeyHash>;

SearchNode NewNode(const State& h, Player searcher,
                   const PolicyEstimator* prior) {
  const auto legal = h.LegalActions();
  const InfoStateKey key = h.InfoStateKeyFor(searcher);
  const ActionsAndProbs p =
      prior ? prior->Prior(key, legal) : UniformOver(legal);
  SearchNode node;
  node.children.reserve(legal.size());
  for (Action a : legal) node.children.push_back({a, GetProb(p, a), 0, 0.0});
  return node;
}

}  // namespace

double DefaultCuct(BackpropType type) {
  switch (type) {
    case BackpropType::kIR:
    case BackpropType::kIE:
      return 20.0;
    case BackpropType::kSW:
      return 40.0;
    case BackpropType::kNBS:
      return 100.0;
  }
  return 20.0;
}

void SearchConfig::Validate() const {
  if (simulations < 1) {
    Fail(ErrorCode::kInvalidArgument, "simulations must be >= 1, got ",
         simulations);
  }
  if (c_uct && (!(*c_uct >= 0.0) || !std::isfinite(*c_uct))) {
    Fail(ErrorCode::kInvalidArgument, "c_uct must be >= 0, got ", *c_uct);
  }
}

int MaxPuctIndex(const SearchNode& node, double c_uct) {
  if (node.children.empty()) {
    Fail(ErrorCode::kInvalidArgument, "MaxPuct on a node without children");
  }
  const double sqrt_total = std::sqrt(static_cast<double>(node.total_visits));
  int best = -1;
  double best_score = 0.0;
  for (size_t k = 0; k < node.children.size(); ++k) {
    const ChildStats& c = node.children[k];
    const double q = c.visits > 0 ? c.value_sum / c.visits : 0.0;
    const double score = q + c_uct * c.prior * sqrt_total / (c.visits + 1);
    if (best < 0 || score > best_score ||
        (score == best_score && c.action < node.children[best].action)) {
      best = static_cast<int>(k);
      best_score = score;
    }
  }
  return best;
}

Action MaxPuct(const SearchNode& node, double c_uct) {
  return node.children[MaxPuctIndex(node, c_uct)].action;
}

SearchResult IsmctsSearch(const State& state, Player searcher,
                          const SearchInputs& inputs,
                          const SearchConfig& config) {
  config.Validate();
  if (inputs.belief == nullptr || inputs.opponents == nullptr ||
      inputs.evaluator == nullptr) {
    Fail(ErrorCode::kInvalidArgument,
         "search needs a belief model, an opponent mixture and an evaluator");
  }
  if (state.CurrentPlayer() != searcher) {
    Fail(ErrorCode::kInvalidArgument, "search from a state where player ",
         state.CurrentPlayer(), " acts, not searcher ", searcher);
  }
  const double c_uct = config.cuct();
  const OpponentMixture& mixture = *inputs.opponents;
  ValidateMixture(mixture, state.NumPlayers(), searcher);
  Rng rng(config.seed);
  Tree tree;
  const InfoStateKey root_key = state.InfoStateKeyFor(searcher);
  SearchNode& root =
      tree.emplace(root_key, NewNode(state, searcher, inputs.prior))
          .first->second;

  std::vector<std::pair<SearchNode*, int>> path;
  for (int sim = 0; sim < config.simulations; ++sim) {
    std::unique_ptr<State> h = inputs.belief->Sample(state, searcher, rng);
    const OpponentProfile& profile =
        mixture[SampleOpponentProfile(*h, searcher, mixture, rng,
                                      /*prior_fallback=*/true)];
    path.clear();
    double value = 0.0;
    while (true) {
      if (h->IsTerminal()) {
        value = BackpropValue(h->Returns(), searcher, config.backprop);
        break;
      }
      const Player p = h->CurrentPlayer();
      if (p == kChancePlayerId) {
        h = h->Child(SampleAction(h->ChanceOutcomes(), rng));
        continue;
      }
      if (p != searcher) {
        h = h->Child(profile.policies[p]->SampleAction(*h, p, rng));
        continue;
      }
      const InfoStateKey key = h->InfoStateKeyFor(searcher);
      auto it = tree.find(key);
      if (it == tree.end()) {
        tree.emplace(key, NewNode(*h, searcher, inputs.prior));
        value = inputs.evaluator->Evaluate(*h, searcher, profile,
                                           config.backprop, rng);
        break;
      }
      SearchNode& node = it->second;
      const int idx = MaxPuctIndex(node, c_uct);
      path.emplace_back(&node, idx);
      h = h->Child(node.children[idx].action);
    }
    if (!std::isfinite(value)) {
      Fail(ErrorCode::kInternal, "non-finite value in search");
    }
    for (auto& [node, idx] : path) {
      node->children[idx].visits += 1;
      node->children[idx].value_sum += value;
      node->total_visits += 1;
    }
  }

  SearchResult result;
  result.root_children = root.children;
  result.root_visits = root.total_visits;
  result.tree_size = static_cast<int>(tree.size());
  int best = 0;
  for (size_t k = 0; k < root.children.size(); ++k) {
    const ChildStats& c = root.children[k];
    result.policy.push_back(
        {c.action, static_cast<double>(c.visits) / root.total_visits});
    if (c.visits > root.children[best].visits) best = static_cast<int>(k);
  }
  const ChildStats& chosen = root.children[best];
  result.action = chosen.action;
  result.action_value =
      chosen.visits > 0 ? chosen.value_sum / chosen.visits : 0.0;
  return result;
}

}  // namespace sgpsro
