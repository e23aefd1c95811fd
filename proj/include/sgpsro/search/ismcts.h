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

#ifndef SGPSRO_SEARCH_ISMCTS_H_
#define SGPSRO_SEARCH_ISMCTS_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

#include "sgpsro/belief/belief_model.h"
#include "sgpsro/belief/posterior.h"
#include "sgpsro/search/estimators.h"

namespace sgpsro {

inline constexpr int kDefaultSimulations = 300;

// 20 for IR and IE, 40 for SW, 100 for NBS.
double DefaultCuct(BackpropType type);

struct SearchConfig {
  int simulations = kDefaultSimulations;
  std::optional<double> c_uct;  // DefaultCuct(backprop) when unset
  BackpropType backprop = BackpropType::kIR;
  std::uint64_t seed = 0;

  double cuct() const { return c_uct ? *c_uct : DefaultCuct(backprop); }
  void Validate() const;
};

struct ChildStats {
  Action action;
  double prior = 0.0;
  int visits = 0;
  double value_sum = 0.0;
};

struct SearchNode {
  std::vector<ChildStats> children;  // ascending action id
  int total_visits = 0;
};

// Index of argmax_c Q(c) + c_uct p(c) sqrt(total) / (visits(c) + 1), with
// Q = value_sum / visits and Q = 0 for unvisited children; ties go to the
// lowest action id. Throws if `node` has no children.
int MaxPuctIndex(const SearchNode& node, double c_uct);
Action MaxPuct(const SearchNode& node, double c_uct);

// What a search needs besides the query state.
struct SearchInputs {
  const BeliefModel* belief = nullptr;
  const OpponentMixture* opponents = nullptr;
  const LeafEvaluator* evaluator = nullptr;
  // Uniform priors when null.
  const PolicyEstimator* prior = nullptr;
};

struct SearchResult {
  Action action = kInvalidAction;
  ActionsAndProbs policy;  // visit frequencies over the root's legal actions
  std::vector<ChildStats> root_children;
  int root_visits = 0;
  int tree_size = 0;
  // Mean back-propagated value of the chosen child.
  double action_value = 0.0;
};

// Information-set MCTS from `state`, where `searcher` must be to act. The
// root is expanded before the first simulation, so every simulation passes
// through the root's selection step. Each simulation samples a world state
// from the belief model and an opponent profile from its type posterior,
// descends by MaxPuct over the searcher's information states, expands one
// new node, and backs up the leaf value along the visited (s, a) pairs.
SearchResult IsmctsSearch(const State& state, Player searcher,
                          const SearchInputs& inputs,
                          const SearchConfig& config);

}  // namespace sgpsro

#endif  // SGPSRO_SEARCH_ISMCTS_H_
