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

#include "sgpsro/belief/belief_model.h"

#include "sgpsro/core/error.h"

namespace sgpsro {
namespace {

constexpr size_t kMaxCachedKeys = 200'000;

}  // namespace

std::string BeliefKindName(BeliefKind kind) {
  switch (kind) {
    case BeliefKind::kExact:
      return "exact";
    case BeliefKind::kUniform:
      return "uniform";
    case BeliefKind::kCheat:
      return "cheat";
    case BeliefKind::kFixedFirst:
      return "fixed-first";
    case BeliefKind::kFixedLast:
      return "fixed-last";
    case BeliefKind::kLearned:
      return "learned";
  }
  return "?";
}

BeliefKind ParseBeliefKind(const std::string& name) {
  for (BeliefKind k : {BeliefKind::kExact, BeliefKind::kUniform,
                       BeliefKind::kCheat, BeliefKind::kFixedFirst,
                       BeliefKind::kFixedLast, BeliefKind::kLearned}) {
    if (BeliefKindName(k) == name) return k;
  }
  Fail(ErrorCode::kInvalidArgument, "unknown belief model '", name,
       "' (expected exact, uniform, cheat, fixed-first, fixed-last or "
       "learned)");
}

std::shared_ptr<const EnumeratingBelief::Entry> EnumeratingBelief::Lookup(
    const State& state, Player searcher) const {
  const InfoStateKey key = state.InfoStateKeyFor(searcher);
  {
    std::shared_lock lock(mu_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  auto histories = game_->ConsistentHistories(state, searcher, node_budget_);
  if (histories.empty()) {
    Fail(ErrorCode::kFailedPrecondition, "no consistent history for ",
         key.ToString());
  }
  auto entry = std::make_shared<Entry>();
  entry->probs = Weigh(histories, searcher);
  double total = 0.0;
  for (double p : entry->probs) total += p;
  if (!(total > 0.0)) {
    Fail(ErrorCode::kFailedPrecondition, "belief has no mass at ",
         key.ToString());
  }
  for (double& p : entry->probs) p /= total;
  for (const auto& wh : histories) {
    entry->histories.push_back(wh.state->ActionHistory());
  }
  std::unique_lock lock(mu_);
  if (cache_.size() >= kMaxCachedKeys) cache_.clear();
  cache_.emplace(key, entry);
  return entry;
}

std::unique_ptr<State> EnumeratingBelief::Sample(const State& state,
                                                 Player searcher,
                                                 Rng& rng) const {
  const auto entry = Lookup(state, searcher);
  const int idx = SampleIndex(entry->probs, rng);
  return StateFromActions(*game_, entry->histories[idx]);
}

std::vector<WorldBelief> EnumeratingBelief::Distribution(
    const State& state, Player searcher) const {
  const auto entry = Lookup(state, searcher);
  std::vector<WorldBelief> out;
  for (size_t k = 0; k < entry->histories.size(); ++k) {
    out.push_back(
        {StateFromActions(*game_, entry->histories[k]), entry->probs[k]});
  }
  return out;
}

ExactBelief::ExactBelief(std::shared_ptr<const Game> game,
                         OpponentMixture mixture, long node_budget)
    : EnumeratingBelief(std::move(game), node_budget),
      mixture_(std::move(mixture)) {
  if (mixture_.empty()) {
    Fail(ErrorCode::kInvalidArgument, "exact belief needs an opponent mixture");
  }
}

std::vector<double> ExactBelief::Weigh(
    const std::vector<WeightedHistory>& histories, Player searcher) const {
  std::vector<double> w;
  w.reserve(histories.size());
  for (const auto& wh : histories) {
    double reach = 0.0;
    for (const auto& profile : mixture_) {
      if (profile.weight > 0.0) {
        reach += profile.weight * OpponentReach(*wh.state, searcher, profile);
      }
    }
    w.push_back(wh.chance_reach * reach);
  }
  return w;
}

std::vector<double> UniformBelief::Weigh(
    const std::vector<WeightedHistory>& histories, Player) const {
  return std::vector<double>(histories.size(), 1.0);
}

std::vector<double> FixedBelief::Weigh(
    const std::vector<WeightedHistory>& histories, Player) const {
  std::vector<double> w(histories.size(), 0.0);
  w[last_ ? histories.size() - 1 : 0] = 1.0;
  return w;
}

std::unique_ptr<State> CheatBelief::Sample(const State& state, Player,
                                           Rng&) const {
  return state.Clone();
}

std::vector<WorldBelief> CheatBelief::Distribution(const State& state,
                                                   Player) const {
  std::vector<WorldBelief> out;
  out.push_back({state.Clone(), 1.0});
  return out;
}

}  // namespace sgpsro
