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

#include "sgpsro/psro/final_agent.h"

#include <cmath>
#include <utility>

#include "sgpsro/core/error.h"
#include "sgpsro/policy/evaluate.h"
#include "sgpsro/psro/psro.h"
#include "spdlog/spdlog.h"

namespace sgpsro {
std::string FinalAgentModeName(FinalAgentMode mode) {
  switch (mode) {
    case FinalAgentMode::kNaive:
      return "naive";
    case FinalAgentMode::kSelfPosterior:
      return "self-posterior";
    case FinalAgentMode::kAggregate:
      return "aggregate";
    case FinalAgentMode::kRationalPlanning:
      return "rational-planning";
  }
  return "?";
}

FinalAgentMode ParseFinalAgentMode(const std::string& name) {
  for (auto mode :
       {FinalAgentMode::kNaive, FinalAgentMode::kSelfPosterior,
        FinalAgentMode::kAggregate, FinalAgentMode::kRationalPlanning}) {
    if (FinalAgentModeName(mode) == name) return mode;
  }
  Fail(ErrorCode::kInvalidArgument, "unknown final-agent mode '", name,
       "' (expected naive, self-posterior, aggregate or rational-planning)");
}

std::vector<double> SelfPosterior(const State& state, Player player,
                                  const std::vector<PolicyPtr>& catalog,
                                  const std::vector<double>& sigma) {
  if (catalog.size() != sigma.size()) {
    Fail(ErrorCode::kInvalidArgument, "catalog has ", catalog.size(),
         " policies but sigma has ", sigma.size(), " entries");
  }
  std::vector<double> w(catalog.size(), 0.0);
  double total = 0.0;
  for (size_t k = 0; k < catalog.size(); ++k) {
    if (sigma[k] <= 0.0) continue;
    w[k] = sigma[k] * PlayerReach(state, player, *catalog[k]);
    total += w[k];
  }
  if (!(total > 0.0)) return {};
  for (double& x : w) x /= total;
  return w;
}

AggregatePolicy::AggregatePolicy(std::vector<std::vector<PolicyPtr>> catalogs,
                                 std::vector<std::vector<double>> sigmas)
    : catalogs_(std::move(catalogs)), sigmas_(std::move(sigmas)) {
  if (catalogs_.size() != sigmas_.size()) {
    Fail(ErrorCode::kInvalidArgument, "one sigma per catalog required");
  }
}

ActionsAndProbs AggregatePolicy::GetStatePolicy(const State& state,
                                                Player player) const {
  const auto legal = state.LegalActions();
  const auto post =
      SelfPosterior(state, player, catalogs_.at(player), sigmas_.at(player));
  if (post.empty()) return UniformOver(legal);
  std::vector<double> mass(legal.size(), 0.0);
  for (size_t k = 0; k < post.size(); ++k) {
    if (post[k] <= 0.0) continue;
    for (const auto& [a, p] :
         catalogs_[player][k]->GetStatePolicy(state, player)) {
      const auto it = std::lower_bound(legal.begin(), legal.end(), a);
      mass[it - legal.begin()] += post[k] * p;
    }
  }
  ActionsAndProbs out;
  for (size_t i = 0; i < legal.size(); ++i) out.push_back({legal[i], mass[i]});
  return out;
}

nlohmann::json AggregatePolicy::ToJson() const {
  return {{"kind", "aggregate"}, {"sigma", sigmas_}};
}

FinalAgent::FinalAgent(std::shared_ptr<const Game> game,
                       std::vector<std::vector<PolicyPtr>> catalogs,
                       MetaSolution solution, FinalAgentMode mode,
                       RationalPlanningOptions options)
    : game_(std::move(game)),
      catalogs_(std::move(catalogs)),
      solution_(std::move(solution)),
      mode_(mode),
      options_(std::move(options)) {
  const int n = game_->NumPlayers();
  if (static_cast<int>(catalogs_.size()) != n) {
    Fail(ErrorCode::kInvalidArgument, "need one catalog per player");
  }
  std::vector<int> shape;
  for (const auto& c : catalogs_) shape.push_back(static_cast<int>(c.size()));
  const PayoffTensor shape_only(shape);
  if (solution_.is_joint()) {
    ValidateDevice(shape_only, solution_.device, 1e-6);
  } else {
    ValidateProfile(shape_only, solution_.profile, 1e-6);
  }
  for (Player p = 0; p < n; ++p) {
    sigmas_.push_back(PlayerMetaStrategy(shape_only, solution_, p));
  }
  aggregate_ = std::make_shared<AggregatePolicy>(catalogs_, sigmas_);
  episode_choice_.assign(n, -1);
  if (mode_ == FinalAgentMode::kRationalPlanning) {
    options_.search.Validate();
    for (Player p = 0; p < n; ++p) {
      mixtures_.push_back(MixtureFromSolution(catalogs_, solution_, p));
      beliefs_.push_back(
          options_.belief ? options_.belief
                          : std::make_shared<ExactBelief>(game_, mixtures_[p]));
      std::vector<PolicyPtr> uniform(n,
                                     std::make_shared<UniformRandomPolicy>());
      uniform[p] = nullptr;
      fallback_beliefs_.push_back(
          std::make_shared<ExactBelief>(game_, PureMixture(uniform)));
    }
    if (options_.value) {
      evaluator_ = std::make_shared<ValueLeafEvaluator>(options_.value);
    } else {
      evaluator_ = std::make_shared<RolloutLeafEvaluator>(options_.rollouts);
    }
  }
}

std::string FinalAgent::name() const {
  return "final:" + FinalAgentModeName(mode_);
}

void FinalAgent::BeginEpisode(Rng& rng) {
  for (size_t p = 0; p < sigmas_.size(); ++p) {
    episode_choice_[p] = SampleIndex(sigmas_[p], rng);
  }
}

ActionsAndProbs FinalAgent::ActionDistribution(const State& state) const {
  const Player p = state.CurrentPlayer();
  if (mode_ == FinalAgentMode::kAggregate) {
    return aggregate_->GetStatePolicy(state, p);
  }
  if (mode_ != FinalAgentMode::kSelfPosterior) {
    Fail(ErrorCode::kFailedPrecondition, "no exact action distribution for ",
         name());
  }
  // Expected play of the resampling procedure.
  const auto post = SelfPosterior(state, p, catalogs_[p], sigmas_[p]);
  const auto legal = state.LegalActions();
  if (post.empty()) return UniformOver(legal);
  ActionsAndProbs out;
  for (Action a : legal) {
    double m = 0.0;
    for (size_t k = 0; k < post.size(); ++k) {
      if (post[k] > 0.0) {
        m += post[k] * catalogs_[p][k]->ActionProbability(state, p, a);
      }
    }
    out.push_back({a, m});
  }
  return out;
}

const BeliefModel& FinalAgent::BeliefFor(const State& state,
                                         Player player) const {
  const BeliefModel& primary = *beliefs_[player];
  if (options_.belief) return primary;
  try {
    primary.Distribution(state, player);
    return primary;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kResourceExhausted) throw;
    ++fallbacks_;
    spdlog::debug(
        "rational planning: inconsistent history ({}); resetting "
        "to the prior",
        e.what());
    return *fallback_beliefs_[player];
  }
}

std::vector<double> FinalAgent::TypePosterior(const State& state) const {
  if (mode_ != FinalAgentMode::kRationalPlanning) {
    Fail(ErrorCode::kFailedPrecondition,
         "type posterior needs rational planning");
  }
  const Player p = state.CurrentPlayer();
  const auto& mixture = mixtures_[p];
  std::vector<double> post(mixture.size(), 0.0);
  double total = 0.0;
  for (const auto& wb : BeliefFor(state, p).Distribution(state, p)) {
    if (wb.probability <= 0.0) continue;
    std::vector<double> given;
    try {
      given = OpponentTypePosterior(*wb.state, p, mixture);
    } catch (const Error&) {
      continue;
    }
    for (size_t k = 0; k < post.size(); ++k) {
      post[k] += wb.probability * given[k];
    }
    total += wb.probability;
  }
  if (!(total > 0.0)) {
    for (size_t k = 0; k < post.size(); ++k) post[k] = mixture[k].weight;
    return post;
  }
  for (double& x : post) x /= total;
  return post;
}

SearchResult FinalAgent::Plan(const State& state) const {
  if (mode_ != FinalAgentMode::kRationalPlanning) {
    Fail(ErrorCode::kFailedPrecondition, "Plan needs rational planning");
  }
  const Player p = state.CurrentPlayer();
  SearchInputs inputs;
  inputs.belief = &BeliefFor(state, p);
  inputs.opponents = &mixtures_[p];
  inputs.evaluator = evaluator_.get();
  inputs.prior = options_.prior.get();
  SearchConfig sc = options_.search;
  sc.seed =
      DeriveSeed(options_.search.seed, state.InfoStateKeyFor(p).StableHash());
  return IsmctsSearch(state, p, inputs, sc);
}

Action FinalAgent::Act(const State& state, Rng& rng) {
  const Player p = state.CurrentPlayer();
  if (p < 0) {
    Fail(ErrorCode::kFailedPrecondition, "agent asked to act at a ",
         state.IsTerminal() ? "terminal" : "chance", " state");
  }
  switch (mode_) {
    case FinalAgentMode::kNaive: {
      if (episode_choice_[p] < 0) {
        episode_choice_[p] = SampleIndex(sigmas_[p], rng);
      }
      return catalogs_[p][episode_choice_[p]]->SampleAction(state, p, rng);
    }
    case FinalAgentMode::kSelfPosterior: {
      const auto post = SelfPosterior(state, p, catalogs_[p], sigmas_[p]);
      if (post.empty()) {
        ++fallbacks_;
        spdlog::debug("self-posterior: zero reach at {}; playing uniformly",
                      state.InfoStateKeyFor(p).ToString());
        return SampleAction(UniformOver(state.LegalActions()), rng);
      }
      const int k = SampleIndex(post, rng);
      return catalogs_[p][k]->SampleAction(state, p, rng);
    }
    case FinalAgentMode::kAggregate:
      return SampleAction(aggregate_->GetStatePolicy(state, p), rng);
    case FinalAgentMode::kRationalPlanning: {
      const Player me = p;
      SearchInputs inputs;
      inputs.belief = &BeliefFor(state, me);
      inputs.opponents = &mixtures_[me];
      inputs.evaluator = evaluator_.get();
      inputs.prior = options_.prior.get();
      SearchConfig sc = options_.search;
      sc.seed = DeriveSeed(options_.search.seed, rng());
      ++decisions_;
      return IsmctsSearch(state, me, inputs, sc).action;
    }
  }
  Fail(ErrorCode::kInternal, "unhandled final-agent mode");
}

}  // namespace sgpsro
