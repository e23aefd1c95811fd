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

#include "sgpsro/belief/posterior.h"

#include <cmath>

#include "sgpsro/core/error.h"

namespace sgpsro {

OpponentMixture MixtureFromSolution(
    const std::vector<std::vector<PolicyPtr>>& catalogs,
    const MetaSolution& solution, Player player) {
  std::vector<int> shape;
  for (const auto& c : catalogs) shape.push_back(static_cast<int>(c.size()));
  const PayoffTensor shape_only(shape);
  OpponentMixture mixture;
  double total = 0.0;
  for (const auto& entry : OpponentDistribution(shape_only, solution, player)) {
    OpponentProfile profile;
    profile.policies.resize(catalogs.size());
    profile.joint.assign(catalogs.size(), -1);
    for (size_t p = 0; p < catalogs.size(); ++p) {
      if (static_cast<Player>(p) == player) continue;
      profile.policies[p] = catalogs[p].at(entry.joint[p]);
      profile.joint[p] = entry.joint[p];
    }
    profile.weight = entry.weight;
    total += entry.weight;
    mixture.push_back(std::move(profile));
  }
  if (mixture.empty() || !(total > 0.0)) {
    Fail(ErrorCode::kInvalidArgument, "meta-solution has no opponent mass");
  }
  for (auto& profile : mixture) profile.weight /= total;
  return mixture;
}

OpponentMixture PureMixture(std::vector<PolicyPtr> policies) {
  OpponentMixture mixture(1);
  mixture[0].policies = std::move(policies);
  mixture[0].weight = 1.0;
  return mixture;
}

nlohmann::json MixtureToJson(const OpponentMixture& mixture) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& profile : mixture) {
    nlohmann::json e = {{"weight", profile.weight}};
    if (!profile.joint.empty()) {
      e["joint"] = profile.joint;
    } else {
      nlohmann::json pols = nlohmann::json::array();
      for (const auto& p : profile.policies) {
        pols.push_back(p ? p->ToJson() : nlohmann::json());
      }
      e["policies"] = std::move(pols);
    }
    out.push_back(std::move(e));
  }
  return out;
}

OpponentMixture MixtureFromJson(const nlohmann::json& j,
                                const PolicyResolver& resolver) {
  if (!j.is_array()) {
    Fail(ErrorCode::kInvalidArgument, "opponent mixture must be an array");
  }
  OpponentMixture mixture;
  for (const auto& e : j) {
    OpponentProfile profile;
    profile.weight = e.at("weight").get<double>();
    if (e.contains("joint")) {
      if (!resolver.by_index) {
        Fail(ErrorCode::kInvalidArgument,
             "mixture references catalogs but no catalogs were given");
      }
      profile.joint = e.at("joint").get<std::vector<int>>();
      for (size_t p = 0; p < profile.joint.size(); ++p) {
        profile.policies.push_back(
            profile.joint[p] < 0
                ? nullptr
                : resolver.by_index(static_cast<Player>(p), profile.joint[p]));
      }
    } else {
      for (const auto& pj : e.at("policies")) {
        profile.policies.push_back(pj.is_null() ? nullptr
                                                : resolver.inline_policy(pj));
      }
    }
    mixture.push_back(std::move(profile));
  }
  return mixture;
}

void ValidateMixture(const OpponentMixture& mixture, int num_players,
                     Player searcher) {
  if (mixture.empty()) {
    Fail(ErrorCode::kInvalidArgument, "opponent mixture is empty");
  }
  double total = 0.0;
  for (const auto& profile : mixture) {
    if (!std::isfinite(profile.weight) || profile.weight < 0.0) {
      Fail(ErrorCode::kInvalidArgument, "bad opponent weight ", profile.weight);
    }
    if (static_cast<int>(profile.policies.size()) != num_players) {
      Fail(ErrorCode::kInvalidArgument, "opponent profile has ",
           profile.policies.size(), " slots, game has ", num_players,
           " players");
    }
    for (int p = 0; p < num_players; ++p) {
      if (p != searcher && !profile.policies[p]) {
        Fail(ErrorCode::kInvalidArgument, "no policy for opponent ", p);
      }
    }
    total += profile.weight;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    Fail(ErrorCode::kInvalidArgument, "opponent weights sum to ", total);
  }
}

double OpponentReach(const State& state, Player searcher,
                     const OpponentProfile& profile) {
  double reach = 1.0;
  std::unique_ptr<State> cursor = state.game().NewInitialState();
  for (const auto& pa : state.History()) {
    if (pa.player >= 0 && pa.player != searcher) {
      reach *= profile.policies[pa.player]->ActionProbability(
          *cursor, pa.player, pa.action);
      if (reach == 0.0) return 0.0;
    }
    cursor = cursor->Child(pa.action);
  }
  return reach;
}

namespace {

// Prior times reach; all zero when no profile reaches `h`.
std::vector<double> TypeWeights(const State& h, Player searcher,
                                const OpponentMixture& mixture, double* total) {
  std::vector<double> w(mixture.size(), 0.0);
  *total = 0.0;
  for (size_t k = 0; k < mixture.size(); ++k) {
    if (mixture[k].weight <= 0.0) continue;
    w[k] = mixture[k].weight * OpponentReach(h, searcher, mixture[k]);
    *total += w[k];
  }
  return w;
}

}  // namespace

std::vector<double> OpponentTypePosterior(const State& h, Player searcher,
                                          const OpponentMixture& mixture) {
  double total;
  std::vector<double> post = TypeWeights(h, searcher, mixture, &total);
  if (!(total > 0.0)) {
    Fail(ErrorCode::kInvalidArgument,
         "history has zero reach under every opponent profile");
  }
  for (double& p : post) p /= total;
  return post;
}

int SampleOpponentProfile(const State& h, Player searcher,
                          const OpponentMixture& mixture, Rng& rng,
                          bool prior_fallback) {
  double total;
  std::vector<double> w = TypeWeights(h, searcher, mixture, &total);
  if (!(total > 0.0)) {
    if (!prior_fallback) {
      Fail(ErrorCode::kInvalidArgument,
           "history has zero reach under every opponent profile");
    }
    for (size_t k = 0; k < mixture.size(); ++k) w[k] = mixture[k].weight;
  }
  return SampleIndex(w, rng);
}

std::vector<WorldBelief> ExactPosterior(const State& state, Player searcher,
                                        const OpponentMixture& mixture,
                                        long node_budget) {
  auto histories =
      state.game().ConsistentHistories(state, searcher, node_budget);
  std::vector<WorldBelief> out;
  out.reserve(histories.size());
  double total = 0.0;
  for (auto& wh : histories) {
    double reach = 0.0;
    for (const auto& profile : mixture) {
      if (profile.weight > 0.0) {
        reach += profile.weight * OpponentReach(*wh.state, searcher, profile);
      }
    }
    const double mass = wh.chance_reach * reach;
    total += mass;
    out.push_back({std::move(wh.state), mass});
  }
  if (!(total > 0.0)) {
    Fail(ErrorCode::kFailedPrecondition,
         "no history consistent with the information state has positive "
         "probability under the opponent mixture");
  }
  for (auto& wb : out) wb.probability /= total;
  return out;
}

}  // namespace sgpsro
