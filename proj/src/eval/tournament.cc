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

#include "sgpsro/eval/tournament.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sgpsro/core/error.h"
#include "sgpsro/core/payoff_tensor.h"
#include "sgpsro/eval/metrics.h"
#include "sgpsro/psro/psro.h"
#include "sgpsro/solvers/registry.h"
#include "spdlog/spdlog.h"

namespace sgpsro {
namespace {

Matrix Square(int n, double fill = 0.0) {
  return Matrix(n, std::vector<double>(n, fill));
}

std::vector<RankedAgent> SortRanked(std::vector<RankedAgent> ranked) {
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const RankedAgent& a, const RankedAgent& b) {
                     return a.score > b.score;
                   });
  return ranked;
}

void CheckComplete(const TournamentResult& r) {
  for (int i = 0; i < r.size(); ++i) {
    for (int j = 0; j < r.size(); ++j) {
      if (!std::isfinite(r.payoff[i][j]) ||
          !std::isfinite(r.column_payoff[i][j])) {
        Fail(ErrorCode::kFailedPrecondition, "payoff matrix entry (", i, ", ",
             j, ") is missing");
      }
    }
  }
}

}  // namespace

void TournamentConfig::Validate() const {
  if (episodes_per_pair < 1) {
    Fail(ErrorCode::kInvalidArgument, "episodes_per_pair must be >= 1");
  }
  if (!d.empty() && d.size() != 2) {
    Fail(ErrorCode::kInvalidArgument, "tournament d must have 2 entries");
  }
}

nlohmann::json TournamentResult::ToJson() const {
  return {{"agents", agents},
          {"payoff", payoff},
          {"column_payoff", column_payoff},
          {"payoff_stddev", payoff_stddev},
          {"welfare", welfare},
          {"nash_product", nash_product},
          {"episodes", episodes},
          {"row_first", row_first},
          {"errors", errors}};
}

TournamentResult TournamentFromStreams(
    const std::vector<std::string>& agents,
    const std::vector<std::vector<std::vector<std::array<double, 2>>>>& streams,
    const TournamentConfig& config) {
  const int n = static_cast<int>(agents.size());
  std::vector<double> d =
      config.d.empty() ? std::vector<double>{0.0, 0.0} : config.d;
  TournamentResult r;
  r.agents = agents;
  r.payoff = Square(n, NAN);
  r.column_payoff = Square(n, NAN);
  r.payoff_stddev = Square(n, NAN);
  r.welfare = Square(n, NAN);
  r.nash_product = Square(n, NAN);
  r.episodes.assign(n, std::vector<int>(n, 0));
  r.row_first.assign(n, std::vector<int>(n, 0));
  r.errors.assign(n, std::vector<std::string>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const auto& s = streams.at(i).at(j);
      r.episodes[i][j] = static_cast<int>(s.size());
      if (s.empty()) continue;
      double row = 0.0, col = 0.0, prod = 0.0;
      for (const auto& e : s) {
        row += e[0];
        col += e[1];
        prod += (e[0] - d[0]) * (e[1] - d[1]);
      }
      row /= s.size();
      col /= s.size();
      double var = 0.0;
      for (const auto& e : s) var += (e[0] - row) * (e[0] - row);
      r.payoff[i][j] = row;
      r.column_payoff[i][j] = col;
      r.payoff_stddev[i][j] =
          s.size() > 1 ? std::sqrt(var / (s.size() - 1)) : 0.0;
      const WelfareNbs w = WelfareAndNbs({row, col}, d);
      r.welfare[i][j] = w.welfare;
      r.nash_product[i][j] = config.per_episode_nbs ? prod / s.size() : w.nbs;
    }
  }
  return r;
}

TournamentResult RunTournament(const std::vector<AgentPtr>& agents,
                               const Game& game,
                               const TournamentConfig& config) {
  config.Validate();
  if (agents.size() < 2) {
    Fail(ErrorCode::kInvalidArgument, "a tournament needs >= 2 agents");
  }
  if (game.NumPlayers() != 2) {
    Fail(ErrorCode::kInvalidArgument, "tournaments are two-player");
  }
  const int n = static_cast<int>(agents.size());
  std::vector<std::string> names;
  for (const auto& a : agents) names.push_back(a->name());
  std::vector<std::vector<std::vector<std::array<double, 2>>>> streams(
      n, std::vector<std::vector<std::array<double, 2>>>(n));
  std::vector<std::vector<int>> row_first(n, std::vector<int>(n, 0));
  std::vector<std::vector<std::string>> errors(n, std::vector<std::string>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Rng rng(DeriveSeed(config.seed, static_cast<std::uint64_t>(i) * n + j));
      try {
        for (int e = 0; e < config.episodes_per_pair; ++e) {
          const bool i_first = Uniform01(rng) < 0.5;
          row_first[i][j] += i_first;
          Agent* seat[2] = {i_first ? agents[i].get() : agents[j].get(),
                            i_first ? agents[j].get() : agents[i].get()};
          seat[0]->BeginEpisode(rng);
          if (seat[1] != seat[0]) seat[1]->BeginEpisode(rng);
          auto state = game.NewInitialState();
          while (!state->IsTerminal()) {
            const Player p = state->CurrentPlayer();
            const Action a = p == kChancePlayerId
                                 ? SampleAction(state->ChanceOutcomes(), rng)
                                 : seat[p]->Act(*state, rng);
            state = state->Child(a);
          }
          const auto ret = state->Returns();
          streams[i][j].push_back(
              {i_first ? ret[0] : ret[1], i_first ? ret[1] : ret[0]});
        }
      } catch (const Error& e) {
        errors[i][j] = e.what();
        streams[i][j].clear();
        spdlog::warn("tournament pair ({}, {}) failed: {}", names[i], names[j],
                     e.what());
      }
    }
  }
  TournamentResult r = TournamentFromStreams(names, streams, config);
  r.row_first = std::move(row_first);
  r.errors = std::move(errors);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (!r.errors[i][j].empty()) r.row_first[i][j] = 0;
    }
  }
  return r;
}

std::vector<RankedAgent> EquilibriumResponseRank(
    const TournamentResult& result, const std::string& meta_solver) {
  CheckComplete(result);
  const int n = result.size();
  PayoffTensor u({n, n});
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      u.At(u.Flatten({i, j}), 0) = result.payoff[i][j];
      u.At(u.Flatten({i, j}), 1) = result.column_payoff[i][j];
    }
  }
  const MetaSolution sol = SolveMeta(meta_solver, u);
  const auto column = PlayerMetaStrategy(u, sol, 1);
  std::vector<RankedAgent> ranked;
  for (int i = 0; i < n; ++i) {
    double score = 0.0;
    for (int j = 0; j < n; ++j) score += column[j] * result.payoff[i][j];
    ranked.push_back({result.agents[i], i, score});
  }
  return SortRanked(std::move(ranked));
}

std::vector<RankedAgent> BordaFairnessRank(const TournamentResult& result) {
  CheckComplete(result);
  const int n = result.size();
  struct Pair {
    int a, b;
    double gap;
  };
  std::vector<Pair> pairs;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      pairs.push_back(
          {i, j, std::abs(result.payoff[i][j] - result.column_payoff[i][j])});
    }
  }
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const Pair& x, const Pair& y) { return x.gap < y.gap; });
  const int m = static_cast<int>(pairs.size());
  std::vector<double> score(n, 0.0);
  for (int k = 0; k < m;) {
    int end = k;
    while (end < m && pairs[end].gap == pairs[k].gap) ++end;
    // Positions k..end-1 would get m-k, ..., m-end+1; share the mean.
    const double shared = m - 0.5 * (k + end - 1);
    for (int t = k; t < end; ++t) {
      score[pairs[t].a] += shared;
      score[pairs[t].b] += shared;
    }
    k = end;
  }
  std::vector<RankedAgent> ranked;
  for (int i = 0; i < n; ++i) ranked.push_back({result.agents[i], i, score[i]});
  return SortRanked(std::move(ranked));
}

}  // namespace sgpsro
