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

#ifndef SGPSRO_EVAL_TOURNAMENT_H_
#define SGPSRO_EVAL_TOURNAMENT_H_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "sgpsro/game/game.h"
#include "sgpsro/psro/final_agent.h"

namespace sgpsro {

struct TournamentConfig {
  int episodes_per_pair = 1000;
  std::uint64_t seed = 0;
  // Disagreement point of the Nash products; zeros by default.
  std::vector<double> d;
  // Average per-episode products instead of multiplying mean payoffs.
  bool per_episode_nbs = false;

  void Validate() const;
};

using Matrix = std::vector<std::vector<double>>;

// Two-player round robin over ordered pairs (row, column), self-pairs
// included. Every episode tosses a coin for the row agent's seat.
struct TournamentResult {
  std::vector<std::string> agents;
  Matrix payoff;         // row agent's mean return against the column agent
  Matrix column_payoff;  // column agent's mean return in the same games
  Matrix payoff_stddev;  // sample standard deviation of the row returns
  Matrix welfare;        // payoff + column_payoff
  Matrix nash_product;   // (payoff - d) * (column_payoff - d)
  std::vector<std::vector<int>> episodes;
  std::vector<std::vector<int>>
      row_first;  // episodes with the row agent in seat 0
  std::vector<std::vector<std::string>> errors;  // empty when the pair ran

  int size() const { return static_cast<int>(agents.size()); }
  nlohmann::json ToJson() const;
};

TournamentResult RunTournament(const std::vector<AgentPtr>& agents,
                               const Game& game,
                               const TournamentConfig& config);

// Assembles the derived matrices from per-pair return streams; exposed so
// synthetic streams can be checked. streams[r][c][e] = {row, column} return.
TournamentResult TournamentFromStreams(
    const std::vector<std::string>& agents,
    const std::vector<std::vector<std::vector<std::array<double, 2>>>>& streams,
    const TournamentConfig& config);

struct RankedAgent {
  std::string agent;
  int index = 0;
  double score = 0.0;
};

// Solves the agent-versus-agent game (row player: payoff, column player:
// column_payoff) with the named meta-solver and ranks agents by expected
// payoff as the row player against the column player's strategy (its
// marginal for joint devices). Ties keep the original order.
std::vector<RankedAgent> EquilibriumResponseRank(
    const TournamentResult& result, const std::string& meta_solver);

// Unordered pairs of distinct agents are sorted by increasing |payoff -
// column_payoff| and scored M, M-1, ..., 1 (tied pairs share the average);
// an agent's score is the sum over its pairs. Highest score first.
std::vector<RankedAgent> BordaFairnessRank(const TournamentResult& result);

}  // namespace sgpsro

#endif  // SGPSRO_EVAL_TOURNAMENT_H_
