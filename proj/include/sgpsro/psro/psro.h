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

#ifndef SGPSRO_PSRO_PSRO_H_
#define SGPSRO_PSRO_PSRO_H_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "sgpsro/core/payoff_tensor.h"
#include "sgpsro/egame/empirical_game.h"
#include "sgpsro/egame/normal_form.h"
#include "sgpsro/game/registry.h"
#include "sgpsro/oracles/oracle.h"

namespace sgpsro {

struct PsroConfig {
  GameSpec game;
  std::string meta_solver = "rm";
  nlohmann::json solver_options = nlohmann::json::object();
  OracleSpec oracle;
  int epochs = 10;  // T
  EntryConfig entries;
  std::uint64_t seed = 0;
  // Per-player best responses of one epoch run on up to this many threads.
  int num_threads = 1;
  // Written after every epoch when non-empty.
  std::string checkpoint_dir;

  void Validate() const;
  nlohmann::json ToJson() const;
  // Field-precise errors such as "psro.epochs: must be >= 0".
  static PsroConfig FromJson(const nlohmann::json& j);
};

struct EpochRecord {
  int epoch = 0;
  MetaSolution solution;
  std::vector<nlohmann::json> oracle_summaries;  // one per player
  std::vector<std::string> errors;
  int entries_filled = 0;
  double seconds = 0.0;
  PayoffTensor tensor;

  nlohmann::json ToJson() const;  // without the tensor
};

// Alg. 1: catalogs start with the uniform-random policy; every epoch adds one
// response per player, all computed against the previous meta-solution, then
// fills the missing tensor entries and re-solves. A failing oracle is
// recorded and replaced by the uniform policy so catalogs still grow by one;
// a failing solver is recorded and replaced by the uniform profile.
class Psro {
 public:
  explicit Psro(PsroConfig config);

  // Reloads a checkpoint directory. Fields that do not affect past epochs
  // (epochs, num_threads, checkpoint_dir) may be changed afterwards through
  // mutable_config().
  static std::unique_ptr<Psro> Resume(const std::string& dir);

  void RunEpoch();
  // Runs epochs until config().epochs are done.
  void Run();

  void SaveCheckpoint(const std::string& dir) const;

  int epoch() const { return epoch_; }
  const PsroConfig& config() const { return config_; }
  PsroConfig& mutable_config() { return config_; }
  const EmpiricalGame& empirical_game() const { return *egame_; }
  const MetaSolution& solution() const { return solution_; }
  const std::vector<EpochRecord>& history() const { return history_; }
  std::shared_ptr<const Game> game() const { return game_; }
  std::vector<std::vector<PolicyPtr>> catalogs() const;

 private:
  Psro(PsroConfig config, bool seed_catalogs);
  void Solve(EpochRecord& record);

  PsroConfig config_;
  std::shared_ptr<const Game> game_;
  std::unique_ptr<EmpiricalGame> egame_;
  MetaSolution solution_;
  std::vector<EpochRecord> history_;
  int epoch_ = 0;
};

// Runs PSRO for config.epochs epochs.
std::unique_ptr<Psro> RunPsro(const PsroConfig& config);

// The meta-strategy of `player` over its own catalog: its profile entry for
// independent solutions, its marginal for joint devices.
std::vector<double> PlayerMetaStrategy(const PayoffTensor& shape_only,
                                       const MetaSolution& solution,
                                       Player player);

}  // namespace sgpsro

#endif  // SGPSRO_PSRO_PSRO_H_
