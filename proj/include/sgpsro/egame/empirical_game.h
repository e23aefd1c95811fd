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

#ifndef SGPSRO_EGAME_EMPIRICAL_GAME_H_
#define SGPSRO_EGAME_EMPIRICAL_GAME_H_

#include <cstdint>
#include <memory>
#include <vector>

#include "sgpsro/core/payoff_tensor.h"
#include "sgpsro/core/random.h"
#include "sgpsro/game/game.h"
#include "sgpsro/policy/policy.h"

namespace sgpsro {

struct EntryConfig {
  // Exact tree-walk expectation instead of simulation (Kuhn, matrix games,
  // small Deal or No Deal variants).
  bool exact = false;
  int num_sims = 200;
  std::uint64_t seed = 0;
  // Worker threads for filling entries; results do not depend on it because
  // every entry draws from its own derived seed.
  int num_threads = 1;
};

struct EntryEstimate {
  std::vector<double> means;
  int count = 0;  // simulated episodes; 0 for exact entries
};

// Mean returns of the joint pure strategy `policies` over `num_sims`
// episodes.
EntryEstimate EstimateEntry(const Game& game,
                            const std::vector<PolicyPtr>& policies,
                            int num_sims, Rng& rng);

// Per-player oracle catalogs plus the payoff tensor over them. Entries are
// estimated once, when first missing, and never re-simulated.
class EmpiricalGame {
 public:
  EmpiricalGame(std::shared_ptr<const Game> game, EntryConfig config);

  int num_players() const { return static_cast<int>(catalogs_.size()); }
  const std::vector<PolicyPtr>& catalog(Player p) const { return catalogs_[p]; }
  std::vector<int> shape() const;

  // Appends a policy to player p's catalog; new cells start missing.
  void AddPolicy(Player p, PolicyPtr policy);

  // Estimates every missing entry; returns how many were filled.
  int FillMissingEntries();
  bool IsComplete() const;

  const PayoffTensor& tensor() const { return tensor_; }
  const std::vector<int>& counts() const { return counts_; }
  bool filled(int flat) const { return filled_[flat]; }

  // Restores an entry, e.g. from a checkpoint.
  void SetEntry(const std::vector<int>& joint, const std::vector<double>& means,
                int count);

  const Game& game() const { return *game_; }
  std::shared_ptr<const Game> game_ptr() const { return game_; }
  const EntryConfig& config() const { return config_; }

  // Seed of the entry at `joint`; independent of fill order.
  std::uint64_t EntrySeed(const std::vector<int>& joint) const;

 private:
  void Resize();

  std::shared_ptr<const Game> game_;
  EntryConfig config_;
  std::vector<std::vector<PolicyPtr>> catalogs_;
  PayoffTensor tensor_;
  std::vector<int> counts_;
  std::vector<bool> filled_;
};

}  // namespace sgpsro

#endif  // SGPSRO_EGAME_EMPIRICAL_GAME_H_
