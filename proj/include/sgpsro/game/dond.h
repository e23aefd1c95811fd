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

#ifndef SGPSRO_GAME_DOND_H_
#define SGPSRO_GAME_DOND_H_

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "sgpsro/core/random.h"
#include "sgpsro/game/game.h"

// Deal or No Deal: two players bargain over a public pool of items. Each
// player privately values every item type; the values of the whole pool add
// up to the same total for both players. Players alternate. The first move is
// a proposal; afterwards the mover may either accept the standing proposal or
// make a new one. A proposal is the vector of counts the proposer keeps. If no
// proposal is accepted within `max_turns` moves, both players get 0.

namespace sgpsro {

struct DondParams {
  int num_item_types = 3;
  int min_pool = 5;  // inclusive range of the total item count
  int max_pool = 7;
  int total_value = 10;
  int max_turns = 10;
  // Smallest count of any one item type in a pool. The default of 1 makes
  // every item type appear in every pool.
  int min_item_count = 1;

  void Validate() const;
  bool operator==(const DondParams&) const = default;
};

// Small parameterization for exact posteriors and exact best responses.
DondParams MiniDondParams();

struct DondInstance {
  std::vector<int> pool;
  std::vector<int> values[2];

  bool operator==(const DondInstance& o) const {
    return pool == o.pool && values[0] == o.values[0] &&
           values[1] == o.values[1];
  }
};

// Constraint checks for one instance; returns an empty string when `inst`
// satisfies the pool range, both value totals, full coverage
// (v1 + v2 > 0 elementwise) and overlap (v1 . v2 not identically zero).
std::string DondInstanceViolation(const DondInstance& inst,
                                  const DondParams& params);

// Every pool admitted by `params` in lexicographic order.
std::vector<std::vector<int>> DondEnumeratePools(const DondParams& params);

// Every nonnegative integer vector v with v . pool == total, lexicographic.
std::vector<std::vector<int>> DondValueVectors(const std::vector<int>& pool,
                                               int total);

// All valid instances, ordered by pool, then v1, then v2. An empty instance
// space yields an empty list.
std::vector<DondInstance> DondEnumerateInstances(const DondParams& params);

// Valid instances for one fixed pool.
std::vector<DondInstance> DondInstancesForPool(const std::vector<int>& pool,
                                               int total_value);

// Uniform draw from `db`. Throws on an empty database.
const DondInstance& DondSampleInstance(const std::vector<DondInstance>& db,
                                       Rng& rng);

// Database text format: one instance per line, "p1,p2,p3 a1,a2,a3 b1,b2,b3"
// (pool, player-1 values, player-2 values); blank lines and lines starting
// with '#' are ignored.
std::string DondFormatDatabase(const std::vector<DondInstance>& db);
std::vector<DondInstance> DondParseDatabase(const std::string& text);
std::vector<DondInstance> DondReadDatabase(const std::string& path);
void DondWriteDatabase(const std::vector<DondInstance>& db,
                       const std::string& path);

class DondGame : public Game {
 public:
  // Uses `instances` as the chance database when non-empty, otherwise
  // enumerates the instance space of `params`. Every database instance must
  // satisfy the constraints of `params`.
  explicit DondGame(DondParams params = {},
                    std::vector<DondInstance> instances = {},
                    std::string name = "dond");

  std::string Id() const override { return name_; }
  int NumPlayers() const override { return 2; }
  std::unique_ptr<State> NewInitialState() const override;
  double MinUtility() const override { return 0.0; }
  double MaxUtility() const override { return params_.total_value; }
  int MaxGameLength() const override { return params_.max_turns + 1; }
  double DisagreementUtility() const override { return 0.0; }

  std::vector<WeightedHistory> ConsistentHistories(
      const State& state, Player player,
      long node_budget = 1'000'000) const override;

  const DondParams& params() const { return params_; }
  const std::vector<DondInstance>& instances() const { return instances_; }
  int radix() const { return params_.max_pool + 1; }
  Action accept_action() const { return accept_action_; }

  // Database indices whose pool and seat-`player` values match.
  const std::vector<int>& InstancesMatching(const std::vector<int>& pool,
                                            const std::vector<int>& values,
                                            Player player) const;

  // Number of distinct (pool, own values) observations for `player`.
  int NumPrivateTypes(Player player) const;
  // Number of distinct value vectors held by `player` across the database.
  int NumDistinctValueVectors(Player player) const;

  // Proposal encoding: sum_k split[k] * radix^k.
  Action EncodeSplit(const std::vector<int>& split) const;
  std::vector<int> DecodeSplit(Action action) const;
  // Proposals legal for `pool`, ascending.
  std::vector<Action> ProposalsForPool(const std::vector<int>& pool) const;

  // Starts directly from a chosen database index.
  std::unique_ptr<State> NewStateForInstance(int instance_index) const;

 private:
  DondParams params_;
  std::vector<DondInstance> instances_;
  std::string name_;
  Action accept_action_;
  std::map<std::string, std::vector<int>> by_observation_[2];
};

class DondState : public State {
 public:
  explicit DondState(std::shared_ptr<const Game> game);

  Player CurrentPlayer() const override;
  std::vector<Action> LegalActions() const override;
  ActionsAndProbs ChanceOutcomes() const override;
  std::vector<double> Returns() const override;
  InfoStateKey InfoStateKeyFor(Player player) const override;
  std::string PrivateObservation(Player player) const override;
  std::string ActionToString(Player player, Action action) const override;
  std::string ToString() const override;
  std::unique_ptr<State> Clone() const override;

  bool HasInstance() const { return instance_index_ >= 0; }
  int instance_index() const { return instance_index_; }
  const DondInstance& instance() const;
  // Player actions so far (proposals and possibly a final accept).
  const std::vector<Action>& moves() const { return moves_; }
  int turns_taken() const { return static_cast<int>(moves_.size()); }
  bool agreed() const { return agreed_; }
  // Counts each player receives under the accepted proposal.
  std::vector<std::vector<int>> AgreedAllocation() const;
  // Counts kept by the proposer of the standing proposal; empty if none.
  std::vector<int> StandingSplit() const;

 protected:
  void DoApplyAction(Action action) override;

 private:
  const DondGame& dond() const;

  int instance_index_ = -1;
  std::vector<Action> moves_;
  bool agreed_ = false;
};

}  // namespace sgpsro

#endif  // SGPSRO_GAME_DOND_H_
