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

#include "sgpsro/game/dond.h"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "sgpsro/core/error.h"

namespace sgpsro {
namespace {

int Dot(const std::vector<int>& a, const std::vector<int>& b) {
  int total = 0;
  for (size_t k = 0; k < a.size(); ++k) total += a[k] * b[k];
  return total;
}

std::string JoinInts(const std::vector<int>& v) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(v[i]);
  }
  return out;
}

std::string ObservationKey(const std::vector<int>& pool,
                           const std::vector<int>& values) {
  return JoinInts(pool) + "|" + JoinInts(values);
}

std::vector<int> ParseInts(const std::string& field, int line_no) {
  std::vector<int> out;
  std::stringstream in(field);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      size_t used = 0;
      const int v = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      Fail(ErrorCode::kInvalidArgument, "instance database line ", line_no,
           ": bad integer '", item, "'");
    }
  }
  return out;
}

// Odometer over vectors with entries in [lo, hi_k].
template <typename Fn>
void ForEachVector(const std::vector<int>& lo, const std::vector<int>& hi,
                   Fn&& fn) {
  const size_t k = lo.size();
  for (size_t i = 0; i < k; ++i) {
    if (lo[i] > hi[i]) return;
  }
  std::vector<int> v = lo;
  while (true) {
    fn(v);
    int pos = static_cast<int>(k) - 1;
    while (pos >= 0 && v[pos] == hi[pos]) {
      v[pos] = lo[pos];
      --pos;
    }
    if (pos < 0) return;
    ++v[pos];
  }
}

}  // namespace

void DondParams::Validate() const {
  if (num_item_types < 1) {
    Fail(ErrorCode::kInvalidArgument, "dond.num_item_types must be >= 1");
  }
  if (min_item_count < 0) {
    Fail(ErrorCode::kInvalidArgument, "dond.min_item_count must be >= 0");
  }
  if (min_pool < 1 || min_pool > max_pool) {
    Fail(ErrorCode::kInvalidArgument,
         "dond pool range must satisfy 1 <= min_pool <= max_pool, got [",
         min_pool, ", ", max_pool, "]");
  }
  if (total_value < 1) {
    Fail(ErrorCode::kInvalidArgument, "dond.total_value must be >= 1");
  }
  if (max_turns < 2 || max_turns % 2 != 0) {
    Fail(ErrorCode::kInvalidArgument,
         "dond.max_turns must be even and >= 2, got ", max_turns);
  }
}

DondParams MiniDondParams() {
  DondParams p;
  p.num_item_types = 3;
  p.min_pool = 4;
  p.max_pool = 4;
  p.total_value = 6;
  p.max_turns = 4;
  p.min_item_count = 1;
  return p;
}

std::string DondInstanceViolation(const DondInstance& inst,
                                  const DondParams& params) {
  const size_t k = params.num_item_types;
  if (inst.pool.size() != k || inst.values[0].size() != k ||
      inst.values[1].size() != k) {
    return "vector length differs from num_item_types";
  }
  int items = 0;
  for (int c : inst.pool) {
    if (c < params.min_item_count) return "item count below min_item_count";
    items += c;
  }
  if (items < params.min_pool || items > params.max_pool) {
    return "pool size outside the configured range";
  }
  for (int p = 0; p < 2; ++p) {
    for (int v : inst.values[p]) {
      if (v < 0) return "negative value";
    }
    if (Dot(inst.values[p], inst.pool) != params.total_value) {
      return "player " + std::to_string(p + 1) + " values do not total " +
             std::to_string(params.total_value);
    }
  }
  bool overlap = false;
  for (size_t i = 0; i < k; ++i) {
    if (inst.values[0][i] + inst.values[1][i] <= 0) {
      return "item type " + std::to_string(i) + " valued by neither player";
    }
    if (inst.values[0][i] * inst.values[1][i] != 0) overlap = true;
  }
  if (!overlap) return "no item type valued by both players";
  return "";
}

std::vector<std::vector<int>> DondEnumeratePools(const DondParams& params) {
  params.Validate();
  std::vector<std::vector<int>> pools;
  const std::vector<int> lo(params.num_item_types, params.min_item_count);
  const std::vector<int> hi(params.num_item_types, params.max_pool);
  ForEachVector(lo, hi, [&](const std::vector<int>& pool) {
    const int n = std::accumulate(pool.begin(), pool.end(), 0);
    if (n >= params.min_pool && n <= params.max_pool) pools.push_back(pool);
  });
  return pools;
}

std::vector<std::vector<int>> DondValueVectors(const std::vector<int>& pool,
                                               int total) {
  std::vector<std::vector<int>> out;
  std::vector<int> lo(pool.size(), 0), hi(pool.size());
  for (size_t k = 0; k < pool.size(); ++k) {
    hi[k] = pool[k] > 0 ? total / pool[k] : 0;
  }
  ForEachVector(lo, hi, [&](const std::vector<int>& v) {
    if (Dot(v, pool) == total) out.push_back(v);
  });
  return out;
}

std::vector<DondInstance> DondInstancesForPool(const std::vector<int>& pool,
                                               int total_value) {
  std::vector<DondInstance> out;
  const auto vectors = DondValueVectors(pool, total_value);
  for (const auto& v1 : vectors) {
    for (const auto& v2 : vectors) {
      bool covered = true, overlap = false;
      for (size_t k = 0; k < pool.size(); ++k) {
        if (v1[k] + v2[k] <= 0) covered = false;
        if (v1[k] * v2[k] != 0) overlap = true;
      }
      if (covered && overlap) {
        DondInstance inst;
        inst.pool = pool;
        inst.values[0] = v1;
        inst.values[1] = v2;
        out.push_back(std::move(inst));
      }
    }
  }
  return out;
}

std::vector<DondInstance> DondEnumerateInstances(const DondParams& params) {
  std::vector<DondInstance> out;
  for (const auto& pool : DondEnumeratePools(params)) {
    auto part = DondInstancesForPool(pool, params.total_value);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

const DondInstance& DondSampleInstance(const std::vector<DondInstance>& db,
                                       Rng& rng) {
  if (db.empty()) {
    Fail(ErrorCode::kInvalidArgument, "cannot sample from an empty database");
  }
  size_t idx = static_cast<size_t>(Uniform01(rng) * db.size());
  return db[std::min(idx, db.size() - 1)];
}

std::string DondFormatDatabase(const std::vector<DondInstance>& db) {
  std::string out;
  for (const auto& inst : db) {
    out += JoinInts(inst.pool) + ' ' + JoinInts(inst.values[0]) + ' ' +
           JoinInts(inst.values[1]) + '\n';
  }
  return out;
}

std::vector<DondInstance> DondParseDatabase(const std::string& text) {
  std::vector<DondInstance> out;
  std::stringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::stringstream fields(line);
    std::string pool, v1, v2, extra;
    if (!(fields >> pool >> v1 >> v2) || (fields >> extra)) {
      Fail(ErrorCode::kInvalidArgument, "instance database line ", line_no,
           ": expected three fields 'pool v1 v2'");
    }
    DondInstance inst;
    inst.pool = ParseInts(pool, line_no);
    inst.values[0] = ParseInts(v1, line_no);
    inst.values[1] = ParseInts(v2, line_no);
    if (inst.values[0].size() != inst.pool.size() ||
        inst.values[1].size() != inst.pool.size()) {
      Fail(ErrorCode::kInvalidArgument, "instance database line ", line_no,
           ": vectors have different lengths");
    }
    out.push_back(std::move(inst));
  }
  return out;
}

std::vector<DondInstance> DondReadDatabase(const std::string& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kNotFound, "cannot open instance database ", path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return DondParseDatabase(buffer.str());
}

void DondWriteDatabase(const std::vector<DondInstance>& db,
                       const std::string& path) {
  std::ofstream out(path);
  if (!out) Fail(ErrorCode::kIo, "cannot write instance database ", path);
  out << "# pool player1_values player2_values\n" << DondFormatDatabase(db);
}

DondGame::DondGame(DondParams params, std::vector<DondInstance> instances,
                   std::string name)
    : params_(params),
      instances_(std::move(instances)),
      name_(std::move(name)) {
  params_.Validate();
  if (instances_.empty()) instances_ = DondEnumerateInstances(params_);
  if (instances_.empty()) {
    Fail(ErrorCode::kInvalidArgument,
         "Deal or No Deal parameters admit no instances");
  }
  for (size_t i = 0; i < instances_.size(); ++i) {
    const std::string why = DondInstanceViolation(instances_[i], params_);
    if (!why.empty()) {
      Fail(ErrorCode::kInvalidArgument, "database instance ", i, ": ", why);
    }
    for (int p = 0; p < 2; ++p) {
      by_observation_[p][ObservationKey(instances_[i].pool,
                                        instances_[i].values[p])]
          .push_back(static_cast<int>(i));
    }
  }
  accept_action_ = 1;
  for (int k = 0; k < params_.num_item_types; ++k) accept_action_ *= radix();
}

std::unique_ptr<State> DondGame::NewInitialState() const {
  return std::make_unique<DondState>(shared_from_this());
}

std::unique_ptr<State> DondGame::NewStateForInstance(int instance_index) const {
  return NewInitialState()->Child(instance_index);
}

const std::vector<int>& DondGame::InstancesMatching(
    const std::vector<int>& pool, const std::vector<int>& values,
    Player player) const {
  static const std::vector<int> kEmpty;
  const auto it = by_observation_[player].find(ObservationKey(pool, values));
  return it == by_observation_[player].end() ? kEmpty : it->second;
}

int DondGame::NumPrivateTypes(Player player) const {
  return static_cast<int>(by_observation_[player].size());
}

int DondGame::NumDistinctValueVectors(Player player) const {
  std::set<std::vector<int>> seen;
  for (const auto& inst : instances_) seen.insert(inst.values[player]);
  return static_cast<int>(seen.size());
}

Action DondGame::EncodeSplit(const std::vector<int>& split) const {
  Action id = 0, scale = 1;
  for (int k = 0; k < params_.num_item_types; ++k) {
    id += split[k] * scale;
    scale *= radix();
  }
  return id;
}

std::vector<int> DondGame::DecodeSplit(Action action) const {
  std::vector<int> split(params_.num_item_types);
  for (int k = 0; k < params_.num_item_types; ++k) {
    split[k] = static_cast<int>(action % radix());
    action /= radix();
  }
  return split;
}

std::vector<Action> DondGame::ProposalsForPool(
    const std::vector<int>& pool) const {
  std::vector<Action> out;
  ForEachVector(std::vector<int>(pool.size(), 0), pool,
                [&](const std::vector<int>& split) {
                  out.push_back(EncodeSplit(split));
                });
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<WeightedHistory> DondGame::ConsistentHistories(
    const State& state, Player player, long node_budget) const {
  const auto& s = dynamic_cast<const DondState&>(state);
  if (!s.HasInstance()) {
    std::vector<WeightedHistory> out;
    out.push_back({state.Clone(), 1.0});
    return out;
  }
  const DondInstance& inst = s.instance();
  const auto& matches =
      InstancesMatching(inst.pool, inst.values[player], player);
  if (static_cast<long>(matches.size()) > node_budget) {
    Fail(ErrorCode::kResourceExhausted,
         "consistent-history enumeration exceeded node budget ", node_budget);
  }
  const double reach = 1.0 / static_cast<double>(instances_.size());
  std::vector<WeightedHistory> out;
  out.reserve(matches.size());
  for (int idx : matches) {
    std::unique_ptr<State> h = NewStateForInstance(idx);
    for (Action a : s.moves()) h = h->Child(a);
    out.push_back({std::move(h), reach});
  }
  return out;
}

DondState::DondState(std::shared_ptr<const Game> game) : State(game) {}

const DondGame& DondState::dond() const {
  return static_cast<const DondGame&>(*game_);
}

const DondInstance& DondState::instance() const {
  if (instance_index_ < 0) {
    Fail(ErrorCode::kFailedPrecondition, "instance not dealt yet");
  }
  return dond().instances()[instance_index_];
}

Player DondState::CurrentPlayer() const {
  if (instance_index_ < 0) return kChancePlayerId;
  if (agreed_ || turns_taken() >= dond().params().max_turns) {
    return kTerminalPlayerId;
  }
  return turns_taken() % 2;
}

std::vector<Action> DondState::LegalActions() const {
  const Player player = CurrentPlayer();
  if (player == kTerminalPlayerId) return {};
  if (player == kChancePlayerId) {
    std::vector<Action> out(dond().instances().size());
    std::iota(out.begin(), out.end(), Action{0});
    return out;
  }
  std::vector<Action> out = dond().ProposalsForPool(instance().pool);
  if (!moves_.empty()) out.push_back(dond().accept_action());
  return out;
}

ActionsAndProbs DondState::ChanceOutcomes() const {
  if (!IsChanceNode()) {
    Fail(ErrorCode::kFailedPrecondition, "not a chance node");
  }
  return UniformOver(LegalActions());
}

void DondState::DoApplyAction(Action action) {
  if (instance_index_ < 0) {
    instance_index_ = static_cast<int>(action);
    return;
  }
  moves_.push_back(action);
  if (action == dond().accept_action()) agreed_ = true;
}

std::vector<int> DondState::StandingSplit() const {
  for (auto it = moves_.rbegin(); it != moves_.rend(); ++it) {
    if (*it != dond().accept_action()) return dond().DecodeSplit(*it);
  }
  return {};
}

std::vector<std::vector<int>> DondState::AgreedAllocation() const {
  if (!agreed_) {
    Fail(ErrorCode::kFailedPrecondition, "no agreement reached");
  }
  // The accepted proposal was made one move before the accept.
  const Player proposer = (turns_taken() - 2) % 2;
  const std::vector<int> kept = dond().DecodeSplit(moves_[moves_.size() - 2]);
  const auto& pool = instance().pool;
  std::vector<std::vector<int>> alloc(2, std::vector<int>(pool.size()));
  for (size_t k = 0; k < pool.size(); ++k) {
    alloc[proposer][k] = kept[k];
    alloc[1 - proposer][k] = pool[k] - kept[k];
  }
  return alloc;
}

std::vector<double> DondState::Returns() const {
  if (!IsTerminal()) {
    Fail(ErrorCode::kFailedPrecondition, "DoND returns at non-terminal state");
  }
  if (!agreed_) return {0.0, 0.0};
  const auto alloc = AgreedAllocation();
  const auto& inst = instance();
  return {static_cast<double>(Dot(inst.values[0], alloc[0])),
          static_cast<double>(Dot(inst.values[1], alloc[1]))};
}

InfoStateKey DondState::InfoStateKeyFor(Player player) const {
  KeyBuilder key(player);
  key.Field("dond");
  if (instance_index_ >= 0) {
    key.Ints(instance().pool).Ints(instance().values[player]);
  } else {
    key.Field("").Field("");
  }
  key.Actions(moves_);
  return key.Build();
}

std::string DondState::PrivateObservation(Player player) const {
  if (instance_index_ < 0) return "";
  return ObservationKey(instance().pool, instance().values[player]);
}

std::string DondState::ActionToString(Player player, Action action) const {
  if (player == kChancePlayerId) return "Instance:" + std::to_string(action);
  if (action == dond().accept_action()) return "Accept";
  return "Keep:" + JoinInts(dond().DecodeSplit(action));
}

std::string DondState::ToString() const {
  std::ostringstream out;
  if (instance_index_ < 0) return "<undealt>";
  const auto& inst = instance();
  out << "pool " << JoinInts(inst.pool) << " v1 " << JoinInts(inst.values[0])
      << " v2 " << JoinInts(inst.values[1]);
  for (size_t t = 0; t < moves_.size(); ++t) {
    out << " | P" << (t % 2 + 1) << ' '
        << ActionToString(static_cast<Player>(t % 2), moves_[t]);
  }
  return out.str();
}

std::unique_ptr<State> DondState::Clone() const {
  return std::make_unique<DondState>(*this);
}

}  // namespace sgpsro
