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

#include "sgpsro/belief/learned_belief.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "sgpsro/core/error.h"

namespace sgpsro {
namespace {

constexpr double kBeta1 = 0.9;
constexpr double kBeta2 = 0.999;
constexpr double kAdamEps = 1e-8;

double SquaredDistance(const std::vector<double>& raw,
                       const std::vector<int>& v) {
  double d = 0.0;
  for (size_t k = 0; k < raw.size(); ++k) {
    const double diff = raw[k] - v[k];
    d += diff * diff;
  }
  return d;
}

}  // namespace

int NearestFeasible(const std::vector<double>& raw,
                    const std::vector<std::vector<int>>& feasible) {
  if (feasible.empty()) {
    Fail(ErrorCode::kInvalidArgument, "feasible value set is empty");
  }
  int best = -1;
  double best_d = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < feasible.size(); ++i) {
    if (feasible[i].size() != raw.size()) {
      Fail(ErrorCode::kInvalidArgument, "feasible vector has length ",
           feasible[i].size(), ", expected ", raw.size());
    }
    const double d = SquaredDistance(raw, feasible[i]);
    if (best < 0 || d < best_d ||
        (d == best_d && feasible[i] < feasible[best])) {
      best = static_cast<int>(i);
      best_d = d;
    }
  }
  return best;
}

std::vector<int> ProjectFeasibleValues(const std::vector<double>& raw,
                                       const std::vector<int>& pool,
                                       int total) {
  if (raw.size() != pool.size()) {
    Fail(ErrorCode::kInvalidArgument, "raw vector has length ", raw.size(),
         ", pool has ", pool.size());
  }
  const auto feasible = DondValueVectors(pool, total);
  return feasible[NearestFeasible(raw, feasible)];
}

std::vector<int> ProjectFeasibleValues(const std::vector<double>& raw,
                                       const DondGame& game,
                                       const std::vector<int>& pool,
                                       const std::vector<int>& own_values,
                                       Player searcher) {
  std::vector<std::vector<int>> feasible;
  for (int idx : game.InstancesMatching(pool, own_values, searcher)) {
    feasible.push_back(game.instances()[idx].values[1 - searcher]);
  }
  return feasible[NearestFeasible(raw, feasible)];
}

void LearnedBeliefConfig::Validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    Fail(ErrorCode::kInvalidArgument, "generator learning rate must be > 0");
  }
  if (!(l2 >= 0.0) || !std::isfinite(l2)) {
    Fail(ErrorCode::kInvalidArgument, "generator l2 weight must be >= 0");
  }
  if (batch_size < 1) {
    Fail(ErrorCode::kInvalidArgument, "generator batch size must be >= 1");
  }
}

LearnedDondBelief::LearnedDondBelief(std::shared_ptr<const Game> game,
                                     LearnedBeliefConfig config)
    : BeliefModel(std::move(game)),
      dond_([this]() -> const DondGame& {
        const auto* d = dynamic_cast<const DondGame*>(game_.get());
        if (d == nullptr) {
          Fail(ErrorCode::kInvalidArgument,
               "the learned belief model supports Deal or No Deal only, got ",
               game_->Id());
        }
        return *d;
      }()),
      config_(config) {
  config_.Validate();
  const DondParams& p = dond_.params();
  const int k = p.num_item_types;
  const int m = p.max_pool + 1;
  num_heads_ = k;
  num_classes_ = p.total_value + 1;
  num_features_ = k * num_classes_ + k * m + 2 * (k * m + 1) + k * m +
                  (p.max_turns + 1) + 1;
  const size_t n =
      static_cast<size_t>(num_heads_) * num_classes_ * num_features_;
  weights_.assign(n, 0.0);
  adam_m_.assign(n, 0.0);
  adam_v_.assign(n, 0.0);
}

LearnedDondBelief::SparseFeatures LearnedDondBelief::Features(
    const DondInstance& inst, const std::vector<Action>& moves,
    Player searcher) const {
  const DondParams& p = dond_.params();
  const int k = p.num_item_types;
  const int m = p.max_pool + 1;
  SparseFeatures x;
  int off = 0;
  for (int i = 0; i < k; ++i) {
    x.push_back({off + i * num_classes_ + inst.values[searcher][i], 1.0});
  }
  off += k * num_classes_;
  for (int i = 0; i < k; ++i) x.push_back({off + i * m + inst.pool[i], 1.0});
  off += k * m;

  // Last proposal of each side, and the opponent's proposal histogram.
  std::vector<int> last[2];
  std::vector<double> hist(static_cast<size_t>(k) * m, 0.0);
  int opponent_proposals = 0;
  for (size_t t = 0; t < moves.size(); ++t) {
    if (moves[t] == dond_.accept_action()) continue;
    const Player mover = static_cast<Player>(t % 2);
    const auto split = dond_.DecodeSplit(moves[t]);
    last[mover == searcher ? 1 : 0] = split;
    if (mover != searcher) {
      ++opponent_proposals;
      for (int i = 0; i < k; ++i) hist[i * m + split[i]] += 1.0;
    }
  }
  for (int side = 0; side < 2; ++side) {
    if (last[side].empty()) {
      x.push_back({off + k * m, 1.0});
    } else {
      for (int i = 0; i < k; ++i)
        x.push_back({off + i * m + last[side][i], 1.0});
    }
    off += k * m + 1;
  }
  if (opponent_proposals > 0) {
    for (int j = 0; j < k * m; ++j) {
      if (hist[j] > 0.0) x.push_back({off + j, hist[j] / opponent_proposals});
    }
  }
  off += k * m;
  x.push_back(
      {off + std::min<int>(static_cast<int>(moves.size()), p.max_turns), 1.0});
  off += p.max_turns + 1;
  x.push_back({off, 1.0});
  SGPSRO_CHECK(off + 1 == num_features_);
  return x;
}

LearnedDondBelief::Decoded LearnedDondBelief::Decode(
    const GenEntry& entry) const {
  if (entry.history.empty()) {
    Fail(ErrorCode::kInvalidArgument, "generator entry has no chance outcome");
  }
  const Action idx = entry.history[0];
  if (idx < 0 || idx >= static_cast<Action>(dond_.instances().size())) {
    Fail(ErrorCode::kInvalidArgument, "generator entry instance ", idx,
         " out of range");
  }
  const Player searcher = entry.key.player();
  if (searcher != 0 && searcher != 1) {
    Fail(ErrorCode::kInvalidArgument, "generator entry player ", searcher);
  }
  const DondInstance& inst = dond_.instances()[idx];
  const std::vector<Action> moves(entry.history.begin() + 1,
                                  entry.history.end());
  Decoded d;
  d.context = entry.key.ToString();
  d.features = Features(inst, moves, searcher);
  d.target = inst.values[1 - searcher];
  return d;
}

std::vector<std::vector<double>> LearnedDondBelief::Softmax(
    const SparseFeatures& x) const {
  std::vector<std::vector<double>> q(num_heads_,
                                     std::vector<double>(num_classes_));
  for (int h = 0; h < num_heads_; ++h) {
    double mx = -std::numeric_limits<double>::infinity();
    for (int c = 0; c < num_classes_; ++c) {
      const double* w = &weights_[(static_cast<size_t>(h) * num_classes_ + c) *
                                  num_features_];
      double z = 0.0;
      for (const auto& [f, v] : x) z += w[f] * v;
      q[h][c] = z;
      mx = std::max(mx, z);
    }
    double total = 0.0;
    for (double& z : q[h]) {
      z = std::exp(z - mx);
      total += z;
    }
    for (double& z : q[h]) z /= total;
  }
  return q;
}

std::vector<std::vector<double>> LearnedDondBelief::Mix(
    const std::string& context, std::vector<std::vector<double>> q) const {
  if (!config_.context_counts) return q;
  const auto it = counts_.find(context);
  if (it == counts_.end() || it->second.n == 0) return q;
  const double n = it->second.n;
  const double c = num_classes_;
  for (int h = 0; h < num_heads_; ++h) {
    for (int k = 0; k < num_classes_; ++k) {
      q[h][k] = (it->second.per_head[h][k] + c * q[h][k]) / (n + c);
    }
  }
  return q;
}

std::vector<std::vector<double>> LearnedDondBelief::HeadProbabilities(
    const State& state, Player searcher) const {
  const auto& s = dynamic_cast<const DondState&>(state);
  return Mix(state.InfoStateKeyFor(searcher).ToString(),
             Softmax(Features(s.instance(), s.moves(), searcher)));
}

std::vector<std::vector<int>> LearnedDondBelief::Candidates(
    const DondState& s, Player searcher, std::vector<int>* indices) const {
  const DondInstance& inst = s.instance();
  std::vector<int> idx =
      dond_.InstancesMatching(inst.pool, inst.values[searcher], searcher);
  if (idx.empty()) {
    Fail(ErrorCode::kFailedPrecondition,
         "no database instance matches the searcher's observation");
  }
  const Player opp = 1 - searcher;
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    return dond_.instances()[a].values[opp] < dond_.instances()[b].values[opp];
  });
  std::vector<std::vector<int>> out;
  for (int i : idx) out.push_back(dond_.instances()[i].values[opp]);
  *indices = std::move(idx);
  return out;
}

std::unique_ptr<State> LearnedDondBelief::Rebuild(const DondState& s,
                                                  int instance) const {
  std::unique_ptr<State> h = dond_.NewStateForInstance(instance);
  for (Action a : s.moves()) h = h->Child(a);
  return h;
}

std::unique_ptr<State> LearnedDondBelief::Sample(const State& state,
                                                 Player searcher,
                                                 Rng& rng) const {
  const auto& s = dynamic_cast<const DondState&>(state);
  std::vector<int> indices;
  const auto candidates = Candidates(s, searcher, &indices);
  const auto probs = HeadProbabilities(state, searcher);
  std::vector<double> raw(num_heads_);
  for (int h = 0; h < num_heads_; ++h) raw[h] = SampleIndex(probs[h], rng);
  return Rebuild(s, indices[NearestFeasible(raw, candidates)]);
}

std::vector<WorldBelief> LearnedDondBelief::Distribution(
    const State& state, Player searcher) const {
  const auto& s = dynamic_cast<const DondState&>(state);
  std::vector<int> indices;
  const auto candidates = Candidates(s, searcher, &indices);
  const auto probs = HeadProbabilities(state, searcher);
  const double combos = std::pow(num_classes_, num_heads_);
  if (combos > 1e7) {
    Fail(ErrorCode::kResourceExhausted, "too many raw value vectors (", combos,
         ") to enumerate");
  }
  std::vector<double> mass(candidates.size(), 0.0);
  std::vector<int> digit(num_heads_, 0);
  std::vector<double> raw(num_heads_);
  while (true) {
    double p = 1.0;
    for (int h = 0; h < num_heads_; ++h) {
      p *= probs[h][digit[h]];
      raw[h] = digit[h];
    }
    if (p > 0.0) mass[NearestFeasible(raw, candidates)] += p;
    int h = 0;
    while (h < num_heads_ && ++digit[h] == num_classes_) digit[h++] = 0;
    if (h == num_heads_) break;
  }
  std::vector<WorldBelief> out;
  for (size_t i = 0; i < candidates.size(); ++i) {
    out.push_back({Rebuild(s, indices[i]), mass[i]});
  }
  return out;
}

void LearnedDondBelief::AddCount(const Decoded& d, int delta) {
  auto& cc = counts_[d.context];
  if (cc.per_head.empty()) {
    cc.per_head.assign(num_heads_, std::vector<int>(num_classes_, 0));
  }
  cc.n += delta;
  for (int h = 0; h < num_heads_; ++h) cc.per_head[h][d.target[h]] += delta;
  if (cc.n == 0) counts_.erase(d.context);
}

void LearnedDondBelief::SyncCounts(const GenBuffer& buffer) {
  if (buffer.total_added() < synced_until_) {
    // A different buffer; forget what came from the old one.
    for (const auto& [seq, d] : counted_) AddCount(d, -1);
    counted_.clear();
    synced_until_ = 0;
  }
  const std::int64_t first = buffer.first_sequence();
  while (!counted_.empty() && counted_.front().first < first) {
    AddCount(counted_.front().second, -1);
    counted_.pop_front();
  }
  for (std::int64_t seq = std::max(synced_until_, first);
       seq < buffer.total_added(); ++seq) {
    Decoded d = Decode(buffer[static_cast<int>(seq - first)]);
    AddCount(d, +1);
    counted_.emplace_back(seq, std::move(d));
  }
  synced_until_ = buffer.total_added();
  synced_buffer_ = &buffer;
}

const LearnedDondBelief::Decoded& LearnedDondBelief::Row(
    const GenBuffer& buffer, int row, Decoded* scratch) const {
  if (synced_buffer_ == &buffer && synced_until_ == buffer.total_added() &&
      static_cast<int>(counted_.size()) == buffer.size()) {
    return counted_[row].second;
  }
  *scratch = Decode(buffer[row]);
  return *scratch;
}

void LearnedDondBelief::Fit(const GenBuffer& buffer, int steps) {
  if (buffer.empty()) return;
  SyncCounts(buffer);
  for (int t = 0; t < steps; ++t) {
    Rng rng(DeriveSeed(config_.seed, static_cast<std::uint64_t>(steps_taken_)));
    Step(buffer, buffer.SampleIndices(config_.batch_size, rng));
  }
}

double LearnedDondBelief::Loss(const GenBuffer& buffer,
                               const std::vector<int>& rows) const {
  if (rows.empty()) return 0.0;
  double loss = 0.0;
  for (int r : rows) {
    Decoded scratch;
    const Decoded& d = Row(buffer, r, &scratch);
    const auto q = Softmax(d.features);
    for (int h = 0; h < num_heads_; ++h) loss -= std::log(q[h][d.target[h]]);
  }
  loss /= static_cast<double>(rows.size());
  double sq = 0.0;
  for (double w : weights_) sq += w * w;
  return loss + config_.l2 * sq;
}

void LearnedDondBelief::Step(const GenBuffer& buffer,
                             const std::vector<int>& rows) {
  if (rows.empty()) return;
  std::vector<double> grad(weights_.size(), 0.0);
  const double scale = 1.0 / static_cast<double>(rows.size());
  for (int r : rows) {
    Decoded scratch;
    const Decoded& d = Row(buffer, r, &scratch);
    const auto q = Softmax(d.features);
    for (int h = 0; h < num_heads_; ++h) {
      for (int c = 0; c < num_classes_; ++c) {
        const double g = (q[h][c] - (c == d.target[h] ? 1.0 : 0.0)) * scale;
        double* gw =
            &grad[(static_cast<size_t>(h) * num_classes_ + c) * num_features_];
        for (const auto& [f, v] : d.features) gw[f] += g * v;
      }
    }
  }
  ++steps_taken_;
  const double t = static_cast<double>(steps_taken_);
  const double c1 = 1.0 - std::pow(kBeta1, t);
  const double c2 = 1.0 - std::pow(kBeta2, t);
  for (size_t i = 0; i < weights_.size(); ++i) {
    const double g = grad[i] + 2.0 * config_.l2 * weights_[i];
    adam_m_[i] = kBeta1 * adam_m_[i] + (1.0 - kBeta1) * g;
    adam_v_[i] = kBeta2 * adam_v_[i] + (1.0 - kBeta2) * g * g;
    weights_[i] -= config_.learning_rate * (adam_m_[i] / c1) /
                   (std::sqrt(adam_v_[i] / c2) + kAdamEps);
  }
}

nlohmann::json LearnedDondBelief::ToJson() const {
  nlohmann::json counts = nlohmann::json::object();
  for (const auto& [ctx, cc] : counts_) {
    counts[ctx] = {{"n", cc.n}, {"per_head", cc.per_head}};
  }
  return {{"version", 1},
          {"kind", "learned_dond_belief"},
          {"config",
           {{"learning_rate", config_.learning_rate},
            {"l2", config_.l2},
            {"batch_size", config_.batch_size},
            {"context_counts", config_.context_counts},
            {"seed", config_.seed}}},
          {"steps", steps_taken_},
          {"weights", weights_},
          {"adam_m", adam_m_},
          {"adam_v", adam_v_},
          {"counts", counts}};
}

std::shared_ptr<LearnedDondBelief> LearnedDondBelief::FromJson(
    std::shared_ptr<const Game> game, const nlohmann::json& j) {
  try {
    if (j.at("kind") != "learned_dond_belief" || j.at("version") != 1) {
      Fail(ErrorCode::kInvalidArgument,
           "not a version-1 learned belief checkpoint");
    }
    const auto& jc = j.at("config");
    LearnedBeliefConfig cfg;
    cfg.learning_rate = jc.at("learning_rate").get<double>();
    cfg.l2 = jc.at("l2").get<double>();
    cfg.batch_size = jc.at("batch_size").get<int>();
    cfg.context_counts = jc.at("context_counts").get<bool>();
    cfg.seed = jc.at("seed").get<std::uint64_t>();
    auto model = std::make_shared<LearnedDondBelief>(std::move(game), cfg);
    auto weights = j.at("weights").get<std::vector<double>>();
    if (weights.size() != model->weights_.size()) {
      Fail(ErrorCode::kInvalidArgument, "checkpoint has ", weights.size(),
           " weights, model expects ", model->weights_.size());
    }
    model->weights_ = std::move(weights);
    model->adam_m_ = j.at("adam_m").get<std::vector<double>>();
    model->adam_v_ = j.at("adam_v").get<std::vector<double>>();
    if (model->adam_m_.size() != model->weights_.size() ||
        model->adam_v_.size() != model->weights_.size()) {
      Fail(ErrorCode::kInvalidArgument, "optimizer state size mismatch");
    }
    model->steps_taken_ = j.at("steps").get<std::int64_t>();
    for (const auto& [ctx, jcc] : j.at("counts").items()) {
      ContextCounts cc;
      cc.n = jcc.at("n").get<int>();
      cc.per_head = jcc.at("per_head").get<std::vector<std::vector<int>>>();
      model->counts_[ctx] = std::move(cc);
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kInvalidArgument,
         "bad learned belief checkpoint: ", e.what());
  }
}

BeliefModelPtr MakeBeliefModel(BeliefKind kind,
                               std::shared_ptr<const Game> game,
                               const OpponentMixture& mixture,
                               const LearnedBeliefConfig& learned) {
  switch (kind) {
    case BeliefKind::kExact:
      return std::make_shared<ExactBelief>(std::move(game), mixture);
    case BeliefKind::kUniform:
      return std::make_shared<UniformBelief>(std::move(game));
    case BeliefKind::kCheat:
      return std::make_shared<CheatBelief>(std::move(game));
    case BeliefKind::kFixedFirst:
      return std::make_shared<FixedBelief>(std::move(game), false);
    case BeliefKind::kFixedLast:
      return std::make_shared<FixedBelief>(std::move(game), true);
    case BeliefKind::kLearned:
      return std::make_shared<LearnedDondBelief>(std::move(game), learned);
  }
  Fail(ErrorCode::kInvalidArgument, "unknown belief kind");
}

}  // namespace sgpsro
