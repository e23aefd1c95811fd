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

#include "sgpsro/search/estimators.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <map>

#include "sgpsro/core/error.h"
#include "sgpsro/policy/policy.h"

namespace sgpsro {
namespace {

constexpr double kBeta1 = 0.9;
constexpr double kBeta2 = 0.999;
constexpr double kAdamEps = 1e-8;

std::uint64_t Mix(std::uint64_t h, std::uint64_t x) {
  h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

std::uint64_t Bits(double d) {
  std::uint64_t u;
  std::memcpy(&u, &d, sizeof u);
  return u;
}

// Order-independent digest of a keyed table.
template <typename Map, typename F>
std::uint64_t TableChecksum(const Map& table, F entry_hash) {
  std::uint64_t sum = 0;
  for (const auto& [key, entry] : table) {
    std::uint64_t h = InfoStateKeyHash()(key);
    sum += Mix(h, entry_hash(entry));
  }
  return sum;
}

nlohmann::json AdamToJson(const AdamSlot& a) { return {a.m, a.v, a.t}; }

AdamSlot AdamFromJson(const nlohmann::json& j) {
  return {j.at(0).get<double>(), j.at(1).get<double>(),
          j.at(2).get<std::int64_t>()};
}

}  // namespace

std::string BackpropTypeName(BackpropType type) {
  switch (type) {
    case BackpropType::kIR:
      return "IR";
    case BackpropType::kIE:
      return "IE";
    case BackpropType::kSW:
      return "SW";
    case BackpropType::kNBS:
      return "NBS";
  }
  return "?";
}

BackpropType ParseBackpropType(const std::string& name) {
  std::string up = name;
  for (char& c : up) c = static_cast<char>(std::toupper(c));
  for (auto t : {BackpropType::kIR, BackpropType::kIE, BackpropType::kSW,
                 BackpropType::kNBS}) {
    if (BackpropTypeName(t) == up) return t;
  }
  Fail(ErrorCode::kInvalidArgument, "unknown back-prop value type '", name,
       "' (expected IR, IE, SW or NBS)");
}

double BackpropValue(const std::vector<double>& returns, Player searcher,
                     BackpropType type) {
  if (searcher < 0 || searcher >= static_cast<Player>(returns.size())) {
    Fail(ErrorCode::kInvalidArgument, "searcher ", searcher,
         " out of range for ", returns.size(), " returns");
  }
  const double mine = returns[searcher];
  if (type == BackpropType::kIR) return mine;
  if (returns.size() != 2) {
    Fail(ErrorCode::kInvalidArgument, "back-prop type ", BackpropTypeName(type),
         " needs two players, got ", returns.size());
  }
  const double theirs = returns[1 - searcher];
  switch (type) {
    case BackpropType::kIE:
      return mine - 0.5 * std::max(theirs - mine, 0.0);
    case BackpropType::kSW:
      return mine + theirs;
    case BackpropType::kNBS:
      return mine * theirs;
    default:
      return mine;
  }
}

double AdamDelta(AdamSlot& slot, double grad, double learning_rate) {
  ++slot.t;
  slot.m = kBeta1 * slot.m + (1.0 - kBeta1) * grad;
  slot.v = kBeta2 * slot.v + (1.0 - kBeta2) * grad * grad;
  const double t = static_cast<double>(slot.t);
  const double mhat = slot.m / (1.0 - std::pow(kBeta1, t));
  const double vhat = slot.v / (1.0 - std::pow(kBeta2, t));
  return -learning_rate * mhat / (std::sqrt(vhat) + kAdamEps);
}

double TabularValueEstimator::Value(const InfoStateKey& key) const {
  const auto it = table_.find(key);
  return it == table_.end() ? 0.0 : it->second.value;
}

double TabularValueEstimator::Loss(const std::vector<ValueSample>& batch,
                                   double l2) const {
  if (batch.empty()) return 0.0;
  double loss = 0.0;
  std::map<InfoStateKey, double> touched;
  for (const auto& s : batch) {
    const double v = Value(s.key);
    loss += (s.target - v) * (s.target - v);
    touched[s.key] = v;
  }
  loss /= static_cast<double>(batch.size());
  for (const auto& [k, v] : touched) loss += l2 * v * v;
  return loss;
}

void TabularValueEstimator::Update(const std::vector<ValueSample>& batch,
                                   double learning_rate, double l2) {
  if (batch.empty()) return;
  std::map<InfoStateKey, double> grad;
  const double scale = 2.0 / static_cast<double>(batch.size());
  for (const auto& s : batch) {
    if (!std::isfinite(s.target)) {
      Fail(ErrorCode::kInvalidArgument, "non-finite value target");
    }
    grad[s.key] += scale * (Value(s.key) - s.target);
  }
  for (auto& [key, g] : grad) {
    Entry& e = table_[key];
    e.value += AdamDelta(e.adam, g + 2.0 * l2 * e.value, learning_rate);
  }
}

std::uint64_t TabularValueEstimator::Checksum() const {
  return TableChecksum(table_, [](const Entry& e) { return Bits(e.value); });
}

nlohmann::json TabularValueEstimator::ToJson() const {
  nlohmann::json entries = nlohmann::json::array();
  std::map<InfoStateKey, const Entry*> sorted;
  for (const auto& [k, e] : table_) sorted[k] = &e;
  for (const auto& [k, e] : sorted) {
    entries.push_back({k.ToString(), e->value, AdamToJson(e->adam)});
  }
  return {{"kind", "tabular_value"}, {"version", 1}, {"entries", entries}};
}

std::shared_ptr<TabularValueEstimator> TabularValueEstimator::FromJson(
    const nlohmann::json& j) {
  auto out = std::make_shared<TabularValueEstimator>();
  try {
    if (j.at("kind") != "tabular_value") {
      Fail(ErrorCode::kInvalidArgument, "not a tabular value estimator");
    }
    for (const auto& e : j.at("entries")) {
      Entry entry;
      entry.value = e.at(1).get<double>();
      entry.adam = AdamFromJson(e.at(2));
      out->table_[InfoStateKey::Parse(e.at(0).get<std::string>())] = entry;
    }
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kInvalidArgument, "bad value estimator: ", e.what());
  }
  return out;
}

ActionsAndProbs TabularPolicyEstimator::Softmax(
    const Row* row, const std::vector<Action>& actions) const {
  ActionsAndProbs out;
  out.reserve(actions.size());
  double mx = -1e300;
  for (Action a : actions) {
    double z = 0.0;
    if (row != nullptr) {
      for (const auto& [b, logit] : *row) {
        if (b == a) {
          z = logit.value;
          break;
        }
      }
    }
    out.push_back({a, z});
    mx = std::max(mx, z);
  }
  double total = 0.0;
  for (auto& [a, z] : out) {
    z = std::exp(z - mx);
    total += z;
  }
  for (auto& [a, z] : out) z /= total;
  return out;
}

ActionsAndProbs TabularPolicyEstimator::Prior(
    const InfoStateKey& key, const std::vector<Action>& legal) const {
  if (legal.empty()) {
    Fail(ErrorCode::kInvalidArgument, "prior requested with no legal actions");
  }
  const auto it = table_.find(key);
  return Softmax(it == table_.end() ? nullptr : &it->second, legal);
}

namespace {

std::vector<Action> TargetActions(const ActionsAndProbs& target) {
  std::vector<Action> out;
  for (const auto& [a, p] : target) out.push_back(a);
  return out;
}

}  // namespace

double TabularPolicyEstimator::Loss(const std::vector<PolicySample>& batch,
                                    double l2) const {
  if (batch.empty()) return 0.0;
  double loss = 0.0;
  std::map<InfoStateKey, bool> touched;
  for (const auto& s : batch) {
    const auto p = Prior(s.key, TargetActions(s.target));
    for (size_t k = 0; k < p.size(); ++k) {
      if (s.target[k].second > 0.0) {
        loss -= s.target[k].second * std::log(p[k].second);
      }
    }
    touched[s.key] = true;
  }
  loss /= static_cast<double>(batch.size());
  for (const auto& [key, unused] : touched) {
    const auto it = table_.find(key);
    if (it == table_.end()) continue;
    for (const auto& [a, logit] : it->second) {
      loss += l2 * logit.value * logit.value;
    }
  }
  return loss;
}

void TabularPolicyEstimator::Update(const std::vector<PolicySample>& batch,
                                    double learning_rate, double l2) {
  if (batch.empty()) return;
  // Gradient of the batch-mean cross-entropy w.r.t. each logit: p - pi*.
  std::map<InfoStateKey, std::map<Action, double>> grad;
  const double scale = 1.0 / static_cast<double>(batch.size());
  for (const auto& s : batch) {
    const auto p = Prior(s.key, TargetActions(s.target));
    auto& g = grad[s.key];
    for (size_t k = 0; k < p.size(); ++k) {
      g[p[k].first] += scale * (p[k].second - s.target[k].second);
    }
  }
  for (auto& [key, g] : grad) {
    Row& row = table_[key];
    for (const auto& [a, ga] : g) {
      auto it = std::lower_bound(
          row.begin(), row.end(), a,
          [](const auto& entry, Action x) { return entry.first < x; });
      if (it == row.end() || it->first != a) it = row.insert(it, {a, Logit{}});
    }
    for (auto& [a, logit] : row) {
      const auto git = g.find(a);
      if (git == g.end()) continue;
      logit.value += AdamDelta(logit.adam, git->second + 2.0 * l2 * logit.value,
                               learning_rate);
    }
  }
}

std::uint64_t TabularPolicyEstimator::Checksum() const {
  return TableChecksum(table_, [](const Row& row) {
    std::uint64_t h = 0;
    for (const auto& [a, logit] : row) {
      h = Mix(h, static_cast<std::uint64_t>(a));
      h = Mix(h, Bits(logit.value));
    }
    return h;
  });
}

nlohmann::json TabularPolicyEstimator::ToJson() const {
  nlohmann::json entries = nlohmann::json::array();
  std::map<InfoStateKey, const Row*> sorted;
  for (const auto& [k, r] : table_) sorted[k] = &r;
  for (const auto& [k, row] : sorted) {
    nlohmann::json logits = nlohmann::json::array();
    for (const auto& [a, logit] : *row) {
      logits.push_back({a, logit.value, AdamToJson(logit.adam)});
    }
    entries.push_back({k.ToString(), logits});
  }
  return {{"kind", "tabular_policy_estimator"},
          {"version", 1},
          {"entries", entries}};
}

std::shared_ptr<TabularPolicyEstimator> TabularPolicyEstimator::FromJson(
    const nlohmann::json& j) {
  auto out = std::make_shared<TabularPolicyEstimator>();
  try {
    if (j.at("kind") != "tabular_policy_estimator") {
      Fail(ErrorCode::kInvalidArgument, "not a tabular policy estimator");
    }
    for (const auto& e : j.at("entries")) {
      Row row;
      for (const auto& l : e.at(1)) {
        Logit logit;
        logit.value = l.at(1).get<double>();
        logit.adam = AdamFromJson(l.at(2));
        row.push_back({l.at(0).get<Action>(), logit});
      }
      std::sort(row.begin(), row.end(),
                [](const auto& x, const auto& y) { return x.first < y.first; });
      out->table_[InfoStateKey::Parse(e.at(0).get<std::string>())] =
          std::move(row);
    }
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kInvalidArgument, "bad policy estimator: ", e.what());
  }
  return out;
}

double ValueLeafEvaluator::Evaluate(const State& h, Player searcher,
                                    const OpponentProfile&, BackpropType type,
                                    Rng&) const {
  if (h.IsTerminal()) return BackpropValue(h.Returns(), searcher, type);
  return v_ ? v_->Value(h.InfoStateKeyFor(searcher)) : 0.0;
}

RolloutLeafEvaluator::RolloutLeafEvaluator(
    int rollouts, std::shared_ptr<const Policy> rollout)
    : rollouts_(rollouts), rollout_(std::move(rollout)) {
  if (rollouts < 1) {
    Fail(ErrorCode::kInvalidArgument, "rollouts must be >= 1");
  }
  if (!rollout_) rollout_ = std::make_shared<UniformRandomPolicy>();
}

double RolloutLeafEvaluator::Evaluate(const State& h, Player searcher,
                                      const OpponentProfile& opponents,
                                      BackpropType type, Rng& rng) const {
  double total = 0.0;
  for (int r = 0; r < rollouts_; ++r) {
    std::unique_ptr<State> s = h.Clone();
    while (!s->IsTerminal()) {
      const Player p = s->CurrentPlayer();
      Action a;
      if (p == kChancePlayerId) {
        a = SampleAction(s->ChanceOutcomes(), rng);
      } else if (p == searcher) {
        a = rollout_->SampleAction(*s, p, rng);
      } else {
        a = opponents.policies[p]->SampleAction(*s, p, rng);
      }
      s = s->Child(a);
    }
    total += BackpropValue(s->Returns(), searcher, type);
  }
  return total / rollouts_;
}

}  // namespace sgpsro
