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

#include "sgpsro/oracles/abr.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "sgpsro/core/error.h"
#include "sgpsro/game/dond.h"

namespace sgpsro {
namespace {

constexpr std::uint64_t kUpdateStream = 0x5eed0001;
constexpr std::uint64_t kBeliefStream = 0x5eed0002;

std::uint64_t Fnv(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t Mix(std::uint64_t a, std::uint64_t b) {
  return a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
}

std::uint64_t BeliefChecksum(const BeliefModelPtr& g) {
  const auto* learned = dynamic_cast<const LearnedDondBelief*>(g.get());
  return learned ? Fnv(learned->ToJson().dump()) : Fnv(g->name());
}

BeliefModelPtr CopyBelief(const BeliefModelPtr& g) {
  if (const auto* learned = dynamic_cast<const LearnedDondBelief*>(g.get())) {
    return std::make_shared<LearnedDondBelief>(*learned);
  }
  return g;  // fixed models never change
}

LearnedBeliefConfig LearnedConfigFor(const AbrConfig& c) {
  LearnedBeliefConfig lc;
  lc.learning_rate = c.lr();
  lc.l2 = c.c2;
  lc.batch_size = c.batch_size;
  lc.seed = DeriveSeed(c.seed, kBeliefStream);
  return lc;
}

// Moves opponents and chance forward until `player` acts or the game ends.
double RollToDecision(std::unique_ptr<State> h, Player player,
                      const OpponentProfile& profile, const ValueEstimator& v,
                      BackpropType type, Rng& rng) {
  while (!h->IsTerminal()) {
    const Player p = h->CurrentPlayer();
    if (p == player) return v.Value(h->InfoStateKeyFor(player));
    const Action a = p == kChancePlayerId
                         ? SampleAction(h->ChanceOutcomes(), rng)
                         : profile.policies[p]->SampleAction(*h, p, rng);
    h = h->Child(a);
  }
  return BackpropValue(h->Returns(), player, type);
}

ActionsAndProbs PureOn(const std::vector<Action>& legal, Action best) {
  ActionsAndProbs out;
  for (Action a : legal) out.push_back({a, a == best ? 1.0 : 0.0});
  return out;
}

nlohmann::json BeliefToJson(const BeliefModelPtr& g) {
  nlohmann::json j = {{"kind", g->name()}};
  if (const auto* learned = dynamic_cast<const LearnedDondBelief*>(g.get())) {
    j["model"] = learned->ToJson();
  }
  return j;
}

nlohmann::json PartsToJson(const AbrPolicyParts& parts) {
  return {{"player", parts.player},
          {"config", parts.config.ToJson()},
          {"opponents", MixtureToJson(parts.mixture)},
          {"belief", BeliefToJson(parts.belief)},
          {"value", parts.v->ToJson()},
          {"prior", parts.p->ToJson()}};
}

AbrPolicyParts PartsFromJson(const nlohmann::json& j,
                             std::shared_ptr<const Game> game,
                             const PolicyResolver& resolver) {
  AbrPolicyParts parts;
  parts.game = game;
  parts.player = j.at("player").get<Player>();
  parts.config = AbrConfig::FromJson(j.at("config"));
  parts.mixture = MixtureFromJson(j.at("opponents"), resolver);
  const auto& bj = j.at("belief");
  const BeliefKind kind = ParseBeliefKind(bj.at("kind").get<std::string>());
  if (kind == BeliefKind::kLearned) {
    parts.belief = LearnedDondBelief::FromJson(game, bj.at("model"));
  } else {
    parts.belief = MakeBeliefModel(kind, game, parts.mixture);
  }
  parts.v = TabularValueEstimator::FromJson(j.at("value"));
  parts.p = TabularPolicyEstimator::FromJson(j.at("prior"));
  return parts;
}

void CheckParts(const AbrPolicyParts& parts) {
  if (!parts.game || !parts.belief || !parts.v || !parts.p) {
    Fail(ErrorCode::kInvalidArgument, "incomplete ABR policy parts");
  }
  ValidateMixture(parts.mixture, parts.game->NumPlayers(), parts.player);
}

}  // namespace

std::string ReturnedPolicyName(ReturnedPolicy mode) {
  switch (mode) {
    case ReturnedPolicy::kSearch:
      return "search";
    case ReturnedPolicy::kPolicyEstimator:
      return "policy";
    case ReturnedPolicy::kGreedyValue:
      return "greedy_value";
  }
  return "?";
}

ReturnedPolicy ParseReturnedPolicy(const std::string& name) {
  if (name == "search") return ReturnedPolicy::kSearch;
  if (name == "policy" || name == "policy_estimator") {
    return ReturnedPolicy::kPolicyEstimator;
  }
  if (name == "greedy_value" || name == "greedy") {
    return ReturnedPolicy::kGreedyValue;
  }
  Fail(ErrorCode::kInvalidArgument, "unknown returned policy '", name,
       "' (expected search, policy or greedy_value)");
}

double DefaultAbrLearningRate(BackpropType type) {
  switch (type) {
    case BackpropType::kIR:
    case BackpropType::kIE:
      return 2e-3;
    case BackpropType::kSW:
      return 1e-3;
    case BackpropType::kNBS:
      return 5e-4;
  }
  return 1e-3;
}

BeliefKind AbrConfig::BeliefFor(const Game& game) const {
  if (belief) return *belief;
  return dynamic_cast<const DondGame*>(&game) ? BeliefKind::kLearned
                                              : BeliefKind::kExact;
}

void AbrConfig::Validate() const {
  if (num_episodes < 1) {
    Fail(ErrorCode::kInvalidArgument, "num_episodes must be >= 1, got ",
         num_episodes);
  }
  if (!(lr() > 0.0) || !std::isfinite(lr())) {
    Fail(ErrorCode::kInvalidArgument, "learning rate must be > 0");
  }
  if (!(c1 >= 0.0) || !(c2 >= 0.0)) {
    Fail(ErrorCode::kInvalidArgument, "L2 weights must be >= 0");
  }
  if (batch_size < 1 || buffer_capacity < 1 || target_delay < 1 ||
      updates_per_episode < 0 || greedy_samples < 1) {
    Fail(ErrorCode::kInvalidArgument,
         "batch_size, buffer_capacity, target_delay and greedy_samples must "
         "be >= 1 and updates_per_episode >= 0");
  }
  if (belief == BeliefKind::kCheat) {
    Fail(ErrorCode::kInvalidArgument,
         "the cheat belief model cannot be used for training");
  }
  search.Validate();
}

nlohmann::json AbrConfig::ToJson() const {
  nlohmann::json s = {{"simulations", search.simulations},
                      {"backprop", BackpropTypeName(search.backprop)},
                      {"seed", search.seed}};
  if (search.c_uct) s["c_uct"] = *search.c_uct;
  nlohmann::json j = {{"num_episodes", num_episodes},
                      {"c1", c1},
                      {"c2", c2},
                      {"batch_size", batch_size},
                      {"buffer_capacity", buffer_capacity},
                      {"target_delay", target_delay},
                      {"updates_per_episode", updates_per_episode},
                      {"search", s},
                      {"returned", ReturnedPolicyName(returned)},
                      {"greedy_samples", greedy_samples},
                      {"seed", seed}};
  if (learning_rate) j["learning_rate"] = *learning_rate;
  if (belief) j["belief"] = BeliefKindName(*belief);
  return j;
}

AbrConfig AbrConfig::FromJson(const nlohmann::json& j) {
  AbrConfig c;
  if (j.is_null()) return c;
  if (!j.is_object()) {
    Fail(ErrorCode::kInvalidArgument, "ABR config must be a JSON object");
  }
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "num_episodes") {
        c.num_episodes = value.get<int>();
      } else if (key == "learning_rate") {
        c.learning_rate = value.get<double>();
      } else if (key == "c1") {
        c.c1 = value.get<double>();
      } else if (key == "c2") {
        c.c2 = value.get<double>();
      } else if (key == "batch_size") {
        c.batch_size = value.get<int>();
      } else if (key == "buffer_capacity") {
        c.buffer_capacity = value.get<int>();
      } else if (key == "target_delay") {
        c.target_delay = value.get<int>();
      } else if (key == "updates_per_episode") {
        c.updates_per_episode = value.get<int>();
      } else if (key == "returned") {
        c.returned = ParseReturnedPolicy(value.get<std::string>());
      } else if (key == "greedy_samples") {
        c.greedy_samples = value.get<int>();
      } else if (key == "seed") {
        c.seed = value.get<std::uint64_t>();
      } else if (key == "belief") {
        c.belief = ParseBeliefKind(value.get<std::string>());
      } else if (key == "search") {
        for (const auto& [sk, sv] : value.items()) {
          if (sk == "simulations") {
            c.search.simulations = sv.get<int>();
          } else if (sk == "c_uct") {
            c.search.c_uct = sv.get<double>();
          } else if (sk == "backprop") {
            c.search.backprop = ParseBackpropType(sv.get<std::string>());
          } else if (sk == "seed") {
            c.search.seed = sv.get<std::uint64_t>();
          } else {
            Fail(ErrorCode::kInvalidArgument, "unknown search option '", sk,
                 "'");
          }
        }
      } else {
        Fail(ErrorCode::kInvalidArgument, "unknown ABR option '", key, "'");
      }
    } catch (const nlohmann::json::exception& e) {
      Fail(ErrorCode::kInvalidArgument, "ABR option '", key, "': ", e.what());
    }
  }
  c.Validate();
  return c;
}

void LearnerBundle::RefreshDelayed() {
  v_delayed = std::make_shared<TabularValueEstimator>(*v);
  p_delayed = std::make_shared<TabularPolicyEstimator>(*p);
  g_delayed = CopyBelief(g);
}

std::uint64_t LearnerBundle::Checksum() const {
  return Mix(Mix(v->Checksum(), p->Checksum()), BeliefChecksum(g));
}

std::uint64_t LearnerBundle::DelayedChecksum() const {
  return Mix(Mix(v_delayed->Checksum(), p_delayed->Checksum()),
             BeliefChecksum(g_delayed));
}

void UpdateLearners(LearnerBundle& bundle, const TrainBuffers& buffers,
                    const AbrConfig& config, Rng& rng) {
  if (!buffers.value.empty()) {
    std::vector<ValueSample> batch;
    for (int i : buffers.value.SampleIndices(config.batch_size, rng)) {
      batch.push_back(buffers.value[i]);
    }
    bundle.v->Update(batch, config.lr(), config.c1);
  }
  if (!buffers.policy.empty()) {
    std::vector<PolicySample> batch;
    for (int i : buffers.policy.SampleIndices(config.batch_size, rng)) {
      batch.push_back(buffers.policy[i]);
    }
    bundle.p->Update(batch, config.lr(), config.c1);
  }
  if (auto* learned = dynamic_cast<LearnedDondBelief*>(bundle.g.get())) {
    learned->Fit(buffers.gen, 1);
  }
}

AbrTrainer::AbrTrainer(std::shared_ptr<const Game> game, Player player,
                       OpponentMixture mixture, AbrConfig config)
    : game_(std::move(game)),
      player_(player),
      mixture_(std::move(mixture)),
      config_(config),
      buffers_(config.buffer_capacity) {
  config_.Validate();
  if (player_ < 0 || player_ >= game_->NumPlayers()) {
    Fail(ErrorCode::kInvalidArgument, "player ", player_, " out of range");
  }
  ValidateMixture(mixture_, game_->NumPlayers(), player_);
  bundle_.v = std::make_shared<TabularValueEstimator>();
  bundle_.p = std::make_shared<TabularPolicyEstimator>();
  bundle_.g = MakeBeliefModel(config_.BeliefFor(*game_), game_, mixture_,
                              LearnedConfigFor(config_));
  bundle_.RefreshDelayed();
}

double AbrTrainer::RunEpisode() {
  const std::uint64_t episode_seed = DeriveSeed(config_.seed, episodes_done_);
  Rng rng(episode_seed);
  std::vector<double> weights;
  for (const auto& p : mixture_) weights.push_back(p.weight);
  const OpponentProfile& profile = mixture_[SampleIndex(weights, rng)];
  // The sampled profile drives play; search only sees the mixture through
  // its type posterior.
  const ValueLeafEvaluator evaluator(bundle_.v_delayed);
  SearchInputs inputs;
  inputs.belief = bundle_.g_delayed.get();
  inputs.opponents = &mixture_;
  inputs.evaluator = &evaluator;
  inputs.prior = bundle_.p_delayed.get();

  auto state = game_->NewInitialState();
  std::vector<InfoStateKey> visited;
  int decision = 0;
  while (!state->IsTerminal()) {
    const Player p = state->CurrentPlayer();
    Action a;
    if (p == kChancePlayerId) {
      a = SampleAction(state->ChanceOutcomes(), rng);
    } else if (p != player_) {
      a = profile.policies[p]->SampleAction(*state, p, rng);
    } else {
      SearchConfig sc = config_.search;
      sc.seed = DeriveSeed(episode_seed, decision++);
      const SearchResult r = IsmctsSearch(*state, player_, inputs, sc);
      const InfoStateKey key = state->InfoStateKeyFor(player_);
      buffers_.policy.Add(PolicySample{key, r.policy});
      buffers_.gen.Add(GenEntry{key, state->ActionHistory()});
      visited.push_back(key);
      a = r.action;
      ++decisions_;
    }
    state = state->Child(a);
  }
  const double target =
      BackpropValue(state->Returns(), player_, config_.search.backprop);
  for (const auto& key : visited) buffers_.value.Add(ValueSample{key, target});

  Rng update_rng(DeriveSeed(episode_seed, kUpdateStream));
  for (int u = 0; u < config_.updates_per_episode; ++u) {
    UpdateLearners(bundle_, buffers_, config_, update_rng);
  }
  ++episodes_done_;
  if (episodes_done_ % config_.target_delay == 0) bundle_.RefreshDelayed();
  return state->Returns()[player_];
}

void AbrTrainer::Train(int episodes) {
  if (episodes < 1) {
    Fail(ErrorCode::kInvalidArgument, "episode budget must be >= 1, got ",
         episodes);
  }
  for (int e = 0; e < episodes; ++e) RunEpisode();
}

PolicyPtr AbrTrainer::FinalPolicy() const {
  AbrPolicyParts parts;
  parts.game = game_;
  parts.player = player_;
  parts.mixture = mixture_;
  parts.belief = CopyBelief(bundle_.g);
  parts.v = std::make_shared<TabularValueEstimator>(*bundle_.v);
  parts.p = std::make_shared<TabularPolicyEstimator>(*bundle_.p);
  parts.config = config_;
  switch (config_.returned) {
    case ReturnedPolicy::kSearch:
      return std::make_shared<SearchPolicy>(std::move(parts));
    case ReturnedPolicy::kPolicyEstimator:
      return std::make_shared<PolicyEstimatorPolicy>(parts.p);
    case ReturnedPolicy::kGreedyValue:
      return std::make_shared<GreedyValuePolicy>(std::move(parts));
  }
  Fail(ErrorCode::kInternal, "unhandled returned policy");
}

AbrResult AbrTrain(std::shared_ptr<const Game> game, Player player,
                   const OpponentMixture& mixture, const AbrConfig& config) {
  AbrTrainer trainer(std::move(game), player, mixture, config);
  trainer.Train();
  return AbrResult{trainer.learners(), trainer.FinalPolicy()};
}

GreedyValuePolicy::GreedyValuePolicy(AbrPolicyParts parts)
    : parts_(std::move(parts)) {
  CheckParts(parts_);
}

std::vector<double> GreedyValuePolicy::ActionValues(const State& state) const {
  const Player i = parts_.player;
  const InfoStateKey key = state.InfoStateKeyFor(i);
  Rng rng(DeriveSeed(parts_.config.seed, key.StableHash()));
  const auto legal = state.LegalActions();
  std::vector<double> values(legal.size(), 0.0);
  const int n = parts_.config.greedy_samples;
  for (int s = 0; s < n; ++s) {
    const auto h = parts_.belief->Sample(state, i, rng);
    const auto& profile = parts_.mixture[SampleOpponentProfile(
        *h, i, parts_.mixture, rng, /*prior_fallback=*/true)];
    for (size_t k = 0; k < legal.size(); ++k) {
      values[k] += RollToDecision(h->Child(legal[k]), i, profile, *parts_.v,
                                  parts_.config.search.backprop, rng);
    }
  }
  for (double& x : values) x /= n;
  return values;
}

ActionsAndProbs GreedyValuePolicy::GetStatePolicy(const State& state,
                                                  Player player) const {
  if (player != parts_.player || state.CurrentPlayer() != player) {
    Fail(ErrorCode::kInvalidArgument, "greedy-value policy of player ",
         parts_.player, " queried for player ", player);
  }
  const InfoStateKey key = state.InfoStateKeyFor(player);
  {
    std::lock_guard<std::mutex> lock(mu_);
    const auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  const auto legal = state.LegalActions();
  const auto values = ActionValues(state);
  const size_t best =
      std::max_element(values.begin(), values.end()) - values.begin();
  ActionsAndProbs out = PureOn(legal, legal[best]);
  std::lock_guard<std::mutex> lock(mu_);
  cache_.emplace(key, out);
  return out;
}

nlohmann::json GreedyValuePolicy::ToJson() const {
  nlohmann::json j = PartsToJson(parts_);
  j["kind"] = "abr_greedy_value";
  return j;
}

SearchPolicy::SearchPolicy(AbrPolicyParts parts)
    : parts_(std::move(parts)),
      evaluator_(std::make_shared<ValueLeafEvaluator>(parts_.v)) {
  CheckParts(parts_);
}

ActionsAndProbs SearchPolicy::GetStatePolicy(const State& state,
                                             Player player) const {
  if (player != parts_.player || state.CurrentPlayer() != player) {
    Fail(ErrorCode::kInvalidArgument, "search policy of player ", parts_.player,
         " queried for player ", player);
  }
  const InfoStateKey key = state.InfoStateKeyFor(player);
  {
    std::lock_guard<std::mutex> lock(mu_);
    const auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  SearchInputs inputs;
  inputs.belief = parts_.belief.get();
  inputs.opponents = &parts_.mixture;
  inputs.evaluator = evaluator_.get();
  inputs.prior = parts_.p.get();
  SearchConfig sc = parts_.config.search;
  sc.seed = DeriveSeed(parts_.config.seed, key.StableHash());
  ActionsAndProbs out = IsmctsSearch(state, player, inputs, sc).policy;
  std::lock_guard<std::mutex> lock(mu_);
  cache_.emplace(key, out);
  return out;
}

nlohmann::json SearchPolicy::ToJson() const {
  nlohmann::json j = PartsToJson(parts_);
  j["kind"] = "abr_search";
  return j;
}

ActionsAndProbs PolicyEstimatorPolicy::GetStatePolicy(const State& state,
                                                      Player player) const {
  return p_->Prior(state.InfoStateKeyFor(player), state.LegalActions());
}

nlohmann::json PolicyEstimatorPolicy::ToJson() const {
  return {{"kind", "abr_policy_estimator"}, {"prior", p_->ToJson()}};
}

PolicyPtr AbrPolicyFromJson(const nlohmann::json& j,
                            std::shared_ptr<const Game> game,
                            const PolicyResolver& resolver) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "abr_greedy_value") {
    return std::make_shared<GreedyValuePolicy>(
        PartsFromJson(j, std::move(game), resolver));
  }
  if (kind == "abr_search") {
    return std::make_shared<SearchPolicy>(
        PartsFromJson(j, std::move(game), resolver));
  }
  if (kind == "abr_policy_estimator") {
    return std::make_shared<PolicyEstimatorPolicy>(
        TabularPolicyEstimator::FromJson(j.at("prior")));
  }
  return nullptr;
}

}  // namespace sgpsro
