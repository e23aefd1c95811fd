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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <vector>

#include "gtest/gtest.h"
#include "sgpsro/belief/posterior.h"
#include "sgpsro/core/error.h"
#include "sgpsro/game/dond.h"
#include "sgpsro/game/kuhn_poker.h"
#include "sgpsro/game/matrix_game.h"
#include "sgpsro/game/registry.h"
#include "sgpsro/oracles/abr.h"
#include "sgpsro/oracles/exact_br.h"
#include "sgpsro/oracles/oracle.h"
#include "sgpsro/oracles/tabular_q.h"
#include "sgpsro/policy/evaluate.h"
#include "sgpsro/policy/policy.h"

namespace sgpsro {
namespace {

// The same action distribution everywhere.
class FixedDistPolicy : public Policy {
 public:
  explicit FixedDistPolicy(ActionsAndProbs dist) : dist_(std::move(dist)) {}
  ActionsAndProbs GetStatePolicy(const State&, Player) const override {
    return dist_;
  }
  nlohmann::json ToJson() const override { return {{"kind", "test_fixed"}}; }

 private:
  ActionsAndProbs dist_;
};

OpponentMixture Against(Player searcher, PolicyPtr opp) {
  std::vector<PolicyPtr> pols(2);
  pols[1 - searcher] = std::move(opp);
  return PureMixture(std::move(pols));
}

PolicyPtr AlwaysPass() {
  return std::make_shared<ConstantActionPolicy>(std::vector<Action>{kKuhnPass});
}

PolicyPtr AlwaysBet() {
  return std::make_shared<ConstantActionPolicy>(std::vector<Action>{kKuhnBet});
}

// Max over every pure policy of `player`, evaluated exactly.
double BruteForceBestValue(const Game& game, Player player,
                           const OpponentMixture& mix) {
  const auto states = EnumerateInfoStates(game, player);
  size_t combos = 1;
  for (const auto& [key, legal] : states) combos *= legal.size();
  double best = -1e300;
  for (size_t c = 0; c < combos; ++c) {
    auto pol = std::make_shared<TabularPolicy>();
    size_t rest = c;
    for (const auto& [key, legal] : states) {
      const Action a = legal[rest % legal.size()];
      rest /= legal.size();
      ActionsAndProbs d;
      for (Action b : legal) d.push_back({b, b == a ? 1.0 : 0.0});
      pol->Set(key, d);
    }
    best = std::max(best, ExpectedReturnAgainst(game, player, pol, mix));
  }
  return best;
}

TEST(ExactBestResponseTest, KuhnAgainstAlwaysPass) {
  auto game = LoadGame("kuhn_poker");
  for (Player i : {0, 1}) {
    const auto mix = Against(i, AlwaysPass());
    const auto br = ExactBestResponse(*game, i, mix);
    // A bet is always folded to, winning the opponent's ante.
    EXPECT_NEAR(br.value, 1.0, 1e-12) << "player " << i;
    EXPECT_NEAR(ExpectedReturnAgainst(*game, i, AlwaysBet(), mix), 1.0, 1e-12);
    EXPECT_NEAR(ExpectedReturnAgainst(*game, i, br.policy, mix), br.value,
                1e-12);
  }
}

TEST(ExactBestResponseTest, MatchesBruteForceOnKuhnMixtures) {
  auto game = LoadGame("kuhn_poker");
  Rng rng(11);
  for (int trial = 0; trial < 6; ++trial) {
    const Player i = trial % 2;
    OpponentMixture mix(3);
    double total = 0.0;
    for (auto& prof : mix) {
      prof.policies.resize(2);
      prof.policies[1 - i] =
          RandomTabularPolicy(*game, 1 - i, rng, /*pure=*/trial < 3);
      prof.weight = 0.1 + Uniform01(rng);
      total += prof.weight;
    }
    for (auto& prof : mix) prof.weight /= total;
    const auto br = ExactBestResponse(*game, i, mix);
    EXPECT_NEAR(br.value, BruteForceBestValue(*game, i, mix), 1e-10);
    EXPECT_NEAR(ExpectedReturnAgainst(*game, i, br.policy, mix), br.value,
                1e-10);
    EXPECT_GE(br.value + 1e-12,
              ExpectedReturnAgainst(
                  *game, i, std::make_shared<UniformRandomPolicy>(), mix));
  }
}

TEST(ExactBestResponseTest, DominatesUniformOnMiniDond) {
  auto game = std::make_shared<const DondGame>(MiniDondParams());
  for (Player i : {0, 1}) {
    const auto mix = Against(i, std::make_shared<DondRulePolicy>(4, 4));
    const auto br = ExactBestResponse(*game, i, mix);
    const double uniform = ExpectedReturnAgainst(
        *game, i, std::make_shared<UniformRandomPolicy>(), mix);
    EXPECT_GT(br.value, uniform);
    EXPECT_NEAR(ExpectedReturnAgainst(*game, i, br.policy, mix), br.value,
                1e-9);
  }
}

TEST(ExactBestResponseTest, ZeroSumNashValue) {
  // Column mix (2/7, 5/7) makes the row player indifferent; value 1/7.
  PayoffTensor u({2, 2});
  const double row[2][2] = {{3, -1}, {-2, 1}};
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      u.At(u.Flatten({r, c}), 0) = row[r][c];
      u.At(u.Flatten({r, c}), 1) = -row[r][c];
    }
  }
  auto game = std::make_shared<MatrixGame>(u);
  const auto mix = Against(0, std::make_shared<FixedDistPolicy>(ActionsAndProbs{
                                  {0, 2.0 / 7.0}, {1, 5.0 / 7.0}}));
  EXPECT_NEAR(ExactBestResponse(*game, 0, mix).value, 1.0 / 7.0, 1e-12);

  auto pennies = MakeMatchingPennies();
  const auto half = Against(1, std::make_shared<FixedDistPolicy>(
                                   ActionsAndProbs{{0, 0.5}, {1, 0.5}}));
  EXPECT_NEAR(ExactBestResponse(*pennies, 1, half).value, 0.0, 1e-12);
}

TEST(ExactBestResponseTest, BudgetExceeded) {
  auto game = LoadGame("kuhn_poker");
  try {
    ExactBestResponse(*game, 0, Against(0, AlwaysPass()), 10);
    FAIL() << "expected a budget error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kResourceExhausted);
  }
}

std::shared_ptr<const MatrixGame> Bandit() {
  // Against column 0 w.p. 0.7: row 0 earns 0.7, row 1 earns 0.48.
  PayoffTensor u({2, 2});
  u.At(u.Flatten({0, 0}), 0) = 1.0;
  u.At(u.Flatten({0, 1}), 0) = 0.0;
  u.At(u.Flatten({1, 0}), 0) = 0.3;
  u.At(u.Flatten({1, 1}), 0) = 0.9;
  return std::make_shared<MatrixGame>(u);
}

OpponentMixture BanditOpponent() {
  return Against(0, std::make_shared<FixedDistPolicy>(
                        ActionsAndProbs{{0, 0.7}, {1, 0.3}}));
}

TEST(TabularQTest, BanditGreedyIsArgmaxMean) {
  auto game = Bandit();
  TabularQConfig cfg;
  cfg.episodes = 4000;
  cfg.learning_rate = 0.02;
  cfg.epsilon_start = 0.5;
  cfg.seed = 4;
  TabularQLearner q(game, 0, BanditOpponent(), cfg);
  q.Train();
  const InfoStateKey key = game->NewInitialState()->InfoStateKeyFor(0);
  EXPECT_EQ(q.Greedy(key), 0);
  EXPECT_NEAR(q.Q(key, 0), 0.7, 0.1);
  EXPECT_NEAR(q.Q(key, 1), 0.48, 0.1);
}

TEST(TabularQTest, GreedyOptimalTableIsAFixedPoint) {
  auto game = Bandit();
  TabularQConfig cfg;
  cfg.episodes = 2000;
  cfg.epsilon_start = cfg.epsilon_end = 0.0;
  // A deterministic column keeps the exact table exact under updates.
  TabularQLearner q(game, 0,
                    Against(0, std::make_shared<ConstantActionPolicy>(
                                   std::vector<Action>{0})),
                    cfg);
  auto root = game->NewInitialState();
  const InfoStateKey key = root->InfoStateKeyFor(0);
  q.SetQ(key, root->LegalActions(), 0, 1.0);
  q.SetQ(key, root->LegalActions(), 1, 0.3);
  const auto before = q.GreedyPolicy()->ToJson();
  q.Train();
  EXPECT_EQ(q.GreedyPolicy()->ToJson(), before);
}

TEST(TabularQTest, ChosenActionValueMatchesEnumeration) {
  // Kuhn as the first player is a two-step game.
  auto game = LoadGame("kuhn_poker");
  const auto mix = Against(0, std::make_shared<UniformRandomPolicy>());
  TabularQConfig cfg;
  // Returns are +-2, so a small step keeps the stationary noise near 0.04.
  cfg.episodes = 100000;
  cfg.learning_rate = 0.001;
  cfg.epsilon_start = 0.3;
  cfg.epsilon_end = 0.1;
  cfg.seed = 8;
  TabularQLearner q(game, 0, mix, cfg);
  q.Train();
  const auto greedy = q.GreedyPolicy();
  const std::vector<PolicyPtr> pols = {greedy, mix[0].policies[1]};
  for (Action card = 0; card < 3; ++card) {
    const InfoStateKey key =
        StateFromActions(*game, {card, card == 0 ? 1 : 0})->InfoStateKeyFor(0);
    const Action a = q.Greedy(key);
    double exact = 0.0;
    int deals = 0;
    for (Action other = 0; other < 3; ++other) {
      if (other == card) continue;
      const auto s = StateFromActions(*game, {card, other, a});
      exact += ExpectedReturnsFrom(*s, pols)[0];
      ++deals;
    }
    exact /= deals;
    EXPECT_NEAR(q.Q(key, a), exact, 0.1) << "card " << card;
  }
}

TEST(TabularQTest, ExactBrDominatesQDominatesUniform) {
  auto game = LoadGame("kuhn_poker");
  Rng rng(5);
  for (int trial = 0; trial < 4; ++trial) {
    const Player i = trial % 2;
    const auto mix = Against(i, RandomTabularPolicy(*game, 1 - i, rng));
    const double exact = ExactBestResponse(*game, i, mix).value;
    TabularQConfig cfg;
    cfg.episodes = 20000;
    cfg.learning_rate = 0.02;
    cfg.seed = trial;
    const double learned = ExpectedReturnAgainst(
        *game, i, TabularQResponse(game, i, mix, cfg), mix);
    const double uniform = ExpectedReturnAgainst(
        *game, i, std::make_shared<UniformRandomPolicy>(), mix);
    EXPECT_GE(exact + 1e-12, learned) << "trial " << trial;
    EXPECT_GE(learned + 0.02, uniform) << "trial " << trial;
  }
}

TEST(TabularQTest, ConfigValidation) {
  TabularQConfig cfg;
  cfg.episodes = 0;
  EXPECT_THROW(cfg.Validate(), Error);
  cfg = {};
  cfg.learning_rate = 0.0;
  EXPECT_THROW(cfg.Validate(), Error);
  EXPECT_THROW(TabularQConfig::FromJson({{"bogus", 1}}), Error);
  EXPECT_EQ(TabularQConfig::FromJson({{"episodes", 7}}).episodes, 7);
}

AbrConfig SmallAbr(int episodes) {
  AbrConfig cfg;
  cfg.num_episodes = episodes;
  cfg.search.simulations = 40;
  cfg.greedy_samples = 8;
  cfg.seed = 21;
  return cfg;
}

TEST(AbrTest, BuffersFilledAfterOneEpisode) {
  auto game = LoadGame("kuhn_poker");
  AbrTrainer t(game, 0, Against(0, std::make_shared<UniformRandomPolicy>()),
               SmallAbr(1));
  t.RunEpisode();
  ASSERT_GE(t.decisions(), 1);
  EXPECT_EQ(t.buffers().value.size(), t.decisions());
  EXPECT_EQ(t.buffers().policy.size(), t.decisions());
  EXPECT_EQ(t.buffers().gen.size(), t.decisions());
  for (const auto& s : t.buffers().policy.items()) {
    double mass = 0.0;
    for (const auto& [a, p] : s.target) mass += p;
    EXPECT_NEAR(mass, 1.0, 1e-12);
  }
}

TEST(AbrTest, DeterministicGivenSeed) {
  auto game = std::make_shared<const DondGame>(MiniDondParams());
  const auto mix = Against(0, std::make_shared<UniformRandomPolicy>());
  AbrTrainer a(game, 0, mix, SmallAbr(15));
  AbrTrainer b(game, 0, mix, SmallAbr(15));
  a.Train();
  b.Train();
  EXPECT_EQ(a.learners().Checksum(), b.learners().Checksum());
  ASSERT_EQ(a.buffers().value.size(), b.buffers().value.size());
  for (int k = 0; k < a.buffers().value.size(); ++k) {
    EXPECT_EQ(a.buffers().value[k].key, b.buffers().value[k].key);
    EXPECT_EQ(a.buffers().value[k].target, b.buffers().value[k].target);
  }
  for (int k = 0; k < a.buffers().gen.size(); ++k) {
    EXPECT_EQ(a.buffers().gen[k].history, b.buffers().gen[k].history);
  }
}

TEST(AbrTest, DelayedCopiesChangeOnlyAtRefresh) {
  auto game = std::make_shared<const DondGame>(MiniDondParams());
  AbrConfig cfg = SmallAbr(12);
  cfg.target_delay = 5;
  AbrTrainer t(game, 0, Against(0, std::make_shared<UniformRandomPolicy>()),
               cfg);
  std::uint64_t delayed = t.learners().DelayedChecksum();
  for (int e = 1; e <= 12; ++e) {
    t.RunEpisode();
    const std::uint64_t now = t.learners().DelayedChecksum();
    if (e % 5 == 0) {
      EXPECT_NE(now, delayed) << "episode " << e;
      EXPECT_EQ(now, t.learners().Checksum());
    } else {
      EXPECT_EQ(now, delayed) << "episode " << e;
    }
    delayed = now;
  }
}

TEST(AbrTest, FixedBatchCombinedLossNonIncreasing) {
  AbrConfig cfg;
  Rng rng(2);
  std::vector<ValueSample> vb;
  std::vector<PolicySample> pb;
  for (int k = 0; k < 64; ++k) {
    const InfoStateKey key(0, "s" + std::to_string(k % 9));
    vb.push_back({key, 10.0 * Uniform01(rng)});
    const double x = Uniform01(rng);
    pb.push_back({key, {{0, x}, {1, 0.5 * (1 - x)}, {2, 0.5 * (1 - x)}}});
  }
  LearnerBundle bundle;
  bundle.v = std::make_shared<TabularValueEstimator>();
  bundle.p = std::make_shared<TabularPolicyEstimator>();
  double prev = bundle.v->Loss(vb, cfg.c1) + bundle.p->Loss(pb, cfg.c1);
  for (int step = 0; step < 100; ++step) {
    bundle.v->Update(vb, cfg.lr(), cfg.c1);
    bundle.p->Update(pb, cfg.lr(), cfg.c1);
    const double loss = bundle.v->Loss(vb, cfg.c1) + bundle.p->Loss(pb, cfg.c1);
    EXPECT_LE(loss, prev + 1e-12) << "step " << step;
    prev = loss;
  }
}

TEST(AbrTest, UpdateLearnersConvergesToSampleMeans) {
  AbrConfig cfg;
  TrainBuffers buffers(1000);
  Rng rng(6);
  const InfoStateKey key(0, "terminal-adjacent");
  double mean_return = 0.0;
  std::vector<double> mean_pi(3, 0.0);
  const int n = 200;
  for (int k = 0; k < n; ++k) {
    const double r = Uniform01(rng) < 0.3 ? 2.0 : 0.5;
    buffers.value.Add({key, r});
    mean_return += r / n;
    const int hot = static_cast<int>(rng() % 3);
    ActionsAndProbs pi;
    for (int a = 0; a < 3; ++a) {
      pi.push_back({a, a == hot ? 0.8 : 0.1});
      mean_pi[a] += (a == hot ? 0.8 : 0.1) / n;
    }
    buffers.policy.Add({key, pi});
  }
  LearnerBundle bundle;
  bundle.v = std::make_shared<TabularValueEstimator>();
  bundle.p = std::make_shared<TabularPolicyEstimator>();
  bundle.g = nullptr;
  for (int step = 0; step < 6000; ++step) {
    UpdateLearners(bundle, buffers, cfg, rng);
  }
  // Batches of 64 keep some sampling noise in the last Adam steps.
  EXPECT_NEAR(bundle.v->Value(key), mean_return, 0.06);
  const auto prior = bundle.p->Prior(key, {0, 1, 2});
  for (int a = 0; a < 3; ++a) EXPECT_NEAR(prior[a].second, mean_pi[a], 0.05);
}

TEST(AbrTest, RejectsBadConfigs) {
  auto game = LoadGame("kuhn_poker");
  const auto mix = Against(0, std::make_shared<UniformRandomPolicy>());
  AbrConfig cfg = SmallAbr(0);
  EXPECT_THROW(AbrTrainer(game, 0, mix, cfg), Error);
  cfg = SmallAbr(1);
  cfg.belief = BeliefKind::kCheat;
  EXPECT_THROW(AbrTrainer(game, 0, mix, cfg), Error);
  AbrTrainer t(game, 0, mix, SmallAbr(1));
  EXPECT_THROW(t.Train(0), Error);
  EXPECT_THROW(AbrConfig::FromJson({{"num_episodes", 0}}), Error);
  EXPECT_THROW(AbrConfig::FromJson({{"returned", "nope"}}), Error);
  const auto c = AbrConfig::FromJson(
      {{"num_episodes", 3}, {"search", {{"backprop", "nbs"}}}});
  EXPECT_EQ(c.lr(), 5e-4);
  EXPECT_EQ(c.search.cuct(), 100.0);
}

TEST(AbrTest, ReturnedPoliciesRoundTrip) {
  auto game = LoadGame("kuhn_poker");
  const auto mix = Against(1, AlwaysBet());
  PolicyResolver resolver;
  resolver.inline_policy = [](const nlohmann::json& j) {
    return BasicPolicyFromJson(j);
  };
  for (auto mode : {ReturnedPolicy::kGreedyValue, ReturnedPolicy::kSearch,
                    ReturnedPolicy::kPolicyEstimator}) {
    AbrConfig cfg = SmallAbr(30);
    cfg.returned = mode;
    AbrTrainer t(game, 1, mix, cfg);
    t.Train();
    const PolicyPtr pol = t.FinalPolicy();
    const PolicyPtr back = AbrPolicyFromJson(pol->ToJson(), game, resolver);
    ASSERT_NE(back, nullptr);
    const std::vector<PolicyPtr> a = {AlwaysBet(), pol};
    const std::vector<PolicyPtr> b = {AlwaysBet(), back};
    EXPECT_NEAR(ExpectedReturns(*game, a)[1], ExpectedReturns(*game, b)[1],
                1e-12)
        << ReturnedPolicyName(mode);
  }
}

TEST(AbrTest, MiniDondBeatsUniformByHalfAPoint) {
  auto game = std::make_shared<const DondGame>(MiniDondParams());
  const auto mix = Against(0, std::make_shared<UniformRandomPolicy>());
  AbrConfig cfg;
  cfg.num_episodes = 2000;
  cfg.seed = 1;
  const auto start = std::chrono::steady_clock::now();
  const auto result = AbrTrain(game, 0, mix, cfg);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  const double learned = ExpectedReturnAgainst(*game, 0, result.policy, mix);
  const double uniform = ExpectedReturnAgainst(
      *game, 0, std::make_shared<UniformRandomPolicy>(), mix);
  RecordProperty("train_seconds", std::to_string(secs));
  RecordProperty("learned", std::to_string(learned));
  RecordProperty("uniform", std::to_string(uniform));
  EXPECT_GE(learned, uniform + 0.5)
      << "learned " << learned << " uniform " << uniform;
}

TEST(OracleRegistryTest, EveryOracleYieldsAPlayablePolicy) {
  auto game = LoadGame("kuhn_poker");
  const auto mix = Against(0, AlwaysPass());
  const double uniform = ExpectedReturnAgainst(
      *game, 0, std::make_shared<UniformRandomPolicy>(), mix);
  for (const auto& spec :
       {OracleSpec{"exact", {}}, OracleSpec{"tabular_q", {{"episodes", 3000}}},
        OracleSpec{
            "abr",
            {{"num_episodes", 200}, {"search", {{"simulations", 40}}}}}}) {
    const auto out = ComputeResponse(spec, game, 0, mix, 3);
    ASSERT_NE(out.policy, nullptr) << spec.kind;
    EXPECT_GT(ExpectedReturnAgainst(*game, 0, out.policy, mix), uniform)
        << spec.kind;
  }
  EXPECT_THROW(OracleSpec::FromJson("dqn"), Error);
  EXPECT_THROW(
      OracleSpec::FromJson({{"kind", "exact"}, {"params", {{"x", 1}}}}), Error);
}

}  // namespace
}  // namespace sgpsro
