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
#include <cmath>
#include <memory>
#include <vector>

#include "gtest/gtest.h"
#include "sgpsro/belief/belief_model.h"
#include "sgpsro/core/error.h"
#include "sgpsro/core/payoff_tensor.h"
#include "sgpsro/game/dond.h"
#include "sgpsro/game/kuhn_poker.h"
#include "sgpsro/game/matrix_game.h"
#include "sgpsro/game/registry.h"
#include "sgpsro/policy/policy.h"
#include "sgpsro/search/estimators.h"
#include "sgpsro/search/ismcts.h"

namespace sgpsro {
namespace {

SearchNode TwoChildNode() {
  SearchNode node;
  node.children = {{0, 0.5, 2, 4.0}, {1, 0.5, 1, 1.0}};
  node.total_visits = 3;
  return node;
}

TEST(MaxPuctTest, TabulatedExample) {
  const SearchNode node = TwoChildNode();
  // Hand evaluation: 4/2 + 0.5 sqrt(3)/3 and 1/1 + 0.5 sqrt(3)/2.
  const double a = 2.0 + 0.5 * std::sqrt(3.0) / 3.0;
  const double b = 1.0 + 0.5 * std::sqrt(3.0) / 2.0;
  EXPECT_NEAR(a, 2.289, 5e-4);
  EXPECT_NEAR(b, 1.433, 5e-4);
  EXPECT_EQ(MaxPuct(node, 1.0), 0);
}

TEST(MaxPuctTest, ZeroExplorationIsGreedy) {
  SearchNode node;
  node.children = {{0, 0.9, 5, 5.0}, {1, 0.05, 1, 3.0}, {2, 0.05, 0, 0.0}};
  node.total_visits = 6;
  EXPECT_EQ(MaxPuct(node, 0.0), 1);
}

TEST(MaxPuctTest, UnvisitedHighPriorWinsUnderHugeConstant) {
  SearchNode node;
  node.children = {{0, 0.0, 10, 100.0}, {3, 1.0, 0, 0.0}};
  node.total_visits = 10;
  EXPECT_EQ(MaxPuct(node, 1e6), 3);
}

TEST(MaxPuctTest, TiesGoToLowestAction) {
  SearchNode node;
  node.children = {{2, 0.5, 0, 0.0}, {7, 0.5, 0, 0.0}};
  EXPECT_EQ(MaxPuct(node, 1.0), 2);
  node.children = {{4, 0.25, 1, 1.0}, {5, 0.25, 1, 1.0}, {6, 0.5, 3, 0.0}};
  node.total_visits = 5;
  EXPECT_EQ(MaxPuct(node, 0.0), 4);
  EXPECT_THROW(MaxPuct(SearchNode{}, 1.0), Error);
}

TEST(BackpropTest, TabulatedExamples) {
  const std::vector<double> r = {6.0, 4.0};
  EXPECT_EQ(BackpropValue(r, 0, BackpropType::kIR), 6.0);
  EXPECT_EQ(BackpropValue(r, 0, BackpropType::kIE), 6.0);
  EXPECT_EQ(BackpropValue(r, 0, BackpropType::kSW), 10.0);
  EXPECT_EQ(BackpropValue(r, 0, BackpropType::kNBS), 24.0);
  EXPECT_EQ(BackpropValue({4.0, 6.0}, 0, BackpropType::kIE), 3.0);
  for (auto t : {BackpropType::kIR, BackpropType::kIE, BackpropType::kSW,
                 BackpropType::kNBS}) {
    EXPECT_EQ(BackpropValue({0.0, 0.0}, 1, t), 0.0);
  }
}

TEST(BackpropTest, SearcherIndexAndPlayerCount) {
  EXPECT_EQ(BackpropValue({6.0, 4.0}, 1, BackpropType::kIR), 4.0);
  EXPECT_EQ(BackpropValue({6.0, 4.0}, 1, BackpropType::kIE), 3.0);
  EXPECT_EQ(BackpropValue({1.0, 2.0, 3.0}, 2, BackpropType::kIR), 3.0);
  for (auto t : {BackpropType::kIE, BackpropType::kSW, BackpropType::kNBS}) {
    EXPECT_THROW(BackpropValue({1.0, 2.0, 3.0}, 0, t), Error);
  }
  EXPECT_THROW(BackpropValue({1.0, 2.0}, 2, BackpropType::kIR), Error);
  EXPECT_EQ(ParseBackpropType("nbs"), BackpropType::kNBS);
  EXPECT_THROW(ParseBackpropType("XY"), Error);
}

TEST(SearchConfigTest, Defaults) {
  SearchConfig cfg;
  EXPECT_EQ(cfg.simulations, 300);
  EXPECT_EQ(cfg.cuct(), 20.0);
  cfg.backprop = BackpropType::kIE;
  EXPECT_EQ(cfg.cuct(), 20.0);
  cfg.backprop = BackpropType::kSW;
  EXPECT_EQ(cfg.cuct(), 40.0);
  cfg.backprop = BackpropType::kNBS;
  EXPECT_EQ(cfg.cuct(), 100.0);
  cfg.c_uct = 3.0;
  EXPECT_EQ(cfg.cuct(), 3.0);
  cfg.simulations = 0;
  EXPECT_THROW(cfg.Validate(), Error);
  cfg.simulations = 1;
  cfg.c_uct = -1.0;
  EXPECT_THROW(cfg.Validate(), Error);
}

// Random 4x4 game whose row `dominant` strictly beats every other row
// against every column.
std::shared_ptr<const MatrixGame> DominatedGame(Rng& rng, int dominant) {
  PayoffTensor u({4, 4});
  for (int c = 0; c < u.num_cells(); ++c) {
    for (int p = 0; p < 2; ++p) u.At(c, p) = 10.0 * Uniform01(rng);
  }
  for (int col = 0; col < 4; ++col) {
    double best = 0.0;
    for (int row = 0; row < 4; ++row)
      best = std::max(best, u.At({row, col}, 0));
    u.At(u.Flatten({dominant, col}), 0) = best + 0.5 + Uniform01(rng);
  }
  return std::make_shared<MatrixGame>(u);
}

TEST(IsmctsTest, PicksStrictlyDominantAction) {
  Rng rng(3);
  for (int trial = 0; trial < 8; ++trial) {
    const int dominant = trial % 4;
    auto game = DominatedGame(rng, dominant);
    // Exhaustive dominance check, independent of the search.
    for (int row = 0; row < 4; ++row) {
      if (row == dominant) continue;
      for (int col = 0; col < 4; ++col) {
        ASSERT_GT(game->payoffs().At({dominant, col}, 0),
                  game->payoffs().At({row, col}, 0));
      }
    }
    OpponentMixture mix;
    for (int col = 0; col < 3; ++col) {
      mix.push_back({{nullptr, std::make_shared<ConstantActionPolicy>(
                                   std::vector<Action>{col + trial % 2})},
                     1.0 / 3.0});
    }
    ExactBelief belief(game, mix);
    ValueLeafEvaluator zero(nullptr);
    SearchInputs in{&belief, &mix, &zero, nullptr};
    SearchConfig cfg;
    cfg.seed = trial;
    auto root = game->NewInitialState();
    const auto res = IsmctsSearch(*root, 0, in, cfg);
    EXPECT_EQ(res.action, dominant) << "trial " << trial;
  }
}

TEST(IsmctsTest, VisitInvariantsAndDeterminism) {
  auto game = std::make_shared<const DondGame>(MiniDondParams());
  auto opp = std::make_shared<DondRulePolicy>(4, 4);
  auto mix = PureMixture({nullptr, opp});
  UniformBelief belief(game);
  RolloutLeafEvaluator rollout;
  SearchInputs in{&belief, &mix, &rollout, nullptr};
  Rng rng(1);
  for (int trial = 0; trial < 5; ++trial) {
    auto s = game->NewStateForInstance(
        static_cast<int>(rng() % game->instances().size()));
    s = s->Child(s->LegalActions()[rng() % s->LegalActions().size()]);
    s = s->Child(opp->SampleAction(*s, 1, rng));
    if (s->IsTerminal()) {
      --trial;
      continue;
    }
    SearchConfig cfg;
    cfg.simulations = 50 + 37 * trial;
    cfg.seed = trial;
    const auto res = IsmctsSearch(*s, 0, in, cfg);
    EXPECT_EQ(res.root_visits, cfg.simulations);
    int sum = 0;
    for (const auto& c : res.root_children) sum += c.visits;
    EXPECT_EQ(sum, res.root_visits);
    double mass = 0.0;
    const auto legal = s->LegalActions();
    ASSERT_EQ(res.policy.size(), legal.size());
    double best = -1.0;
    Action argmax = kInvalidAction;
    for (size_t k = 0; k < legal.size(); ++k) {
      EXPECT_EQ(res.policy[k].first, legal[k]);
      EXPECT_NEAR(
          res.policy[k].second,
          static_cast<double>(res.root_children[k].visits) / cfg.simulations,
          1e-15);
      mass += res.policy[k].second;
      if (res.policy[k].second > best) {
        best = res.policy[k].second;
        argmax = legal[k];
      }
    }
    EXPECT_NEAR(mass, 1.0, 1e-12);
    EXPECT_EQ(res.action, argmax);
    EXPECT_LE(res.tree_size, cfg.simulations + 1);

    const auto again = IsmctsSearch(*s, 0, in, cfg);
    EXPECT_EQ(again.action, res.action);
    EXPECT_EQ(again.policy, res.policy);
  }
}

TEST(IsmctsTest, RejectsBadInputs) {
  auto game = LoadGame("kuhn_poker");
  auto mix = PureMixture({nullptr, std::make_shared<UniformRandomPolicy>()});
  UniformBelief belief(game);
  ValueLeafEvaluator zero(nullptr);
  SearchInputs in{&belief, &mix, &zero, nullptr};
  auto s = StateFromActions(*game, {0, 1});
  SearchConfig cfg;
  cfg.simulations = 0;
  EXPECT_THROW(IsmctsSearch(*s, 0, in, cfg), Error);
  cfg.simulations = 10;
  EXPECT_THROW(IsmctsSearch(*s, 1, in, cfg), Error);
  SearchInputs missing{nullptr, &mix, &zero, nullptr};
  EXPECT_THROW(IsmctsSearch(*s, 0, missing, cfg), Error);
  auto wrong_seat =
      PureMixture({std::make_shared<UniformRandomPolicy>(), nullptr});
  SearchInputs bad_mix{&belief, &wrong_seat, &zero, nullptr};
  EXPECT_THROW(IsmctsSearch(*s, 0, bad_mix, cfg), Error);
  EXPECT_NO_THROW(IsmctsSearch(*s, 0, in, cfg));
}

TEST(IsmctsTest, SampledProfilesStayInPosteriorSupport) {
  auto game = LoadGame("kuhn_poker");
  OpponentMixture mix(2);
  mix[0].policies = {
      std::make_shared<ConstantActionPolicy>(std::vector<Action>{kKuhnPass}),
      nullptr};
  mix[1].policies = {std::make_shared<UniformRandomPolicy>(), nullptr};
  mix[0].weight = 0.7;
  mix[1].weight = 0.3;
  auto h = StateFromActions(*game, {1, 2, kKuhnBet});
  Rng rng(0);
  for (int i = 0; i < 10000; ++i) {
    ASSERT_EQ(SampleOpponentProfile(*h, 1, mix, rng), 1);
  }
}

// Perfect-information value for `searcher` with fixed opponents.
double Expectimax(const State& h, Player searcher, const OpponentProfile& opp) {
  if (h.IsTerminal()) return h.Returns()[searcher];
  const Player p = h.CurrentPlayer();
  if (p == kChancePlayerId) {
    double v = 0.0;
    for (const auto& [a, pr] : h.ChanceOutcomes()) {
      v += pr * Expectimax(*h.Child(a), searcher, opp);
    }
    return v;
  }
  if (p != searcher) {
    double v = 0.0;
    for (const auto& [a, pr] : opp.policies[p]->GetStatePolicy(h, p)) {
      if (pr > 0.0) v += pr * Expectimax(*h.Child(a), searcher, opp);
    }
    return v;
  }
  double best = -1e300;
  for (Action a : h.LegalActions()) {
    best = std::max(best, Expectimax(*h.Child(a), searcher, opp));
  }
  return best;
}

TEST(IsmctsTest, CheatSearchValueApproachesBestResponse) {
  auto game = std::make_shared<const DondGame>(MiniDondParams());
  auto opp = std::make_shared<DondRulePolicy>(4, 4);
  auto mix = PureMixture({nullptr, opp});
  CheatBelief belief(game);
  RolloutLeafEvaluator rollout;
  SearchInputs in{&belief, &mix, &rollout, nullptr};
  Rng rng(9);
  for (int trial = 0; trial < 6; ++trial) {
    auto s = game->NewStateForInstance(
        static_cast<int>(rng() % game->instances().size()));
    const double exact = Expectimax(*s, 0, mix[0]);
    SearchConfig cfg;
    cfg.simulations = 3000;
    cfg.seed = trial;
    const auto res = IsmctsSearch(*s, 0, in, cfg);
    EXPECT_NEAR(res.action_value, exact, 0.2) << "trial " << trial;
  }
}

TEST(ValueEstimatorTest, FixedBatchLossNonIncreasing) {
  TabularValueEstimator v;
  std::vector<ValueSample> batch;
  Rng rng(0);
  for (int i = 0; i < 64; ++i) {
    batch.push_back(
        {InfoStateKey(0, std::to_string(i % 7)), 10.0 * Uniform01(rng) - 3.0});
  }
  double prev = v.Loss(batch, 1e-3);
  for (int t = 0; t < 100; ++t) {
    v.Update(batch, 2e-3, 1e-3);
    const double cur = v.Loss(batch, 1e-3);
    EXPECT_LE(cur, prev + 1e-12);
    prev = cur;
  }
}

TEST(ValueEstimatorTest, ConvergesToSampleMean) {
  TabularValueEstimator v;
  const InfoStateKey key(1, "s");
  Rng rng(4);
  std::vector<double> targets;
  for (int i = 0; i < 500; ++i)
    targets.push_back(Uniform01(rng) < 0.3 ? 6.0 : 1.0);
  double mean = 0.0;
  for (double t : targets) mean += t / targets.size();
  for (int step = 0; step < 3000; ++step) {
    std::vector<ValueSample> batch;
    for (int b = 0; b < 64; ++b) batch.push_back({key, targets[rng() % 500]});
    v.Update(batch, 0.01, 1e-3);
  }
  // Sampling noise of 64-sample batches and the c1 shrinkage.
  EXPECT_NEAR(v.Value(key), mean, 0.1);
  EXPECT_EQ(v.Value(InfoStateKey(1, "unseen")), 0.0);
}

TEST(PolicyEstimatorTest, ConvergesToMeanTarget) {
  TabularPolicyEstimator p;
  const InfoStateKey key(0, "s");
  const std::vector<ActionsAndProbs> targets = {{{0, 1.0}, {2, 0.0}, {5, 0.0}},
                                                {{0, 0.2}, {2, 0.8}, {5, 0.0}},
                                                {{0, 0.3}, {2, 0.3}, {5, 0.4}}};
  std::vector<PolicySample> batch;
  for (const auto& t : targets) batch.push_back({key, t});
  for (int step = 0; step < 4000; ++step) p.Update(batch, 0.01, 1e-3);
  const auto prior = p.Prior(key, {0, 2, 5});
  const double mean[] = {0.5, 0.1 + 1.1 / 3.0 - 0.1, 0.4 / 3.0};
  EXPECT_NEAR(prior[0].second, mean[0], 0.02);
  EXPECT_NEAR(prior[1].second, mean[1], 0.02);
  EXPECT_NEAR(prior[2].second, mean[2], 0.02);
  const auto unseen = p.Prior(InfoStateKey(0, "t"), {1, 3});
  EXPECT_DOUBLE_EQ(unseen[0].second, 0.5);
}

TEST(PolicyEstimatorTest, FixedBatchLossNonIncreasing) {
  TabularPolicyEstimator p;
  std::vector<PolicySample> batch;
  Rng rng(2);
  for (int i = 0; i < 64; ++i) {
    const double a = Uniform01(rng);
    batch.push_back(
        {InfoStateKey(0, std::to_string(i % 5)), {{0, a}, {1, 1.0 - a}}});
  }
  double prev = p.Loss(batch, 1e-3);
  for (int t = 0; t < 100; ++t) {
    p.Update(batch, 2e-3, 1e-3);
    const double cur = p.Loss(batch, 1e-3);
    EXPECT_LE(cur, prev + 1e-12);
    prev = cur;
  }
}

TEST(EstimatorTest, ChecksumAndJson) {
  TabularValueEstimator v;
  TabularPolicyEstimator p;
  const auto v0 = v.Checksum(), p0 = p.Checksum();
  v.Update({{InfoStateKey(0, "a"), 1.0}}, 0.1, 0.0);
  p.Update({{InfoStateKey(0, "a"), {{0, 1.0}, {1, 0.0}}}}, 0.1, 0.0);
  EXPECT_NE(v.Checksum(), v0);
  EXPECT_NE(p.Checksum(), p0);
  auto v2 = TabularValueEstimator::FromJson(v.ToJson());
  auto p2 = TabularPolicyEstimator::FromJson(p.ToJson());
  EXPECT_EQ(v2->Checksum(), v.Checksum());
  EXPECT_EQ(p2->Checksum(), p.Checksum());
  EXPECT_EQ(v2->ToJson(), v.ToJson());
}

}  // namespace
}  // namespace sgpsro
