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
#include <map>
#include <memory>
#include <vector>

#include "gtest/gtest.h"
#include "sgpsro/belief/belief_model.h"
#include "sgpsro/belief/learned_belief.h"
#include "sgpsro/belief/posterior.h"
#include "sgpsro/core/error.h"
#include "sgpsro/game/dond.h"
#include "sgpsro/game/kuhn_poker.h"
#include "sgpsro/game/registry.h"
#include "sgpsro/policy/evaluate.h"
#include "sgpsro/policy/policy.h"

namespace sgpsro {
namespace {

// Bets (or calls) with a fixed probability at every decision.
class BetProbabilityPolicy : public Policy {
 public:
  explicit BetProbabilityPolicy(double p) : p_(p) {}
  ActionsAndProbs GetStatePolicy(const State&, Player) const override {
    return {{kKuhnPass, 1.0 - p_}, {kKuhnBet, p_}};
  }
  nlohmann::json ToJson() const override { return {{"kind", "test_bet"}}; }

 private:
  double p_;
};

std::shared_ptr<const DondGame> MiniDond() {
  static auto game = std::make_shared<const DondGame>(MiniDondParams());
  return game;
}

OpponentMixture TwoRuleTypes(Player searcher) {
  OpponentMixture m(2);
  for (auto& p : m) p.policies.resize(2);
  m[0].policies[1 - searcher] = std::make_shared<DondRulePolicy>(4, 4);
  m[0].weight = 0.6;
  m[1].policies[1 - searcher] = std::make_shared<DondRulePolicy>(5, 3);
  m[1].weight = 0.4;
  return m;
}

// Independent posterior oracle for Deal or No Deal: scans the whole
// database, replays the public moves and multiplies opponent probabilities
// by hand.
std::map<int, double> BruteForceDondPosterior(const DondGame& game,
                                              const DondState& s,
                                              Player searcher,
                                              const OpponentMixture& mix) {
  const InfoStateKey key = s.InfoStateKeyFor(searcher);
  std::map<int, double> out;
  double total = 0.0;
  for (int idx = 0; idx < static_cast<int>(game.instances().size()); ++idx) {
    std::unique_ptr<State> h = game.NewStateForInstance(idx);
    std::vector<double> reach(mix.size(), 1.0);
    bool legal = true;
    for (Action a : s.moves()) {
      const auto actions = h->LegalActions();
      if (std::find(actions.begin(), actions.end(), a) == actions.end()) {
        legal = false;
        break;
      }
      const Player mover = h->CurrentPlayer();
      if (mover != searcher) {
        for (size_t k = 0; k < mix.size(); ++k) {
          reach[k] *= mix[k].policies[mover]->ActionProbability(*h, mover, a);
        }
      }
      h = h->Child(a);
    }
    if (!legal || h->InfoStateKeyFor(searcher) != key) continue;
    double w = 0.0;
    for (size_t k = 0; k < mix.size(); ++k) w += mix[k].weight * reach[k];
    out[idx] = w / game.instances().size();
    total += out[idx];
  }
  for (auto& [idx, p] : out) p /= total;
  return out;
}

// Random mini-DoND states at which `searcher` acts, reached with the two
// rule types as opponent and uniform play for the searcher.
std::vector<std::unique_ptr<State>> SearcherStates(Player searcher, int count,
                                                   std::uint64_t seed) {
  auto game = MiniDond();
  auto mix = TwoRuleTypes(searcher);
  Rng rng(seed);
  UniformRandomPolicy uniform;
  std::vector<std::unique_ptr<State>> out;
  while (static_cast<int>(out.size()) < count) {
    const int type = SampleIndex(std::vector<double>{0.6, 0.4}, rng);
    std::unique_ptr<State> s = game->NewInitialState();
    s = s->Child(SampleAction(s->ChanceOutcomes(), rng));
    while (!s->IsTerminal()) {
      const Player p = s->CurrentPlayer();
      if (p == searcher) {
        if (Uniform01(rng) < 0.5) out.push_back(s->Clone());
        s = s->Child(uniform.SampleAction(*s, p, rng));
      } else {
        s = s->Child(mix[type].policies[p]->SampleAction(*s, p, rng));
      }
    }
  }
  return out;
}

TEST(TypePosteriorTest, EmptyHistoryGivesPrior) {
  auto game = LoadGame("kuhn_poker");
  OpponentMixture mix(3);
  const double w[] = {0.2, 0.5, 0.3};
  for (int k = 0; k < 3; ++k) {
    mix[k].policies = {std::make_shared<BetProbabilityPolicy>(0.1 * k),
                       nullptr};
    mix[k].weight = w[k];
  }
  auto s = StateFromActions(*game, {0, 1});
  const auto post = OpponentTypePosterior(*s, 1, mix);
  for (int k = 0; k < 3; ++k) EXPECT_DOUBLE_EQ(post[k], w[k]);
}

TEST(TypePosteriorTest, BayesArithmetic) {
  auto game = LoadGame("kuhn_poker");
  OpponentMixture mix(2);
  mix[0].policies = {std::make_shared<BetProbabilityPolicy>(0.8), nullptr};
  mix[1].policies = {std::make_shared<BetProbabilityPolicy>(0.2), nullptr};
  mix[0].weight = mix[1].weight = 0.5;
  auto s = StateFromActions(*game, {2, 0, kKuhnBet});
  auto post = OpponentTypePosterior(*s, 1, mix);
  EXPECT_NEAR(post[0], 0.8, 1e-15);
  EXPECT_NEAR(post[1], 0.2, 1e-15);

  // Unequal prior: 0.3*0.8 / (0.3*0.8 + 0.7*0.2).
  mix[0].weight = 0.3;
  mix[1].weight = 0.7;
  post = OpponentTypePosterior(*s, 1, mix);
  EXPECT_NEAR(post[0], 0.24 / 0.38, 1e-15);

  // Two opponent decisions multiply: pass then (after our bet) call.
  auto s2 = StateFromActions(*game, {2, 0, kKuhnPass, kKuhnBet, kKuhnBet});
  post = OpponentTypePosterior(*s2, 1, mix);
  const double a = 0.3 * 0.2 * 0.8, b = 0.7 * 0.8 * 0.2;
  EXPECT_NEAR(post[0], a / (a + b), 1e-15);
}

TEST(TypePosteriorTest, ZeroReachEliminatedAndAllZeroRejected) {
  auto game = LoadGame("kuhn_poker");
  OpponentMixture mix(2);
  mix[0].policies = {
      std::make_shared<ConstantActionPolicy>(std::vector<Action>{kKuhnPass}),
      nullptr};
  mix[1].policies = {std::make_shared<BetProbabilityPolicy>(0.5), nullptr};
  mix[0].weight = 0.9;
  mix[1].weight = 0.1;
  auto s = StateFromActions(*game, {2, 0, kKuhnBet});
  const auto post = OpponentTypePosterior(*s, 1, mix);
  EXPECT_EQ(post[0], 0.0);
  EXPECT_EQ(post[1], 1.0);

  mix.pop_back();
  mix[0].weight = 1.0;
  try {
    OpponentTypePosterior(*s, 1, mix);
    FAIL() << "expected rejection";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
  }
}

TEST(TypePosteriorTest, MartingaleUnderTrueMixture) {
  // Averaging the posterior over histories drawn from the mixture itself
  // reproduces the prior.
  auto game = LoadGame("kuhn_poker");
  Rng rng(7);
  OpponentMixture mix(3);
  const double w[] = {0.5, 0.3, 0.2};
  for (int k = 0; k < 3; ++k) {
    mix[k].policies = {RandomTabularPolicy(*game, 0, rng), nullptr};
    mix[k].weight = w[k];
  }
  auto me = std::make_shared<UniformRandomPolicy>();
  const int n = 20000;
  std::vector<double> mean(3, 0.0), sq(3, 0.0);
  for (int e = 0; e < n; ++e) {
    const int k = SampleIndex(std::vector<double>(w, w + 3), rng);
    std::unique_ptr<State> s = game->NewInitialState();
    while (!s->IsTerminal()) {
      if (s->IsChanceNode()) {
        s = s->Child(SampleAction(s->ChanceOutcomes(), rng));
      } else if (s->CurrentPlayer() == 1) {
        s = s->Child(me->SampleAction(*s, 1, rng));
      } else {
        s = s->Child(mix[k].policies[0]->SampleAction(*s, 0, rng));
      }
    }
    const auto post = OpponentTypePosterior(*s, 1, mix);
    for (int j = 0; j < 3; ++j) {
      mean[j] += post[j] / n;
      sq[j] += post[j] * post[j] / n;
    }
  }
  for (int j = 0; j < 3; ++j) {
    const double se = std::sqrt((sq[j] - mean[j] * mean[j]) / n);
    EXPECT_NEAR(mean[j], w[j], 4.0 * se) << j;
  }
}

TEST(ExactPosteriorTest, NoMovesIsUniformOverMatchingInstances) {
  auto game = MiniDond();
  auto mix = TwoRuleTypes(0);
  for (int idx : {0, 17, 123}) {
    auto s = game->NewStateForInstance(idx);
    const auto post = ExactPosterior(*s, 0, mix);
    const auto& inst = game->instances()[idx];
    int matching = 0;
    for (const auto& other : game->instances()) {
      matching += other.pool == inst.pool && other.values[0] == inst.values[0];
    }
    ASSERT_EQ(static_cast<int>(post.size()), matching);
    for (const auto& wb : post)
      EXPECT_NEAR(wb.probability, 1.0 / matching, 1e-12);
  }
}

TEST(ExactPosteriorTest, IncompatibleOpponentActionGetsZero) {
  // Kuhn: the opponent bets only with the king.
  auto game = LoadGame("kuhn_poker");
  auto tab = std::make_shared<TabularPolicy>();
  for (int card = 0; card < 3; ++card) {
    auto s = StateFromActions(*game, {card, (card + 1) % 3});
    const double bet = card == 2 ? 1.0 : 0.0;
    tab->Set(s->InfoStateKeyFor(0), {{kKuhnPass, 1.0 - bet}, {kKuhnBet, bet}});
  }
  auto mix = PureMixture({tab, nullptr});
  auto s = StateFromActions(*game, {2, 0, kKuhnBet});
  const auto post = ExactPosterior(*s, 1, mix);
  ASSERT_EQ(post.size(), 2u);
  double king = 0.0;
  for (const auto& wb : post) {
    const int card = dynamic_cast<const KuhnState&>(*wb.state).card(0);
    if (card == 2)
      king = wb.probability;
    else
      EXPECT_EQ(wb.probability, 0.0);
  }
  EXPECT_DOUBLE_EQ(king, 1.0);
}

TEST(ExactPosteriorTest, MatchesBruteForceOnMiniDond) {
  auto game = MiniDond();
  for (Player searcher : {0, 1}) {
    auto mix = TwoRuleTypes(searcher);
    for (const auto& s : SearcherStates(searcher, 40, 11 + searcher)) {
      const auto& ds = dynamic_cast<const DondState&>(*s);
      const auto oracle = BruteForceDondPosterior(*game, ds, searcher, mix);
      const auto post = ExactPosterior(*s, searcher, mix);
      double total = 0.0;
      ASSERT_EQ(post.size(), oracle.size());
      for (const auto& wb : post) {
        const int idx =
            dynamic_cast<const DondState&>(*wb.state).instance_index();
        ASSERT_TRUE(oracle.count(idx));
        EXPECT_NEAR(wb.probability, oracle.at(idx), 1e-12);
        EXPECT_EQ(wb.state->InfoStateKeyFor(searcher),
                  s->InfoStateKeyFor(searcher));
        total += wb.probability;
      }
      EXPECT_NEAR(total, 1.0, 1e-12);
    }
  }
}

TEST(ExactPosteriorTest, ConditioningEqualsRestriction) {
  // The posterior after an opponent move equals the earlier posterior
  // reweighted by the move's likelihood and renormalized.
  auto game = MiniDond();
  const Player searcher = 1;
  auto mix = TwoRuleTypes(searcher);
  for (const auto& s : SearcherStates(searcher, 30, 5)) {
    const auto& ds = dynamic_cast<const DondState&>(*s);
    if (ds.moves().size() < 3) continue;
    // Previous searcher state: drop the last opponent move and our move.
    std::vector<Action> prefix = s->ActionHistory();
    const Action our_move = prefix[prefix.size() - 2];
    const Action their_move = prefix.back();
    prefix.resize(prefix.size() - 2);
    auto earlier = StateFromActions(*game, prefix);
    // Joint over (instance, type) at the earlier state.
    std::map<int, double> restricted;
    double total = 0.0;
    for (const auto& wb : game->ConsistentHistories(*earlier, searcher)) {
      auto after = wb.state->Child(our_move);
      double w = 0.0;
      for (const auto& prof : mix) {
        w += prof.weight * OpponentReach(*wb.state, searcher, prof) *
             prof.policies[0]->ActionProbability(*after, 0, their_move);
      }
      const int idx =
          dynamic_cast<const DondState&>(*wb.state).instance_index();
      restricted[idx] = w;
      total += w;
    }
    for (const auto& wb : ExactPosterior(*s, searcher, mix)) {
      const int idx =
          dynamic_cast<const DondState&>(*wb.state).instance_index();
      EXPECT_NEAR(wb.probability, restricted[idx] / total, 1e-12);
    }
  }
}

TEST(BeliefModelTest, ExactSamplingMatchesPosterior) {
  auto game = MiniDond();
  const Player searcher = 1;
  auto mix = TwoRuleTypes(searcher);
  ExactBelief model(game, mix);
  auto states = SearcherStates(searcher, 3, 21);
  Rng rng(3);
  const int n = 100000;
  for (const auto& s : states) {
    const auto post = ExactPosterior(*s, searcher, mix);
    std::map<int, int> counts;
    for (int i = 0; i < n; ++i) {
      auto h = model.Sample(*s, searcher, rng);
      ++counts[dynamic_cast<const DondState&>(*h).instance_index()];
    }
    for (const auto& wb : post) {
      const int idx =
          dynamic_cast<const DondState&>(*wb.state).instance_index();
      const double p = wb.probability;
      const double sd = std::sqrt(n * p * (1.0 - p));
      EXPECT_LE(std::abs(counts[idx] - n * p), 3.0 * sd + 1e-9)
          << "instance " << idx << " p=" << p;
    }
  }
}

TEST(BeliefModelTest, EveryModelIsConsistent) {
  auto game = MiniDond();
  for (Player searcher : {0, 1}) {
    auto mix = TwoRuleTypes(searcher);
    std::vector<BeliefModelPtr> models;
    for (auto kind : {BeliefKind::kExact, BeliefKind::kUniform,
                      BeliefKind::kCheat, BeliefKind::kFixedFirst,
                      BeliefKind::kFixedLast, BeliefKind::kLearned}) {
      models.push_back(MakeBeliefModel(kind, game, mix));
    }
    auto states = SearcherStates(searcher, 200, 100 + searcher);
    Rng rng(searcher);
    for (const auto& model : models) {
      for (int i = 0; i < 10000; ++i) {
        const auto& s = states[i % states.size()];
        auto h = model->Sample(*s, searcher, rng);
        ASSERT_EQ(h->InfoStateKeyFor(searcher), s->InfoStateKeyFor(searcher))
            << model->name();
      }
    }
  }
  // Kuhn goes through the generic enumeration path.
  auto kuhn = LoadGame("kuhn_poker");
  auto mix =
      PureMixture({std::make_shared<BetProbabilityPolicy>(0.3), nullptr});
  Rng rng(1);
  for (auto kind : {BeliefKind::kExact, BeliefKind::kUniform,
                    BeliefKind::kFixedFirst, BeliefKind::kFixedLast}) {
    auto model = MakeBeliefModel(kind, kuhn, mix);
    for (const auto& h0 :
         {std::vector<Action>{0, 2}, {1, 0, kKuhnBet}, {2, 1, kKuhnPass}}) {
      auto s = StateFromActions(*kuhn, h0);
      for (int i = 0; i < 200; ++i) {
        auto h = model->Sample(*s, 1, rng);
        ASSERT_EQ(h->InfoStateKeyFor(1), s->InfoStateKeyFor(1));
      }
    }
  }
}

TEST(BeliefModelTest, CheatAndFixedModels) {
  auto game = MiniDond();
  auto mix = TwoRuleTypes(1);
  CheatBelief cheat(game);
  FixedBelief first(game, false), last(game, true);
  Rng rng(0);
  for (const auto& s : SearcherStates(1, 20, 8)) {
    const int truth = dynamic_cast<const DondState&>(*s).instance_index();
    const auto& inst = game->instances()[truth];
    const auto& matching =
        game->InstancesMatching(inst.pool, inst.values[1], 1);
    const int lo = *std::min_element(matching.begin(), matching.end());
    const int hi = *std::max_element(matching.begin(), matching.end());
    for (int i = 0; i < 5; ++i) {
      EXPECT_EQ(dynamic_cast<const DondState&>(*cheat.Sample(*s, 1, rng))
                    .instance_index(),
                truth);
      EXPECT_EQ(dynamic_cast<const DondState&>(*first.Sample(*s, 1, rng))
                    .instance_index(),
                lo);
      EXPECT_EQ(dynamic_cast<const DondState&>(*last.Sample(*s, 1, rng))
                    .instance_index(),
                hi);
    }
  }
  EXPECT_TRUE(cheat.reads_hidden_state());
  EXPECT_FALSE(first.reads_hidden_state());
}

TEST(BeliefModelTest, KindNames) {
  for (auto kind : {BeliefKind::kExact, BeliefKind::kUniform,
                    BeliefKind::kCheat, BeliefKind::kFixedFirst,
                    BeliefKind::kFixedLast, BeliefKind::kLearned}) {
    EXPECT_EQ(ParseBeliefKind(BeliefKindName(kind)), kind);
  }
  EXPECT_THROW(ParseBeliefKind("bad1"), Error);
  EXPECT_THROW(LearnedDondBelief(LoadGame("kuhn_poker")), Error);
}

// Exhaustive oracle over a box that contains every feasible vector.
std::vector<int> BruteForceProjection(const std::vector<double>& raw,
                                      const std::vector<int>& pool, int total) {
  std::vector<int> best;
  double best_d = 1e300;
  for (int a = 0; a <= total; ++a) {
    for (int b = 0; b <= total; ++b) {
      for (int c = 0; c <= total; ++c) {
        if (a * pool[0] + b * pool[1] + c * pool[2] != total) continue;
        const double d = (raw[0] - a) * (raw[0] - a) +
                         (raw[1] - b) * (raw[1] - b) +
                         (raw[2] - c) * (raw[2] - c);
        // Ascending loops make the first minimum the lexicographic one.
        if (d < best_d) {
          best_d = d;
          best = {a, b, c};
        }
      }
    }
  }
  return best;
}

TEST(ProjectionTest, FeasibleUnchanged) {
  EXPECT_EQ(ProjectFeasibleValues({2, 2, 2}, {1, 2, 2}, 10),
            (std::vector<int>{2, 2, 2}));
  EXPECT_EQ(ProjectFeasibleValues({10, 0, 0}, {1, 2, 2}, 10),
            (std::vector<int>{10, 0, 0}));
}

TEST(ProjectionTest, ElevenZeroZero) {
  const auto got = ProjectFeasibleValues({11, 0, 0}, {1, 2, 2}, 10);
  EXPECT_EQ(got, BruteForceProjection({11, 0, 0}, {1, 2, 2}, 10));
  EXPECT_EQ(got, (std::vector<int>{10, 0, 0}));
}

TEST(ProjectionTest, RandomAgainstBruteForce) {
  Rng rng(5);
  std::uniform_int_distribution<int> count(1, 4), val(0, 12);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<int> pool = {count(rng), count(rng), count(rng)};
    std::vector<double> raw = {double(val(rng)), double(val(rng)),
                               double(val(rng))};
    if (trial % 2) {
      for (double& r : raw) r += Uniform01(rng) - 0.5;
    }
    const auto oracle = BruteForceProjection(raw, pool, 10);
    if (oracle.empty()) {
      EXPECT_THROW(ProjectFeasibleValues(raw, pool, 10), Error);
      continue;
    }
    const auto got = ProjectFeasibleValues(raw, pool, 10);
    EXPECT_EQ(got, oracle);
    EXPECT_EQ(got[0] * pool[0] + got[1] * pool[1] + got[2] * pool[2], 10);
  }
}

TEST(ProjectionTest, TiesGoLexicographic) {
  // (0.5, 0.5) is equidistant from (0, 1) and (1, 0).
  EXPECT_EQ(NearestFeasible({0.5, 0.5}, {{1, 0}, {0, 1}}), 1);
  EXPECT_THROW(NearestFeasible({1.0}, {}), Error);
}

TEST(ProjectionTest, DatabaseProjectionMatchesInstanceConstraints) {
  auto game = MiniDond();
  Rng rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    const auto& inst = DondSampleInstance(game->instances(), rng);
    std::vector<double> raw = {7.0 * Uniform01(rng), 7.0 * Uniform01(rng),
                               7.0 * Uniform01(rng)};
    const auto v =
        ProjectFeasibleValues(raw, *game, inst.pool, inst.values[0], 0);
    DondInstance cand{inst.pool, {inst.values[0], v}};
    EXPECT_EQ(DondInstanceViolation(cand, game->params()), "");
  }
}

TEST(GenBufferTest, FifoEviction) {
  GenBuffer buf(3);
  for (int i = 0; i < 5; ++i) buf.Add({InfoStateKey(0, "k"), {Action{i}}});
  EXPECT_EQ(buf.size(), 3);
  EXPECT_EQ(buf.total_added(), 5);
  EXPECT_EQ(buf.first_sequence(), 2);
  EXPECT_EQ(buf[0].history[0], 2);
  EXPECT_EQ(buf[2].history[0], 4);
  EXPECT_EQ(GenBuffer().capacity(), 1 << 16);
  EXPECT_THROW(GenBuffer(0), Error);
}

// Entries at the empty-history state of player 1 for instances sharing one
// observation.
GenBuffer ConstantContextBuffer(const std::vector<int>& instance_indices,
                                const std::vector<int>& repeats) {
  auto game = MiniDond();
  GenBuffer buf;
  for (size_t i = 0; i < instance_indices.size(); ++i) {
    auto s = game->NewStateForInstance(instance_indices[i]);
    auto first =
        game->ProposalsForPool(game->instances()[instance_indices[i]].pool)[0];
    s = s->Child(first);
    for (int r = 0; r < repeats[i]; ++r) {
      buf.Add({s->InfoStateKeyFor(1), s->ActionHistory()});
    }
  }
  return buf;
}

std::vector<int> SameObservationInstances(int n) {
  auto game = MiniDond();
  for (const auto& inst : game->instances()) {
    const auto& m = game->InstancesMatching(inst.pool, inst.values[1], 1);
    if (static_cast<int>(m.size()) >= n) {
      return std::vector<int>(m.begin(), m.begin() + n);
    }
  }
  return {};
}

TEST(LearnedBeliefTest, ConstantTargetConcentrates) {
  auto game = MiniDond();
  const auto idx = SameObservationInstances(3);
  ASSERT_EQ(idx.size(), 3u);
  GenBuffer buf = ConstantContextBuffer({idx[1]}, {1000});
  LearnedDondBelief model(game);
  model.Fit(buf, 200);
  auto s = StateFromActions(*game, buf[0].history);
  double mass = 0.0;
  for (const auto& wb : model.Distribution(*s, 1)) {
    if (dynamic_cast<const DondState&>(*wb.state).instance_index() == idx[1]) {
      mass = wb.probability;
    }
  }
  EXPECT_GE(mass, 0.99);
  Rng rng(4);
  int hits = 0;
  for (int i = 0; i < 2000; ++i) {
    hits += dynamic_cast<const DondState&>(*model.Sample(*s, 1, rng))
                .instance_index() == idx[1];
  }
  EXPECT_GE(hits, 0.98 * 2000);
}

TEST(LearnedBeliefTest, HeadMarginalsMatchBufferFrequencies) {
  auto game = MiniDond();
  const auto idx = SameObservationInstances(3);
  ASSERT_EQ(idx.size(), 3u);
  const std::vector<int> reps = {500, 300, 200};
  GenBuffer buf = ConstantContextBuffer(idx, reps);
  std::vector<std::vector<double>> freq(3, std::vector<double>(7, 0.0));
  for (size_t i = 0; i < idx.size(); ++i) {
    const auto& v = game->instances()[idx[i]].values[0];
    for (int h = 0; h < 3; ++h) freq[h][v[h]] += reps[i] / 1000.0;
  }
  auto s = StateFromActions(*game, buf[0].history);
  for (bool counts : {true, false}) {
    LearnedBeliefConfig cfg;
    cfg.context_counts = counts;
    cfg.learning_rate = counts ? 1e-3 : 0.02;
    cfg.batch_size = 1000;
    LearnedDondBelief model(game, cfg);
    model.Fit(buf, counts ? 10 : 3000);
    const auto probs = model.HeadProbabilities(*s, 1);
    for (int h = 0; h < 3; ++h) {
      for (int c = 0; c < 7; ++c) {
        EXPECT_NEAR(probs[h][c], freq[h][c], 0.05)
            << "counts=" << counts << " head " << h << " class " << c;
      }
    }
  }
}

TEST(LearnedBeliefTest, FixedBatchLossNonIncreasing) {
  auto game = MiniDond();
  GenBuffer buf;
  for (const auto& s : SearcherStates(1, 64, 9)) {
    buf.Add({s->InfoStateKeyFor(1), s->ActionHistory()});
  }
  std::vector<int> rows(buf.size());
  for (int i = 0; i < buf.size(); ++i) rows[i] = i;
  LearnedDondBelief model(game);
  double prev = model.Loss(buf, rows);
  for (int t = 0; t < 100; ++t) {
    model.Step(buf, rows);
    const double cur = model.Loss(buf, rows);
    EXPECT_LE(cur, prev + 1e-12) << "step " << t;
    prev = cur;
  }
}

double MeanKl(const BeliefModel& exact, const BeliefModel& learned,
              const std::vector<std::unique_ptr<State>>& states,
              Player searcher) {
  double kl = 0.0;
  for (const auto& s : states) {
    std::map<int, double> q;
    for (const auto& wb : learned.Distribution(*s, searcher)) {
      q[dynamic_cast<const DondState&>(*wb.state).instance_index()] =
          wb.probability;
    }
    for (const auto& wb : exact.Distribution(*s, searcher)) {
      if (wb.probability <= 0.0) continue;
      const int idx =
          dynamic_cast<const DondState&>(*wb.state).instance_index();
      kl += wb.probability * std::log(wb.probability / q.at(idx));
    }
  }
  return kl / states.size();
}

TEST(LearnedBeliefTest, KlToExactDecreasesWithData) {
  auto game = MiniDond();
  const Player searcher = 1;
  auto mix = TwoRuleTypes(searcher);
  ExactBelief exact(game, mix);
  // Histories at the searcher's decisions are draws from the exact
  // posterior of their keys.
  auto train = SearcherStates(searcher, 20000, 31);
  auto eval = SearcherStates(searcher, 60, 32);
  LearnedDondBelief model(game);
  GenBuffer buf;
  std::vector<double> kls;
  size_t next = 0;
  for (size_t checkpoint : {200u, 2000u, 20000u}) {
    for (; next < checkpoint; ++next) {
      buf.Add({train[next]->InfoStateKeyFor(searcher),
               train[next]->ActionHistory()});
    }
    model.Fit(buf, 500);
    kls.push_back(MeanKl(exact, model, eval, searcher));
  }
  EXPECT_LT(kls[1], kls[0]);
  EXPECT_LT(kls[2], kls[1]);
  EXPECT_GE(kls[2], 0.0);
}

TEST(LearnedBeliefTest, DeterministicAndRoundTrips) {
  auto game = MiniDond();
  GenBuffer buf;
  for (const auto& s : SearcherStates(0, 300, 12)) {
    buf.Add({s->InfoStateKeyFor(0), s->ActionHistory()});
  }
  LearnedBeliefConfig cfg;
  cfg.seed = 99;
  LearnedDondBelief a(game, cfg), b(game, cfg);
  a.Fit(buf, 50);
  b.Fit(buf, 50);
  EXPECT_EQ(a.ToJson(), b.ToJson());
  auto c = LearnedDondBelief::FromJson(game, a.ToJson());
  EXPECT_EQ(c->ToJson(), a.ToJson());
  auto s = StateFromActions(*game, buf[0].history);
  EXPECT_EQ(a.HeadProbabilities(*s, 0), c->HeadProbabilities(*s, 0));
  GenBuffer empty;
  a.Fit(empty, 10);
  EXPECT_EQ(a.ToJson(), b.ToJson());
}

TEST(LearnedBeliefTest, CountsFollowEviction) {
  auto game = MiniDond();
  const auto idx = SameObservationInstances(2);
  ASSERT_EQ(idx.size(), 2u);
  GenBuffer small(100);
  GenBuffer source = ConstantContextBuffer({idx[0], idx[1]}, {100, 100});
  LearnedDondBelief model(game);
  auto s = StateFromActions(*game, source[0].history);
  const auto& target = game->instances()[idx[1]].values[0];
  for (int i = 0; i < 200; ++i) {
    small.Add(source[i]);
    if (i % 37 == 0) model.Fit(small, 0);
  }
  model.Fit(small, 0);
  // Only the second instance remains in the window.
  const auto probs = model.HeadProbabilities(*s, 1);
  for (int h = 0; h < 3; ++h) EXPECT_GT(probs[h][target[h]], 0.9);
}

}  // namespace
}  // namespace sgpsro
