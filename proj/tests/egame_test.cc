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

#include <cmath>
#include <memory>
#include <random>

#include "gtest/gtest.h"
#include "sgpsro/core/error.h"
#include "sgpsro/egame/empirical_game.h"
#include "sgpsro/egame/normal_form.h"
#include "sgpsro/game/kuhn_poker.h"
#include "sgpsro/game/matrix_game.h"
#include "sgpsro/policy/evaluate.h"

namespace sgpsro {
namespace {

// Chicken cells in flat order: CC, CS, SC, SS.
JointDevice ChickenMuStar() { return JointDevice{{0.0, 0.5, 0.5, 0.0}}; }

PayoffTensor RandomTensor(std::vector<int> shape, std::mt19937_64& rng) {
  PayoffTensor u(shape);
  std::uniform_real_distribution<double> dist(-3.0, 3.0);
  for (int c = 0; c < u.num_cells(); ++c) {
    for (int p = 0; p < u.num_players(); ++p) u.At(c, p) = dist(rng);
  }
  return u;
}

JointDevice RandomDevice(const PayoffTensor& u, std::mt19937_64& rng) {
  std::exponential_distribution<double> dist(1.0);
  JointDevice mu;
  double total = 0.0;
  for (int c = 0; c < u.num_cells(); ++c) {
    mu.mu.push_back(dist(rng));
    total += mu.mu.back();
  }
  for (double& m : mu.mu) m /= total;
  return mu;
}

TEST(NormalFormTest, ChickenCceGains) {
  const auto u = ChickenTensor();
  const auto gains = CceDeviationGains(u, ChickenMuStar());
  // Always-C against the opponent's (C, S) half-half: 0.5 * -5 + 0.5 * 1 = -2;
  // always-S: -1; value of mu*: 0.
  EXPECT_DOUBLE_EQ(gains[0][0], -2.0);
  EXPECT_DOUBLE_EQ(gains[0][1], -1.0);
  EXPECT_DOUBLE_EQ(gains[1][0], -2.0);
  EXPECT_DOUBLE_EQ(gains[1][1], -1.0);
}

TEST(NormalFormTest, ChickenCeConditionalGain) {
  const auto gains = CeDeviationGains(ChickenTensor(), ChickenMuStar());
  // Player 0 told S (cell SC): opponent plays C; switching to C gives -5
  // instead of -1.
  EXPECT_DOUBLE_EQ(gains.conditional[0][1][0], -4.0);
  EXPECT_DOUBLE_EQ(gains.conditional[0][0][1], -2.0);
  EXPECT_FALSE(gains.recommendation_zero[0][0]);
  EXPECT_LE(MaxCeGain(ChickenTensor(), ChickenMuStar()), 0.0);
}

TEST(NormalFormTest, PureNashPointMassHasNoGains) {
  const auto u = PrisonersDilemmaTensor();
  JointDevice dd{{0.0, 0.0, 0.0, 1.0}};
  EXPECT_LE(MaxCceGain(u, dd), 0.0);
  EXPECT_LE(MaxCeGain(u, dd), 0.0);
  const auto ce = CeDeviationGains(u, dd);
  EXPECT_TRUE(ce.recommendation_zero[0][0]);
  for (double g : ce.conditional[0][0]) EXPECT_EQ(g, 0.0);
}

TEST(NormalFormTest, UniformDeviceGainsMatchBruteForce) {
  std::mt19937_64 rng(3);
  const auto u = RandomTensor({3, 2, 2}, rng);
  JointDevice uniform{std::vector<double>(u.num_cells(), 1.0 / u.num_cells())};
  const auto gains = CceDeviationGains(u, uniform);
  for (int i = 0; i < 3; ++i) {
    double mean = 0.0;
    for (int c = 0; c < u.num_cells(); ++c) mean += u.At(c, i);
    mean /= u.num_cells();
    for (int k = 0; k < u.shape()[i]; ++k) {
      double row = 0.0;
      int count = 0;
      for (int c = 0; c < u.num_cells(); ++c) {
        if (u.Unflatten(c)[i] != k) continue;
        row += u.At(c, i);
        ++count;
      }
      EXPECT_NEAR(gains[i][k], row / count - mean, 1e-12);
    }
  }
}

TEST(NormalFormTest, ProductDeviceCeGainsAreBestResponseGains) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto u = RandomTensor({2, 2}, rng);
    std::uniform_real_distribution<double> unit(0.05, 0.95);
    const double a = unit(rng), b = unit(rng);
    MixedProfile sigma{{{a, 1 - a}, {b, 1 - b}}};
    const auto device = ProductDevice(u, sigma);
    const auto ce = CeDeviationGains(u, device);
    const auto values = DeviationValues(u, sigma);
    for (int i = 0; i < 2; ++i) {
      for (int r = 0; r < 2; ++r) {
        for (int k = 0; k < 2; ++k) {
          EXPECT_NEAR(ce.conditional[i][r][k], values[i][k] - values[i][r],
                      1e-12);
        }
      }
    }
  }
}

TEST(NormalFormTest, CeImpliesCceAndGainsAreLinear) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto u = RandomTensor({2, 3}, rng);
    const auto m1 = RandomDevice(u, rng), m2 = RandomDevice(u, rng);
    // The CCE gain of deviation k is the sum over recommendations of the
    // weighted CE gains, so it never exceeds the sum of the positive parts.
    const auto cce = CceDeviationGains(u, m1);
    const auto ce = CeDeviationGains(u, m1);
    for (int i = 0; i < 2; ++i) {
      for (int k = 0; k < u.shape()[i]; ++k) {
        double total = 0.0;
        for (int r = 0; r < u.shape()[i]; ++r) total += ce.weighted[i][r][k];
        EXPECT_NEAR(cce[i][k], total, 1e-12);
      }
    }
    JointDevice mix;
    for (int c = 0; c < u.num_cells(); ++c) {
      mix.mu.push_back(0.3 * m1.mu[c] + 0.7 * m2.mu[c]);
    }
    const auto g1 = CceDeviationGains(u, m1), g2 = CceDeviationGains(u, m2),
               gm = CceDeviationGains(u, mix);
    for (int i = 0; i < 2; ++i) {
      for (int k = 0; k < u.shape()[i]; ++k) {
        EXPECT_NEAR(gm[i][k], 0.3 * g1[i][k] + 0.7 * g2[i][k], 1e-12);
      }
    }
  }
}

TEST(NormalFormTest, NashConv) {
  const auto u = ChickenTensor();
  // Both C: each gains 4 by switching to S.
  EXPECT_DOUBLE_EQ(NfgNashConv(u, MixedProfile{{{1, 0}, {1, 0}}}), 8.0);
  EXPECT_DOUBLE_EQ(NfgNashConv(u, MixedProfile{{{1, 0}, {0, 1}}}), 0.0);
  // Matching pennies uniform is the equilibrium.
  EXPECT_NEAR(NfgNashConv(MatchingPenniesTensor(), UniformProfile({2, 2})), 0.0,
              1e-15);
}

TEST(NormalFormTest, ValidationRejectsBadDistributions) {
  const auto u = ChickenTensor();
  EXPECT_THROW(ValidateDevice(u, JointDevice{{0.5, 0.5, 0.5, 0.0}}), Error);
  EXPECT_THROW(ValidateDevice(u, JointDevice{{1.5, -0.5, 0.0, 0.0}}), Error);
  EXPECT_THROW(ValidateProfile(u, MixedProfile{{{1.0}, {0.5, 0.5}}}), Error);
  EXPECT_NO_THROW(ValidateDevice(u, ChickenMuStar()));
}

TEST(NormalFormTest, OpponentDistributionOfProductAndJoint) {
  const auto u = ChickenTensor();
  MixedProfile sigma{{{0.25, 0.75}, {0.6, 0.4}}};
  const auto independent =
      OpponentDistribution(u, MetaSolution::Independent(sigma), 0);
  ASSERT_EQ(independent.size(), 2u);
  EXPECT_EQ(independent[0].joint, (std::vector<int>{-1, 0}));
  EXPECT_DOUBLE_EQ(independent[0].weight, 0.6);
  const auto joint =
      OpponentDistribution(u, MetaSolution::Joint(ProductDevice(u, sigma)), 0);
  ASSERT_EQ(joint.size(), 2u);
  EXPECT_NEAR(joint[0].weight, 0.6, 1e-15);
  EXPECT_NEAR(joint[1].weight, 0.4, 1e-15);
}

TEST(NormalFormTest, MetaSolutionJsonRoundTrip) {
  MetaSolution s = MetaSolution::Joint(ChickenMuStar());
  s.flags.push_back("x");
  const auto back = MetaSolutionFromJson(MetaSolutionToJson(s));
  EXPECT_TRUE(back.is_joint());
  EXPECT_EQ(back.device.mu, s.device.mu);
  EXPECT_EQ(back.flags, s.flags);
}

TEST(EmpiricalGameTest, ConstantPoliciesReproduceMatrix) {
  auto game = MakeChicken();
  EmpiricalGame eg(game, EntryConfig{.exact = true});
  for (int p = 0; p < 2; ++p) {
    eg.AddPolicy(
        p, std::make_shared<ConstantActionPolicy>(std::vector<Action>{0}));
  }
  EXPECT_EQ(eg.FillMissingEntries(), 1);
  for (int p = 0; p < 2; ++p) {
    eg.AddPolicy(
        p, std::make_shared<ConstantActionPolicy>(std::vector<Action>{1}));
  }
  EXPECT_FALSE(eg.IsComplete());
  EXPECT_EQ(eg.FillMissingEntries(), 3);
  EXPECT_TRUE(eg.IsComplete());
  EXPECT_EQ(eg.tensor().values(), ChickenTensor().values());
}

TEST(EmpiricalGameTest, SimulatedEntryMatchesExactValue) {
  auto game = std::make_shared<KuhnGame>();
  std::vector<PolicyPtr> policies = {
      std::make_shared<UniformRandomPolicy>(),
      std::make_shared<ConstantActionPolicy>(std::vector<Action>{kKuhnBet})};
  const auto exact = ExpectedReturns(*game, policies);
  Rng rng(17);
  const auto est = EstimateEntry(*game, policies, 40000, rng);
  // Returns lie in [-2, 2]: 4.5 standard errors is below 0.05.
  EXPECT_NEAR(est.means[0], exact[0], 0.05);
  EXPECT_NEAR(est.means[0] + est.means[1], 0.0, 1e-12);
  EXPECT_EQ(est.count, 40000);
}

TEST(EmpiricalGameTest, EntriesIndependentOfThreadsAndOrder) {
  auto game = std::make_shared<KuhnGame>();
  auto build = [&](int threads, bool incremental) {
    EmpiricalGame eg(
        game, EntryConfig{.num_sims = 50, .seed = 9, .num_threads = threads});
    for (Action a : {kKuhnPass, kKuhnBet}) {
      for (int p = 0; p < 2; ++p) {
        eg.AddPolicy(
            p, std::make_shared<ConstantActionPolicy>(std::vector<Action>{a}));
      }
      if (incremental) eg.FillMissingEntries();
    }
    eg.AddPolicy(0, std::make_shared<UniformRandomPolicy>());
    eg.AddPolicy(1, std::make_shared<UniformRandomPolicy>());
    eg.FillMissingEntries();
    return eg.tensor().values();
  };
  const auto reference = build(1, false);
  EXPECT_EQ(build(4, false), reference);
  EXPECT_EQ(build(1, true), reference);
  EXPECT_EQ(build(3, true), reference);
}

TEST(EmpiricalGameTest, GrowthKeepsOldEntries) {
  auto game = MakeChicken();
  EmpiricalGame eg(game, EntryConfig{.exact = true});
  eg.AddPolicy(0,
               std::make_shared<ConstantActionPolicy>(std::vector<Action>{1}));
  eg.AddPolicy(1,
               std::make_shared<ConstantActionPolicy>(std::vector<Action>{0}));
  eg.FillMissingEntries();
  eg.AddPolicy(1,
               std::make_shared<ConstantActionPolicy>(std::vector<Action>{1}));
  EXPECT_TRUE(eg.filled(eg.tensor().Flatten({0, 0})));
  EXPECT_FALSE(eg.filled(eg.tensor().Flatten({0, 1})));
  EXPECT_DOUBLE_EQ(eg.tensor().At({0, 0}, 0), -1.0);
  EXPECT_THROW(eg.AddPolicy(2, std::make_shared<UniformRandomPolicy>()), Error);
}

}  // namespace
}  // namespace sgpsro
