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
#include <numeric>
#include <random>

#include "gtest/gtest.h"
#include "sgpsro/core/error.h"
#include "sgpsro/solvers/constrained.h"
#include "sgpsro/solvers/mss.h"
#include "sgpsro/solvers/nbs.h"
#include "sgpsro/solvers/projection.h"
#include "sgpsro/solvers/registry.h"

namespace sgpsro {
namespace {

// Independent projection oracle: bisection on the threshold theta with
// sum_k max(y_k - theta, floor) = 1.
std::vector<double> BisectionProjection(const std::vector<double>& y,
                                        double floor) {
  auto mass = [&](double theta) {
    double s = 0.0;
    for (double v : y) s += std::max(v - theta, floor);
    return s;
  };
  double lo = *std::min_element(y.begin(), y.end()) - 2.0;
  double hi = *std::max_element(y.begin(), y.end()) + 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (mass(mid) > 1.0 ? lo : hi) = mid;
  }
  std::vector<double> out;
  for (double v : y) out.push_back(std::max(v - 0.5 * (lo + hi), floor));
  return out;
}

// Grid search over 2-dimensional points with x_0 + x_1 = 1.
std::vector<double> GridProjection2(const std::vector<double>& y,
                                    double floor) {
  double best = INFINITY, best_x = 0.0;
  for (int k = 0; k <= 100000; ++k) {
    const double x = k / 100000.0;
    if (x < floor - 1e-12 || 1.0 - x < floor - 1e-12) continue;
    const double d = (x - y[0]) * (x - y[0]) + (1 - x - y[1]) * (1 - x - y[1]);
    if (d < best) {
      best = d;
      best_x = x;
    }
  }
  return {best_x, 1.0 - best_x};
}

PayoffTensor RandomTensor(std::vector<int> shape, double lo, double hi,
                          std::mt19937_64& rng) {
  PayoffTensor u(shape);
  std::uniform_real_distribution<double> dist(lo, hi);
  for (int c = 0; c < u.num_cells(); ++c) {
    for (int p = 0; p < u.num_players(); ++p) u.At(c, p) = dist(rng);
  }
  return u;
}

std::vector<double> RandomInterior(int n, std::mt19937_64& rng) {
  std::exponential_distribution<double> dist(1.0);
  std::vector<double> x(n);
  double total = 0.0;
  for (double& v : x) total += (v = dist(rng) + 1e-3);
  for (double& v : x) v /= total;
  return x;
}

// Frank-Wolfe with duality-gap certificate: returns (best value, upper
// bound) for max g over the simplex.
std::pair<double, double> FrankWolfeBounds(const PayoffTensor& u,
                                           const std::vector<double>& d,
                                           int iterations) {
  const int m = u.num_cells();
  std::vector<double> x(m, 1.0 / m);
  double best = -INFINITY, upper = INFINITY;
  for (int k = 0; k < iterations; ++k) {
    std::vector<double> payoff(u.num_players(), 0.0);
    for (int c = 0; c < m; ++c) {
      for (int i = 0; i < u.num_players(); ++i) payoff[i] += x[c] * u.At(c, i);
    }
    double g = 0.0;
    std::vector<double> grad(m, 0.0);
    for (int i = 0; i < u.num_players(); ++i) {
      g += std::log(payoff[i] - d[i]);
      for (int c = 0; c < m; ++c) grad[c] += u.At(c, i) / (payoff[i] - d[i]);
    }
    best = std::max(best, g);
    const int j = static_cast<int>(std::max_element(grad.begin(), grad.end()) -
                                   grad.begin());
    double gx = 0.0;
    for (int c = 0; c < m; ++c) gx += grad[c] * x[c];
    upper = std::min(upper, g + grad[j] - gx);
    const double step = 2.0 / (k + 2.0);
    for (int c = 0; c < m; ++c) x[c] *= 1.0 - step;
    x[j] += step;
  }
  return {best, upper};
}

std::vector<double> Payoffs(const PayoffTensor& u,
                            const std::vector<double>& x) {
  std::vector<double> out(u.num_players(), 0.0);
  for (int c = 0; c < u.num_cells(); ++c) {
    for (int i = 0; i < u.num_players(); ++i) out[i] += x[c] * u.At(c, i);
  }
  return out;
}

void ExpectDistribution(const std::vector<double>& x) {
  double total = 0.0;
  for (double v : x) {
    EXPECT_GE(v, 0.0);
    total += v;
  }
  EXPECT_NEAR(total, 1.0, 1e-9);
}

// ---------------------------------------------------------------- projection

TEST(ProjectionTest, TabulatedExamples) {
  EXPECT_EQ(ProjectSimplex({1.0 / 3, 1.0 / 3, 1.0 / 3}),
            (std::vector<double>{1.0 / 3, 1.0 / 3, 1.0 / 3}));
  const auto a = ProjectSimplex({0.5, 0.7});
  EXPECT_NEAR(a[0], 0.4, 1e-15);
  EXPECT_NEAR(a[1], 0.6, 1e-15);
  EXPECT_EQ(ProjectSimplex({1.5, -0.2}), (std::vector<double>{1.0, 0.0}));
  const auto b = ProjectTruncatedSimplex({1.0, 0.0}, 0.1);
  EXPECT_NEAR(b[0], 0.9, 1e-15);
  EXPECT_NEAR(b[1], 0.1, 1e-15);
  // Grid oracles agree with the tabulated values.
  EXPECT_NEAR(GridProjection2({0.5, 0.7}, 0.0)[0], 0.4, 1e-9);
  EXPECT_NEAR(GridProjection2({1.5, -0.2}, 0.0)[0], 1.0, 1e-9);
  EXPECT_NEAR(GridProjection2({1.0, 0.0}, 0.1)[0], 0.9, 1e-9);
}

TEST(ProjectionTest, InteriorAndFloorZero) {
  const std::vector<double> inside = {0.2, 0.3, 0.5};
  const auto p = ProjectTruncatedSimplex(inside, 0.1);
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(p[k], inside[k], 1e-15);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal(0.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> y(5);
    for (double& v : y) v = normal(rng);
    EXPECT_EQ(ProjectTruncatedSimplex(y, 0.0), ProjectSimplex(y));
  }
}

TEST(ProjectionTest, MatchesBisectionOracle) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> normal(0.0, 3.0);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 1 + trial % 7;
    std::vector<double> y(n);
    for (double& v : y) v = normal(rng);
    const double floor = (trial % 3 == 0) ? 0.0 : 0.9 / n * (trial % 5) / 4.0;
    const auto got = ProjectTruncatedSimplex(y, floor);
    const auto want = BisectionProjection(y, floor);
    ExpectDistribution(got);
    for (int k = 0; k < n; ++k) {
      EXPECT_NEAR(got[k], want[k], 1e-9);
      EXPECT_GE(got[k], floor - 1e-15);
    }
  }
}

TEST(ProjectionTest, RejectsInfeasibleFloorAndNonFinite) {
  EXPECT_THROW(ProjectTruncatedSimplex({0.5, 0.5, 0.0}, 0.4), Error);
  EXPECT_THROW(ProjectSimplex({NAN, 1.0}), Error);
  const auto exact = ProjectTruncatedSimplex({5.0, 1.0, -1.0}, 1.0 / 3);
  for (double v : exact) EXPECT_NEAR(v, 1.0 / 3, 1e-15);
}

// ---------------------------------------------------------------- PRD / RM

TEST(MssTest, Uniform) {
  const auto s = MssUniform(PayoffTensor({1, 4}));
  EXPECT_EQ(s.sigma[0], (std::vector<double>{1.0}));
  EXPECT_EQ(s.sigma[1], (std::vector<double>(4, 0.25)));
}

TEST(MssTest, PrdFixedPoints) {
  SolverConfig cfg;
  cfg.prd_iterations = 1000;
  const auto single = MssPrd(PayoffTensor({1, 1}, {3.0, 4.0}), cfg);
  EXPECT_EQ(single.sigma[0], (std::vector<double>{1.0}));
  const auto zero = MssPrd(PayoffTensor({3, 3}), cfg);
  for (const auto& s : zero.sigma) {
    for (double v : s) EXPECT_NEAR(v, 1.0 / 3, 1e-15);
  }
}

TEST(MssTest, PrdDominatedColumnFallsToFloor) {
  // Column action 1 pays 0 against everything, action 0 pays 1.
  PayoffTensor u({2, 2}, {0, 1, 0, 0, 0, 1, 0, 0});
  SolverConfig cfg;
  cfg.gamma = 0.2;
  const auto s = MssPrd(u, cfg);
  EXPECT_NEAR(s.sigma[1][1], 0.1, 1e-9);
  EXPECT_NEAR(s.sigma[1][0], 0.9, 1e-9);
  // Fixed-point analysis: row player is indifferent, so it stays uniform.
  EXPECT_NEAR(s.sigma[0][0], 0.5, 1e-12);
}

TEST(MssTest, RegretMatching) {
  SolverConfig cfg;
  cfg.rm_iterations = 1;
  const auto first = MssRegretMatching(ChickenTensor(), cfg);
  EXPECT_EQ(first.sigma[0], (std::vector<double>{0.5, 0.5}));

  cfg.gamma = 0.0;
  cfg.rm_iterations = 10000;
  const auto mp = MssRegretMatching(MatchingPenniesTensor(), cfg);
  for (const auto& s : mp.sigma) EXPECT_NEAR(s[0], 0.5, 0.05);

  cfg.gamma = 0.1;
  const auto pd = MssRegretMatching(PrisonersDilemmaTensor(), cfg);
  for (const auto& s : pd.sigma) {
    EXPECT_GE(s[1], 0.9);
    ExpectDistribution(s);
  }
}

TEST(MssTest, RejectsBadConfig) {
  SolverConfig cfg;
  cfg.gamma = 1.0;
  EXPECT_THROW(MssPrd(ChickenTensor(), cfg), Error);
  PayoffTensor missing({2, 2});
  missing.At(0, 0) = NAN;
  EXPECT_THROW(MssRegretMatching(missing, SolverConfig{}), Error);
}

TEST(MssTest, MaxWelfare) {
  // Battle of the sexes: BB (welfare 5) first among the ties.
  EXPECT_EQ(MssMaxWelfare(BattleOfSexesTensor()).mu,
            (std::vector<double>{1, 0, 0, 0}));
  EXPECT_EQ(MssMaxWelfare(PayoffTensor({2, 3})).mu,
            (std::vector<double>{1, 0, 0, 0, 0, 0}));
  // Chicken: CS and SC have welfare 0; CS has the lower index.
  EXPECT_EQ(MssMaxWelfare(ChickenTensor()).mu,
            (std::vector<double>{0, 1, 0, 0}));
}

// ---------------------------------------------------------------- NBS

TEST(NbsTest, BoundFormula) {
  EXPECT_DOUBLE_EQ(NbsBound(0, 1.0, 2.0, 2, 4), 8.0);
  for (int t = 0; t < 100; ++t) {
    EXPECT_LT(NbsBound(t + 1, 1.0, 2.0, 2, 4), NbsBound(t, 1.0, 2.0, 2, 4));
  }
  EXPECT_DOUBLE_EQ(NbsBound(7, 0.5, 6.0, 3, 8),
                   3.0 * NbsBound(7, 0.5, 2.0, 3, 8));
  EXPECT_THROW(NbsBound(0, 0.0, 1.0, 2, 4), Error);
}

TEST(NbsTest, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const auto u = RandomTensor(
        trial % 2 ? std::vector<int>{2, 2, 2} : std::vector<int>{3, 2}, -1.0,
        2.0, rng);
    const auto d = DefaultDisagreement(u);
    const auto x = RandomInterior(u.num_cells(), rng);
    const auto grad = LogNashProductGradient(u, d, x);
    const double h = 1e-6;
    for (int c = 0; c < u.num_cells(); ++c) {
      auto up = x, down = x;
      up[c] += h;
      down[c] -= h;
      const double fd =
          (LogNashProduct(u, d, up) - LogNashProduct(u, d, down)) / (2 * h);
      EXPECT_LE(std::abs(fd - grad[c]),
                1e-5 * std::max(1.0, std::abs(grad[c])));
    }
  }
}

TEST(NbsTest, CurvatureAndGradientBound) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 200; ++trial) {
    const auto u = RandomTensor({2, 3}, 0.0, 5.0, rng);
    const auto d = DefaultDisagreement(u);
    const auto x = RandomInterior(u.num_cells(), rng);
    const auto hess = LogNashProductHessian(u, d, x);
    std::vector<double> dir(u.num_cells());
    for (double& v : dir) v = normal(rng);
    double curvature = 0.0;
    for (int a = 0; a < u.num_cells(); ++a) {
      for (int b = 0; b < u.num_cells(); ++b) {
        curvature -= dir[a] * hess[a][b] * dir[b];
      }
    }
    EXPECT_GE(curvature, -1e-8);
    // Second difference along dir as an independent curvature route.
    const double h = 1e-4;
    double scale = 1.0;
    for (double v : dir) scale = std::max(scale, std::abs(v) / (0.5 * x[0]));
    auto at = [&](double s) {
      auto y = x;
      for (int c = 0; c < u.num_cells(); ++c) y[c] += s * dir[c] / scale;
      return LogNashProduct(u, d, y);
    };
    const double second = (at(h) - 2 * at(0) + at(-h)) / (h * h);
    EXPECT_LE(second, 1e-4);
    const double kappa = SimplexMargin(u, d);
    const double bound = u.MaxAbsValue() * u.num_players() / kappa;
    for (double g : LogNashProductGradient(u, d, x)) {
      EXPECT_LE(std::abs(g), bound + 1e-12);
    }
  }
}

TEST(NbsTest, PointMassCases) {
  const auto single = NbsPga(PayoffTensor({1, 1}, {2.0, 3.0}), NbsConfig{});
  EXPECT_EQ(single.solution.device.mu, (std::vector<double>{1.0}));
  // One Pareto-dominant cell (5, 5) vs (1, 1) elsewhere, d = 0.
  PayoffTensor u({2, 2}, {1, 1, 1, 1, 1, 1, 5, 5});
  NbsConfig cfg;
  cfg.d = std::vector<double>{0.0, 0.0};
  cfg.iterations = 2000;
  for (const auto& r : {NbsPga(u, cfg), NbsEmda(u, cfg)}) {
    EXPECT_NEAR(r.solution.device.mu[3], 1.0, 1e-3);
    EXPECT_NEAR(r.nash_product, 25.0, 1e-2);
  }
}

TEST(NbsTest, BattleOfSexesWithZeroDisagreement) {
  NbsConfig cfg;
  cfg.d = std::vector<double>{0.0, 0.0};
  // The tensor minimum equals d, so the margin is checked along the iterates.
  EXPECT_THROW(NbsPga(BattleOfSexesTensor(), cfg), Error);
  cfg.kappa = 1.0;
  cfg.iterations = 20000;
  const auto r = NbsPga(BattleOfSexesTensor(), cfg);
  EXPECT_NEAR(r.solution.device.mu[0], 0.5, 1e-3);
  EXPECT_NEAR(r.solution.device.mu[3], 0.5, 1e-3);
  EXPECT_NEAR(r.nash_product, 6.25, 1e-5);
  // Calculus oracle: on the BB-SS edge the product (2 + p)(3 - p) peaks at
  // p = 1/2 with value 6.25; grid check over the full simplex.
  double grid_best = 0.0;
  const int steps = 200;
  for (int a = 0; a <= steps; ++a) {
    for (int b = 0; a + b <= steps; ++b) {
      for (int c = 0; a + b + c <= steps; ++c) {
        const std::vector<double> x = {double(a) / steps, double(b) / steps,
                                       double(c) / steps,
                                       double(steps - a - b - c) / steps};
        const auto p = Payoffs(BattleOfSexesTensor(), x);
        grid_best = std::max(grid_best, p[0] * p[1]);
      }
    }
  }
  EXPECT_NEAR(grid_best, 6.25, 1e-12);
}

TEST(NbsTest, MarginViolationNamesPlayer) {
  NbsConfig cfg;
  cfg.d = std::vector<double>{0.0, 5.0};
  try {
    NbsPga(ChickenTensor(), cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("player 0"), std::string::npos);
  }
}

TEST(NbsTest, PgaAndEmdaAgreeWithFrankWolfeOracle) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const auto u = RandomTensor({2, 2}, 1.0, 2.0, rng);
    const auto [fw_best, fw_upper] = FrankWolfeBounds(u, {0.0, 0.0}, 200000);
    NbsConfig cfg;
    cfg.d = std::vector<double>{0.0, 0.0};
    cfg.iterations = 100000;
    cfg.record_trace = true;
    // Default schedules: values agree and never pass the certified optimum.
    const auto pga = NbsPga(u, cfg);
    const auto emda = NbsEmda(u, cfg);
    EXPECT_NEAR(pga.log_nash_product, emda.log_nash_product, 1e-3);
    EXPECT_GE(pga.log_nash_product, fw_upper - 1e-3);
    for (const auto* r : {&pga, &emda}) {
      for (size_t t = 0; t < r->trace.size(); ++t) {
        EXPECT_LE(r->trace[t], fw_upper + 1e-12);
        if (t > 0) EXPECT_GE(r->trace[t], r->trace[t - 1]);
      }
    }
    // With larger steps both reach the maximizer, whose payoff vector is
    // unique (the objective is strictly concave in payoff space).
    cfg.record_trace = false;
    cfg.step = [](int t) { return 2.0 / std::sqrt(t + 1.0); };
    const auto a = Payoffs(u, NbsPga(u, cfg).solution.device.mu);
    cfg.step = [](int t) { return 20.0 / std::sqrt(t + 1.0); };
    const auto b = Payoffs(u, NbsEmda(u, cfg).solution.device.mu);
    for (int i = 0; i < 2; ++i) EXPECT_NEAR(a[i], b[i], 1e-3);
  }
}

TEST(NbsTest, TheoremBoundHoldsAlongTrace) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 6; ++trial) {
    const auto u = RandomTensor(
        trial % 2 ? std::vector<int>{2, 2, 2} : std::vector<int>{2, 2}, 1.0,
        2.0, rng);
    const std::vector<double> d(u.num_players(), 0.0);
    NbsConfig cfg;
    cfg.d = d;
    cfg.iterations = 1000;
    cfg.record_trace = true;
    const auto r = NbsPga(u, cfg);
    const double upper = FrankWolfeBounds(u, d, 100000).second;
    for (int t = 0; t <= 1000; ++t) {
      EXPECT_LE(upper - r.trace[t],
                NbsBound(t, r.kappa, r.u_max, u.num_players(), u.num_cells()));
    }
  }
}

TEST(NbsTest, ScalingOnePlayerKeepsMaximizer) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    auto u = RandomTensor({2, 2}, 1.0, 2.0, rng);
    NbsConfig cfg;
    cfg.d = std::vector<double>{0.0, 0.0};
    cfg.iterations = 200000;
    cfg.step = [](int t) { return 2.0 / std::sqrt(t + 1.0); };
    const auto before = NbsPga(u, cfg).solution.device.mu;
    for (int c = 0; c < u.num_cells(); ++c) u.At(c, 0) *= 3.0;
    const auto after = NbsPga(u, cfg).solution.device.mu;
    double tv = 0.0;
    for (int c = 0; c < u.num_cells(); ++c)
      tv += 0.5 * std::abs(before[c] - after[c]);
    EXPECT_LE(tv, 1e-3);
  }
}

TEST(NbsTest, IndependentVariantIsFlagged) {
  NbsConfig cfg;
  cfg.iterations = 3000;
  const auto r = NbsPgaIndependent(BattleOfSexesTensor(), cfg);
  ASSERT_FALSE(r.solution.is_joint());
  EXPECT_EQ(r.solution.flags,
            (std::vector<std::string>{"nonconcave_best_effort"}));
  for (const auto& s : r.solution.profile.sigma) ExpectDistribution(s);
  // Starting from uniform it should find at least the uniform product value.
  const auto d = DefaultDisagreement(BattleOfSexesTensor());
  const auto uniform =
      ExpectedValue(BattleOfSexesTensor(), UniformProfile({2, 2}));
  EXPECT_GE(r.log_nash_product,
            std::log(uniform[0] - d[0]) + std::log(uniform[1] - d[1]));
}

// ---------------------------------------------------------------- (C)CE

TEST(ConstrainedTest, GiniExamples) {
  ConstrainedProgram prog;
  const auto constant = SolveConcaveOverPolytope(PayoffTensor({2, 3}), prog);
  for (double m : constant.device.mu) EXPECT_NEAR(m, 1.0 / 6, 1e-6);
  const auto mp = SolveConcaveOverPolytope(MatchingPenniesTensor(), prog);
  for (double m : mp.device.mu) EXPECT_NEAR(m, 0.25, 1e-6);
}

TEST(ConstrainedTest, NbsCceOnChickenAndBos) {
  ConstrainedProgram prog;
  prog.objective = ConcaveObjective::kLogNashProduct;
  const auto chicken = SolveConcaveOverPolytope(ChickenTensor(), prog);
  EXPECT_NEAR(chicken.device.mu[1], 0.5, 1e-3);
  EXPECT_NEAR(chicken.device.mu[2], 0.5, 1e-3);
  EXPECT_LE(chicken.device.mu[0], 1e-3);
  EXPECT_LE(chicken.device.mu[3], 1e-3);
  const auto bos = SolveConcaveOverPolytope(BattleOfSexesTensor(), prog);
  EXPECT_NEAR(bos.device.mu[0], bos.device.mu[3], 1e-3);
  const auto v = ExpectedValue(BattleOfSexesTensor(), bos.device);
  EXPECT_NEAR(v[0], 2.5, 1e-3);
  EXPECT_NEAR(v[1], 2.5, 1e-3);
}

TEST(ConstrainedTest, ChickenNbsUniqueOnGrid) {
  // Brute force over the CCE polytope of chicken with d = -6: the best Nash
  // product on a grid sits at 0.5 CS + 0.5 SC with value 36.
  const auto u = ChickenTensor();
  const std::vector<double> d = {-6.0, -6.0};
  double best = -INFINITY;
  std::vector<double> arg;
  const int steps = 100;
  for (int a = 0; a <= steps; ++a) {
    for (int b = 0; a + b <= steps; ++b) {
      for (int c = 0; a + b + c <= steps; ++c) {
        JointDevice mu{{double(a) / steps, double(b) / steps, double(c) / steps,
                        double(steps - a - b - c) / steps}};
        if (MaxCceGain(u, mu) > 1e-12) continue;
        const double value = NashProduct(ExpectedValue(u, mu), d);
        if (value > best) {
          best = value;
          arg = mu.mu;
        }
      }
    }
  }
  EXPECT_NEAR(best, 36.0, 1e-9);
  EXPECT_EQ(arg, (std::vector<double>{0.0, 0.5, 0.5, 0.0}));
}

TEST(ConstrainedTest, RandomTensorsPassDeviationAudit) {
  std::mt19937_64 rng(51);
  const std::vector<ConcaveObjective> objectives = {
      ConcaveObjective::kGini, ConcaveObjective::kLogNashProduct,
      ConcaveObjective::kWelfare, ConcaveObjective::kEntropy};
  for (int trial = 0; trial < 12; ++trial) {
    const auto u = RandomTensor(
        trial % 3 == 2 ? std::vector<int>{2, 2, 2} : std::vector<int>{3, 3},
        -1.0, 1.0, rng);
    for (auto family : {EquilibriumFamily::kCce, EquilibriumFamily::kCe}) {
      for (auto objective : objectives) {
        ConstrainedProgram prog;
        prog.objective = objective;
        prog.family = family;
        const auto r = SolveConcaveOverPolytope(u, prog);
        ExpectDistribution(r.device.mu);
        EXPECT_LE(MaxCceGain(u, r.device), 1e-6);
        if (family == EquilibriumFamily::kCe) {
          EXPECT_LE(MaxCeGain(u, r.device), 1e-6);
        }
      }
    }
  }
}

TEST(ConstrainedTest, ReferenceScheduleAgrees) {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 4; ++trial) {
    const auto u = RandomTensor({3, 3}, -1.0, 1.0, rng);
    for (auto objective :
         {ConcaveObjective::kGini, ConcaveObjective::kLogNashProduct}) {
      ConstrainedProgram prog;
      prog.objective = objective;
      const auto r = SolveConcaveOverPolytope(u, prog);
      const auto ref = SolveConcaveOverPolytope(u, ReferenceSchedule(prog));
      EXPECT_GE(r.objective, ref.objective - 1e-6);
    }
  }
}

TEST(ConstrainedTest, WelfareCceMatchesVertexEnumeration) {
  // Max welfare over the CCE polytope is attained at a pure Nash profile in
  // the prisoner's dilemma (DD only): welfare 2.
  ConstrainedProgram prog;
  prog.objective = ConcaveObjective::kWelfare;
  const auto r = SolveConcaveOverPolytope(PrisonersDilemmaTensor(), prog);
  const auto v = ExpectedValue(PrisonersDilemmaTensor(), r.device);
  const auto dd = PrisonersDilemmaTensor();
  EXPECT_NEAR(v[0] + v[1], dd.At(3, 0) + dd.At(3, 1), 1e-5);
}

// ---------------------------------------------------------------- registry

TEST(RegistryTest, DispatchesEveryName) {
  MetaSolverOptions options;
  options.solver.prd_iterations = 100;
  options.solver.rm_iterations = 100;
  options.nbs.iterations = 100;
  for (const auto& name : KnownMetaSolvers()) {
    const auto s = SolveMeta(name, ChickenTensor(), options);
    if (s.is_joint()) {
      ValidateDevice(ChickenTensor(), s.device);
    } else {
      ValidateProfile(ChickenTensor(), s.profile);
    }
  }
  EXPECT_THROW(SolveMeta("alpharank", ChickenTensor()), Error);
  EXPECT_THROW(SolveMeta("max_foo_cce", ChickenTensor()), Error);
}

TEST(RegistryTest, OptionsFromJson) {
  const auto o = MetaSolverOptionsFromJson(
      {{"gamma", 0.01}, {"rm_iterations", 7}, {"d", {0.0, 1.0}}});
  EXPECT_EQ(o.solver.gamma, 0.01);
  EXPECT_EQ(o.solver.rm_iterations, 7);
  EXPECT_EQ(*o.program.d, (std::vector<double>{0.0, 1.0}));
  EXPECT_THROW(MetaSolverOptionsFromJson({{"bogus", 1}}), Error);
  EXPECT_THROW(MetaSolverOptionsFromJson({{"gamma", 1.5}}), Error);
  EXPECT_THROW(MetaSolverOptionsFromJson({{"gamma", "x"}}), Error);
}

}  // namespace
}  // namespace sgpsro
