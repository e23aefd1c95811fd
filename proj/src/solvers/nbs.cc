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

#include "sgpsro/solvers/nbs.h"

#include <algorithm>
#include <cmath>

#include "sgpsro/core/error.h"
#include "sgpsro/solvers/mss.h"
#include "sgpsro/solvers/projection.h"

namespace sgpsro {
namespace {

std::vector<double> JointPayoffs(const PayoffTensor& u,
                                 const std::vector<double>& x) {
  std::vector<double> out(u.num_players(), 0.0);
  for (int c = 0; c < u.num_cells(); ++c) {
    if (x[c] == 0.0) continue;
    for (int i = 0; i < u.num_players(); ++i) out[i] += x[c] * u.At(c, i);
  }
  return out;
}

void CheckSizes(const PayoffTensor& u, const std::vector<double>& d,
                const std::vector<double>& x) {
  if (static_cast<int>(d.size()) != u.num_players()) {
    Fail(ErrorCode::kInvalidArgument, "need one disagreement value per player");
  }
  if (static_cast<int>(x.size()) != u.num_cells()) {
    Fail(ErrorCode::kInvalidArgument, "joint vector has ", x.size(),
         " entries, tensor has ", u.num_cells(), " cells");
  }
}

struct Setup {
  std::vector<double> d;
  double kappa;
  bool check_iterates;
  double u_max;
};

Setup Prepare(const PayoffTensor& u, const NbsConfig& cfg) {
  cfg.Validate();
  if (u.num_cells() < 1) Fail(ErrorCode::kFailedPrecondition, "empty tensor");
  Setup s;
  s.d = cfg.d ? *cfg.d : DefaultDisagreement(u);
  if (static_cast<int>(s.d.size()) != u.num_players()) {
    Fail(ErrorCode::kInvalidArgument, "need one disagreement value per player");
  }
  s.u_max = std::max(u.MaxAbsValue(), 1e-300);
  if (cfg.kappa) {
    s.kappa = *cfg.kappa;
    s.check_iterates = true;
  } else {
    for (int i = 0; i < u.num_players(); ++i) {
      double lo = INFINITY;
      for (int c = 0; c < u.num_cells(); ++c) lo = std::min(lo, u.At(c, i));
      if (!(lo - s.d[i] > 0.0)) {
        Fail(ErrorCode::kInvalidArgument, "margin violated for player ", i,
             ": minimum payoff ", lo, " is not above disagreement ", s.d[i]);
      }
    }
    s.kappa = SimplexMargin(u, s.d);
    s.check_iterates = false;
  }
  return s;
}

void CheckMargin(const Setup& s, const std::vector<double>& payoffs, int t) {
  for (size_t i = 0; i < payoffs.size(); ++i) {
    if (payoffs[i] - s.d[i] < s.kappa - 1e-12) {
      Fail(ErrorCode::kFailedPrecondition, "margin violated for player ", i,
           " at iterate ", t, ": u - d = ", payoffs[i] - s.d[i], " < kappa ",
           s.kappa);
    }
  }
}

double LogProductOfPayoffs(const std::vector<double>& payoffs,
                           const std::vector<double>& d) {
  double g = 0.0;
  for (size_t i = 0; i < payoffs.size(); ++i) {
    const double gap = payoffs[i] - d[i];
    if (!(gap > 0.0)) return -INFINITY;
    g += std::log(gap);
  }
  return g;
}

void Finish(const PayoffTensor& u, NbsResult& r) {
  const auto payoffs = r.solution.is_joint()
                           ? ExpectedValue(u, r.solution.device)
                           : ExpectedValue(u, r.solution.profile);
  r.log_nash_product = LogProductOfPayoffs(payoffs, r.d);
  r.nash_product = NashProduct(payoffs, r.d);
}

}  // namespace

std::vector<double> DefaultDisagreement(const PayoffTensor& u) {
  std::vector<double> d(u.num_players(), INFINITY);
  for (int c = 0; c < u.num_cells(); ++c) {
    for (int i = 0; i < u.num_players(); ++i) d[i] = std::min(d[i], u.At(c, i));
  }
  for (double& x : d) x -= 1.0;
  return d;
}

double SimplexMargin(const PayoffTensor& u, const std::vector<double>& d) {
  double margin = INFINITY;
  for (int c = 0; c < u.num_cells(); ++c) {
    for (int i = 0; i < u.num_players(); ++i) {
      margin = std::min(margin, u.At(c, i) - d[i]);
    }
  }
  return margin;
}

double LogNashProduct(const PayoffTensor& u, const std::vector<double>& d,
                      const std::vector<double>& x) {
  CheckSizes(u, d, x);
  return LogProductOfPayoffs(JointPayoffs(u, x), d);
}

std::vector<double> LogNashProductGradient(const PayoffTensor& u,
                                           const std::vector<double>& d,
                                           const std::vector<double>& x) {
  CheckSizes(u, d, x);
  const auto payoffs = JointPayoffs(u, x);
  std::vector<double> grad(u.num_cells(), 0.0);
  for (int i = 0; i < u.num_players(); ++i) {
    const double gap = payoffs[i] - d[i];
    if (!(gap > 0.0)) {
      Fail(ErrorCode::kFailedPrecondition,
           "gradient outside domain for player ", i);
    }
    for (int c = 0; c < u.num_cells(); ++c) grad[c] += u.At(c, i) / gap;
  }
  return grad;
}

std::vector<std::vector<double>> LogNashProductHessian(
    const PayoffTensor& u, const std::vector<double>& d,
    const std::vector<double>& x) {
  CheckSizes(u, d, x);
  const auto payoffs = JointPayoffs(u, x);
  const int m = u.num_cells();
  std::vector<std::vector<double>> h(m, std::vector<double>(m, 0.0));
  for (int i = 0; i < u.num_players(); ++i) {
    const double gap = payoffs[i] - d[i];
    if (!(gap > 0.0)) {
      Fail(ErrorCode::kFailedPrecondition, "hessian outside domain for player ",
           i);
    }
    const double w = 1.0 / (gap * gap);
    for (int a = 0; a < m; ++a) {
      for (int b = 0; b < m; ++b) h[a][b] -= w * u.At(a, i) * u.At(b, i);
    }
  }
  return h;
}

double NashProduct(const std::vector<double>& payoffs,
                   const std::vector<double>& d) {
  if (payoffs.size() != d.size()) {
    Fail(ErrorCode::kInvalidArgument, "payoff and disagreement sizes differ");
  }
  double p = 1.0;
  for (size_t i = 0; i < payoffs.size(); ++i) p *= payoffs[i] - d[i];
  return p;
}

double NbsBound(int t, double kappa, double u_max, int n, int card) {
  if (!(kappa > 0.0)) Fail(ErrorCode::kInvalidArgument, "kappa must be > 0");
  if (t < 0) Fail(ErrorCode::kInvalidArgument, "t must be >= 0");
  return u_max * n * std::sqrt(static_cast<double>(card)) /
         (kappa * std::sqrt(t + 1.0));
}

double PgaStep(int t, double kappa, double u_max, int n, int card) {
  const double k = static_cast<double>(card);
  return kappa * std::sqrt((k - 1.0) / k) / (u_max * n) / std::sqrt(t + 1.0);
}

double EmdaStep(int t, double kappa, double u_max, int n, int card) {
  const double lipschitz = u_max * n / kappa;
  return std::sqrt(2.0 * std::log(static_cast<double>(card))) / lipschitz /
         std::sqrt(t + 1.0);
}

void NbsConfig::Validate() const {
  if (iterations < 1)
    Fail(ErrorCode::kInvalidArgument, "iterations must be >= 1");
  if (kappa && !(*kappa > 0.0)) {
    Fail(ErrorCode::kInvalidArgument, "kappa must be > 0");
  }
}

NbsResult NbsJoint(const PayoffTensor& u, const NbsConfig& cfg) {
  const Setup s = Prepare(u, cfg);
  const int n = u.num_players();
  const int card = u.num_cells();
  std::vector<double> x(card, 1.0 / card);
  NbsResult r;
  r.d = s.d;
  r.kappa = s.kappa;
  r.u_max = s.u_max;
  auto payoffs = JointPayoffs(u, x);
  if (s.check_iterates) CheckMargin(s, payoffs, 0);
  double best = LogProductOfPayoffs(payoffs, s.d);
  std::vector<double> best_x = x;
  if (cfg.record_trace) r.trace.push_back(best);
  const bool exponentiated = cfg.variant == NbsConfig::Variant::kExponentiated;
  for (int t = 0; t < cfg.iterations; ++t) {
    std::vector<double> grad(card, 0.0);
    for (int i = 0; i < n; ++i) {
      const double gap = payoffs[i] - s.d[i];
      for (int c = 0; c < card; ++c) grad[c] += u.At(c, i) / gap;
    }
    const double alpha =
        cfg.step ? cfg.step(t)
                 : (exponentiated ? EmdaStep(t, s.kappa, s.u_max, n, card)
                                  : PgaStep(t, s.kappa, s.u_max, n, card));
    if (exponentiated) {
      const double top = *std::max_element(grad.begin(), grad.end());
      double z = 0.0;
      for (int c = 0; c < card; ++c) {
        x[c] *= std::exp(alpha * (grad[c] - top));
        z += x[c];
      }
      for (double& v : x) v /= z;
    } else {
      for (int c = 0; c < card; ++c) x[c] += alpha * grad[c];
      x = ProjectSimplex(x);
    }
    payoffs = JointPayoffs(u, x);
    if (s.check_iterates) CheckMargin(s, payoffs, t + 1);
    const double g = LogProductOfPayoffs(payoffs, s.d);
    if (g > best) {
      best = g;
      best_x = x;
    }
    if (cfg.record_trace) r.trace.push_back(best);
  }
  r.solution = MetaSolution::Joint(JointDevice{best_x});
  Finish(u, r);
  return r;
}

NbsResult NbsPga(const PayoffTensor& u, NbsConfig cfg) {
  cfg.variant = NbsConfig::Variant::kProjectedGradient;
  return NbsJoint(u, cfg);
}

NbsResult NbsEmda(const PayoffTensor& u, NbsConfig cfg) {
  cfg.variant = NbsConfig::Variant::kExponentiated;
  return NbsJoint(u, cfg);
}

NbsResult NbsPgaIndependent(const PayoffTensor& u, const NbsConfig& cfg) {
  const Setup s = Prepare(u, cfg);
  const int n = u.num_players();
  const auto joints = internal::AllJoints(u);
  MixedProfile sigma = UniformProfile(u.shape());
  NbsResult r;
  r.d = s.d;
  r.kappa = s.kappa;
  r.u_max = s.u_max;
  auto payoffs_of = [&](const MixedProfile& p) {
    std::vector<double> out(n, 0.0);
    for (int c = 0; c < u.num_cells(); ++c) {
      double w = 1.0;
      for (int j = 0; j < n; ++j) w *= p.sigma[j][joints[c][j]];
      for (int i = 0; i < n; ++i) out[i] += w * u.At(c, i);
    }
    return out;
  };
  auto payoffs = payoffs_of(sigma);
  if (s.check_iterates) CheckMargin(s, payoffs, 0);
  double best = LogProductOfPayoffs(payoffs, s.d);
  MixedProfile best_sigma = sigma;
  if (cfg.record_trace) r.trace.push_back(best);
  for (int t = 0; t < cfg.iterations; ++t) {
    // grad_j[k] = sum_i u_i(k, sigma_{-j}) / (u_i(sigma) - d_i).
    std::vector<std::vector<double>> grad;
    for (int size : u.shape()) grad.emplace_back(size, 0.0);
    for (int c = 0; c < u.num_cells(); ++c) {
      const auto& joint = joints[c];
      double scaled = 0.0;
      for (int i = 0; i < n; ++i) scaled += u.At(c, i) / (payoffs[i] - s.d[i]);
      for (int j = 0; j < n; ++j) {
        double w = 1.0;
        for (int l = 0; l < n; ++l) {
          if (l != j) w *= sigma.sigma[l][joint[l]];
        }
        grad[j][joint[j]] += w * scaled;
      }
    }
    const double alpha =
        cfg.step ? cfg.step(t) : PgaStep(t, s.kappa, s.u_max, n, u.num_cells());
    for (int j = 0; j < n; ++j) {
      auto y = sigma.sigma[j];
      for (size_t k = 0; k < y.size(); ++k) y[k] += alpha * grad[j][k];
      sigma.sigma[j] = ProjectSimplex(y);
    }
    payoffs = payoffs_of(sigma);
    if (s.check_iterates) CheckMargin(s, payoffs, t + 1);
    const double g = LogProductOfPayoffs(payoffs, s.d);
    if (g > best) {
      best = g;
      best_sigma = sigma;
    }
    if (cfg.record_trace) r.trace.push_back(best);
  }
  r.solution = MetaSolution::Independent(best_sigma);
  r.solution.flags.push_back("nonconcave_best_effort");
  Finish(u, r);
  return r;
}

}  // namespace sgpsro
