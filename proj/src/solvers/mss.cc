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

#include "sgpsro/solvers/mss.h"

#include <cmath>

#include "sgpsro/core/error.h"
#include "sgpsro/solvers/projection.h"

namespace sgpsro {

void SolverConfig::Validate() const {
  if (!(gamma >= 0.0 && gamma < 1.0)) {
    Fail(ErrorCode::kInvalidArgument, "gamma must be in [0, 1), got ", gamma);
  }
  if (!(prd_step > 0.0)) {
    Fail(ErrorCode::kInvalidArgument, "prd_step must be positive");
  }
  if (prd_iterations < 0 || rm_iterations < 1) {
    Fail(ErrorCode::kInvalidArgument, "bad iteration counts");
  }
}

namespace internal {

std::vector<std::vector<int>> AllJoints(const PayoffTensor& u) {
  std::vector<std::vector<int>> joints;
  joints.reserve(u.num_cells());
  for (int c = 0; c < u.num_cells(); ++c) joints.push_back(u.Unflatten(c));
  return joints;
}

std::vector<std::vector<double>> FastDeviationValues(
    const PayoffTensor& u, const std::vector<std::vector<int>>& joints,
    const std::vector<std::vector<double>>& sigma) {
  const int n = u.num_players();
  std::vector<std::vector<double>> out;
  for (int s : u.shape()) out.emplace_back(s, 0.0);
  for (int c = 0; c < u.num_cells(); ++c) {
    const auto& joint = joints[c];
    for (int i = 0; i < n; ++i) {
      double p = 1.0;
      for (int j = 0; j < n && p != 0.0; ++j) {
        if (j != i) p *= sigma[j][joint[j]];
      }
      if (p != 0.0) out[i][joint[i]] += p * u.At(c, i);
    }
  }
  return out;
}

}  // namespace internal

namespace {

void CheckComplete(const PayoffTensor& u) {
  if (u.num_players() < 1 || u.num_cells() < 1) {
    Fail(ErrorCode::kFailedPrecondition, "empty payoff tensor");
  }
  for (double v : u.values()) {
    if (!std::isfinite(v)) {
      Fail(ErrorCode::kFailedPrecondition, "payoff tensor has missing entries");
    }
  }
}

double Dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

}  // namespace

MixedProfile MssUniform(const PayoffTensor& u) {
  return UniformProfile(u.shape());
}

MixedProfile MssPrd(const PayoffTensor& u, const SolverConfig& cfg) {
  cfg.Validate();
  CheckComplete(u);
  const auto joints = internal::AllJoints(u);
  MixedProfile sigma = UniformProfile(u.shape());
  const int n = u.num_players();
  for (int it = 0; it < cfg.prd_iterations; ++it) {
    const auto values = internal::FastDeviationValues(u, joints, sigma.sigma);
    for (int i = 0; i < n; ++i) {
      auto& s = sigma.sigma[i];
      const double mean = Dot(s, values[i]);
      std::vector<double> y(s.size());
      for (size_t k = 0; k < s.size(); ++k) {
        y[k] = s[k] + cfg.prd_step * s[k] * (values[i][k] - mean);
      }
      s = ProjectTruncatedSimplex(y, cfg.gamma / static_cast<double>(s.size()));
    }
  }
  return sigma;
}

MixedProfile MssRegretMatching(const PayoffTensor& u, const SolverConfig& cfg) {
  cfg.Validate();
  CheckComplete(u);
  const auto joints = internal::AllJoints(u);
  const int n = u.num_players();
  std::vector<std::vector<double>> regret, average;
  for (int s : u.shape()) {
    regret.emplace_back(s, 0.0);
    average.emplace_back(s, 0.0);
  }
  std::vector<std::vector<double>> play = UniformProfile(u.shape()).sigma;
  for (int it = 0; it < cfg.rm_iterations; ++it) {
    for (int i = 0; i < n; ++i) {
      const double size = static_cast<double>(regret[i].size());
      double positive = 0.0;
      for (double r : regret[i]) positive += std::max(0.0, r);
      for (size_t k = 0; k < regret[i].size(); ++k) {
        const double matched = positive > 0.0
                                   ? std::max(0.0, regret[i][k]) / positive
                                   : 1.0 / size;
        play[i][k] = cfg.gamma / size + (1.0 - cfg.gamma) * matched;
      }
    }
    const auto values = internal::FastDeviationValues(u, joints, play);
    for (int i = 0; i < n; ++i) {
      const double mean = Dot(play[i], values[i]);
      for (size_t k = 0; k < regret[i].size(); ++k) {
        regret[i][k] += values[i][k] - mean;
        average[i][k] += play[i][k];
      }
    }
  }
  MixedProfile out;
  for (auto& a : average) {
    for (double& x : a) x /= cfg.rm_iterations;
    out.sigma.push_back(std::move(a));
  }
  return out;
}

JointDevice MssMaxWelfare(const PayoffTensor& u) {
  CheckComplete(u);
  int best = 0;
  double best_welfare = -INFINITY;
  for (int c = 0; c < u.num_cells(); ++c) {
    double w = 0.0;
    for (int i = 0; i < u.num_players(); ++i) w += u.At(c, i);
    if (w > best_welfare) {
      best_welfare = w;
      best = c;
    }
  }
  JointDevice mu;
  mu.mu.assign(u.num_cells(), 0.0);
  mu.mu[best] = 1.0;
  return mu;
}

}  // namespace sgpsro
