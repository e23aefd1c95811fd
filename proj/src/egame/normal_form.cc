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

#include "sgpsro/egame/normal_form.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "sgpsro/core/error.h"

namespace sgpsro {
namespace {

void CheckDistributionVector(const std::vector<double>& d, size_t size,
                             double tol, const char* what, int player) {
  if (d.size() != size) {
    Fail(ErrorCode::kInvalidArgument, what, " for player ", player, " has ",
         d.size(), " entries, expected ", size);
  }
  double total = 0.0;
  for (double x : d) {
    if (!std::isfinite(x) || x < -tol) {
      Fail(ErrorCode::kInvalidArgument, what, " has invalid entry ", x);
    }
    total += x;
  }
  if (std::abs(total - 1.0) > tol) {
    Fail(ErrorCode::kInvalidArgument, what, " sums to ", total);
  }
}

double ProfileProb(const MixedProfile& sigma, const std::vector<int>& joint,
                   int skip) {
  double p = 1.0;
  for (size_t i = 0; i < joint.size(); ++i) {
    if (static_cast<int>(i) == skip) continue;
    p *= sigma.sigma[i][joint[i]];
  }
  return p;
}

}  // namespace

nlohmann::json MetaSolutionToJson(const MetaSolution& s) {
  nlohmann::json j;
  j["kind"] = s.is_joint() ? "joint" : "independent";
  if (s.is_joint()) {
    j["device"] = s.device.mu;
  } else {
    j["profile"] = s.profile.sigma;
  }
  j["flags"] = s.flags;
  return j;
}

MetaSolution MetaSolutionFromJson(const nlohmann::json& j) {
  MetaSolution s;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "joint") {
    s.kind = MetaSolution::Kind::kJoint;
    s.device.mu = j.at("device").get<std::vector<double>>();
  } else if (kind == "independent") {
    s.profile.sigma = j.at("profile").get<std::vector<std::vector<double>>>();
  } else {
    Fail(ErrorCode::kInvalidArgument, "unknown meta-solution kind ", kind);
  }
  if (j.contains("flags")) {
    s.flags = j.at("flags").get<std::vector<std::string>>();
  }
  return s;
}

void ValidateProfile(const PayoffTensor& u, const MixedProfile& sigma,
                     double tol) {
  if (static_cast<int>(sigma.sigma.size()) != u.num_players()) {
    Fail(ErrorCode::kInvalidArgument, "profile has ", sigma.sigma.size(),
         " players, tensor has ", u.num_players());
  }
  for (int p = 0; p < u.num_players(); ++p) {
    CheckDistributionVector(sigma.sigma[p], u.shape()[p], tol, "mixed strategy",
                            p);
  }
}

void ValidateDevice(const PayoffTensor& u, const JointDevice& mu, double tol) {
  CheckDistributionVector(mu.mu, u.num_cells(), tol, "joint device", -1);
}

MixedProfile UniformProfile(const std::vector<int>& shape) {
  MixedProfile out;
  for (int n : shape) out.sigma.emplace_back(n, 1.0 / n);
  return out;
}

JointDevice ProductDevice(const PayoffTensor& u, const MixedProfile& sigma) {
  ValidateProfile(u, sigma);
  JointDevice mu;
  mu.mu.resize(u.num_cells());
  for (int c = 0; c < u.num_cells(); ++c) {
    mu.mu[c] = ProfileProb(sigma, u.Unflatten(c), -1);
  }
  return mu;
}

MixedProfile DeviceMarginals(const PayoffTensor& u, const JointDevice& mu) {
  MixedProfile out;
  for (int n : u.shape()) out.sigma.emplace_back(n, 0.0);
  for (int c = 0; c < u.num_cells(); ++c) {
    const auto joint = u.Unflatten(c);
    for (int p = 0; p < u.num_players(); ++p)
      out.sigma[p][joint[p]] += mu.mu[c];
  }
  return out;
}

std::vector<double> ExpectedValue(const PayoffTensor& u,
                                  const MixedProfile& sigma) {
  ValidateProfile(u, sigma);
  std::vector<double> out(u.num_players(), 0.0);
  for (int c = 0; c < u.num_cells(); ++c) {
    const double p = ProfileProb(sigma, u.Unflatten(c), -1);
    if (p == 0.0) continue;
    for (int i = 0; i < u.num_players(); ++i) out[i] += p * u.At(c, i);
  }
  return out;
}

std::vector<double> ExpectedValue(const PayoffTensor& u,
                                  const JointDevice& mu) {
  ValidateDevice(u, mu);
  std::vector<double> out(u.num_players(), 0.0);
  for (int c = 0; c < u.num_cells(); ++c) {
    if (mu.mu[c] == 0.0) continue;
    for (int i = 0; i < u.num_players(); ++i) out[i] += mu.mu[c] * u.At(c, i);
  }
  return out;
}

std::vector<std::vector<double>> DeviationValues(const PayoffTensor& u,
                                                 const MixedProfile& sigma) {
  ValidateProfile(u, sigma);
  std::vector<std::vector<double>> out;
  for (int n : u.shape()) out.emplace_back(n, 0.0);
  for (int c = 0; c < u.num_cells(); ++c) {
    const auto joint = u.Unflatten(c);
    for (int i = 0; i < u.num_players(); ++i) {
      out[i][joint[i]] += ProfileProb(sigma, joint, i) * u.At(c, i);
    }
  }
  return out;
}

std::vector<std::vector<double>> CceDeviationGains(const PayoffTensor& u,
                                                   const JointDevice& mu) {
  ValidateDevice(u, mu);
  const auto base = ExpectedValue(u, mu);
  std::vector<std::vector<double>> gains;
  for (int i = 0; i < u.num_players(); ++i) {
    gains.emplace_back(u.shape()[i], -base[i]);
  }
  for (int c = 0; c < u.num_cells(); ++c) {
    if (mu.mu[c] == 0.0) continue;
    auto joint = u.Unflatten(c);
    for (int i = 0; i < u.num_players(); ++i) {
      const int original = joint[i];
      for (int k = 0; k < u.shape()[i]; ++k) {
        joint[i] = k;
        gains[i][k] += mu.mu[c] * u.At(joint, i);
      }
      joint[i] = original;
    }
  }
  return gains;
}

CeGains CeDeviationGains(const PayoffTensor& u, const JointDevice& mu) {
  ValidateDevice(u, mu);
  CeGains out;
  const auto marginals = DeviceMarginals(u, mu);
  for (int i = 0; i < u.num_players(); ++i) {
    const int n = u.shape()[i];
    out.weighted.emplace_back(n, std::vector<double>(n, 0.0));
    out.recommendation_zero.emplace_back(n, false);
    for (int r = 0; r < n; ++r) {
      out.recommendation_zero[i][r] = marginals.sigma[i][r] <= 0.0;
    }
  }
  for (int c = 0; c < u.num_cells(); ++c) {
    if (mu.mu[c] == 0.0) continue;
    auto joint = u.Unflatten(c);
    for (int i = 0; i < u.num_players(); ++i) {
      const int r = joint[i];
      const double here = u.At(c, i);
      for (int k = 0; k < u.shape()[i]; ++k) {
        joint[i] = k;
        out.weighted[i][r][k] += mu.mu[c] * (u.At(joint, i) - here);
      }
      joint[i] = r;
    }
  }
  out.conditional = out.weighted;
  for (int i = 0; i < u.num_players(); ++i) {
    for (int r = 0; r < u.shape()[i]; ++r) {
      const double m = marginals.sigma[i][r];
      for (double& g : out.conditional[i][r]) g = m > 0.0 ? g / m : 0.0;
    }
  }
  return out;
}

double MaxCceGain(const PayoffTensor& u, const JointDevice& mu) {
  double best = -INFINITY;
  for (const auto& per_player : CceDeviationGains(u, mu)) {
    for (double g : per_player) best = std::max(best, g);
  }
  return best;
}

double MaxCeGain(const PayoffTensor& u, const JointDevice& mu) {
  const CeGains gains = CeDeviationGains(u, mu);
  double best = -INFINITY;
  for (size_t i = 0; i < gains.conditional.size(); ++i) {
    for (size_t r = 0; r < gains.conditional[i].size(); ++r) {
      if (gains.recommendation_zero[i][r]) continue;
      for (double g : gains.conditional[i][r]) best = std::max(best, g);
    }
  }
  return best;
}

double NfgNashConv(const PayoffTensor& u, const MixedProfile& sigma) {
  const auto values = DeviationValues(u, sigma);
  const auto base = ExpectedValue(u, sigma);
  double total = 0.0;
  for (int i = 0; i < u.num_players(); ++i) {
    const double best = *std::max_element(values[i].begin(), values[i].end());
    total += std::max(0.0, best - base[i]);
  }
  return total;
}

std::vector<OpponentProfileWeight> OpponentDistribution(
    const PayoffTensor& u, const MetaSolution& solution, Player player) {
  std::map<std::vector<int>, double> weights;
  for (int c = 0; c < u.num_cells(); ++c) {
    auto joint = u.Unflatten(c);
    double p;
    if (solution.is_joint()) {
      p = solution.device.mu[c];
    } else {
      if (joint[player] != 0) continue;
      p = ProfileProb(solution.profile, joint, player);
    }
    if (p <= 0.0) continue;
    joint[player] = -1;
    weights[joint] += p;
  }
  std::vector<OpponentProfileWeight> out;
  for (const auto& [joint, w] : weights) out.push_back({joint, w});
  return out;
}

}  // namespace sgpsro
