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

#ifndef SGPSRO_EGAME_NORMAL_FORM_H_
#define SGPSRO_EGAME_NORMAL_FORM_H_

#include <string>
#include <vector>

#include "json.hpp"
#include "sgpsro/core/payoff_tensor.h"
#include "sgpsro/core/types.h"

namespace sgpsro {

// sigma[i] is a distribution over player i's pure strategies.
struct MixedProfile {
  std::vector<std::vector<double>> sigma;
};

// mu is a distribution over flat joint-strategy indices of a tensor.
struct JointDevice {
  std::vector<double> mu;
};

// Output of a meta-strategy solver: an independent profile or a joint
// device. `flags` carries caveats such as "nonconcave_best_effort".
struct MetaSolution {
  enum class Kind { kIndependent, kJoint };
  Kind kind = Kind::kIndependent;
  MixedProfile profile;
  JointDevice device;
  std::vector<std::string> flags;

  bool is_joint() const { return kind == Kind::kJoint; }
  static MetaSolution Independent(MixedProfile p) {
    MetaSolution s;
    s.profile = std::move(p);
    return s;
  }
  static MetaSolution Joint(JointDevice d) {
    MetaSolution s;
    s.kind = Kind::kJoint;
    s.device = std::move(d);
    return s;
  }
};

nlohmann::json MetaSolutionToJson(const MetaSolution& s);
MetaSolution MetaSolutionFromJson(const nlohmann::json& j);

// Throws unless every distribution is nonnegative and sums to 1 within tol,
// with sizes matching the tensor.
void ValidateProfile(const PayoffTensor& u, const MixedProfile& sigma,
                     double tol = 1e-9);
void ValidateDevice(const PayoffTensor& u, const JointDevice& mu,
                    double tol = 1e-9);

MixedProfile UniformProfile(const std::vector<int>& shape);
JointDevice ProductDevice(const PayoffTensor& u, const MixedProfile& sigma);
// Per-player marginals of a device.
MixedProfile DeviceMarginals(const PayoffTensor& u, const JointDevice& mu);

std::vector<double> ExpectedValue(const PayoffTensor& u,
                                  const MixedProfile& sigma);
std::vector<double> ExpectedValue(const PayoffTensor& u, const JointDevice& mu);

// values[i][k] = u_i(pi_k, sigma_{-i}).
std::vector<std::vector<double>> DeviationValues(const PayoffTensor& u,
                                                 const MixedProfile& sigma);

// gains[i][k] = u_i(pi_k, mu_{-i}) - u_i(mu): the gain from committing to
// pure strategy k before seeing the recommendation.
std::vector<std::vector<double>> CceDeviationGains(const PayoffTensor& u,
                                                   const JointDevice& mu);

struct CeGains {
  // gains[i][r][k]: player i recommended r switches to k, scaled by the
  // recommendation's marginal probability (so zero-probability
  // recommendations contribute exactly 0).
  std::vector<std::vector<std::vector<double>>> weighted;
  // Same, conditioned on the recommendation: u_i(k, mu|r) - u_i(mu|r).
  // Zero when the recommendation has zero probability.
  std::vector<std::vector<std::vector<double>>> conditional;
  // recommendation_zero[i][r] is true when mu never recommends r to i; the
  // conditional gain there is reported as 0 by convention.
  std::vector<std::vector<bool>> recommendation_zero;
};
CeGains CeDeviationGains(const PayoffTensor& u, const JointDevice& mu);

double MaxCceGain(const PayoffTensor& u, const JointDevice& mu);
// Maximum over conditional CE gains at positive-probability recommendations.
double MaxCeGain(const PayoffTensor& u, const JointDevice& mu);

// sum_i [max_k u_i(k, sigma_{-i}) - u_i(sigma)].
double NfgNashConv(const PayoffTensor& u, const MixedProfile& sigma);

// Distribution over the other players' pure strategies induced by a
// solution, as (joint strategy with the entry for `player` set to -1,
// probability) pairs, zero-probability entries dropped.
struct OpponentProfileWeight {
  std::vector<int> joint;
  double weight;
};
std::vector<OpponentProfileWeight> OpponentDistribution(
    const PayoffTensor& u, const MetaSolution& solution, Player player);

}  // namespace sgpsro

#endif  // SGPSRO_EGAME_NORMAL_FORM_H_
