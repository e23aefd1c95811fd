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

#ifndef SGPSRO_SOLVERS_MSS_H_
#define SGPSRO_SOLVERS_MSS_H_

#include <cstdint>
#include <vector>

#include "sgpsro/core/payoff_tensor.h"
#include "sgpsro/egame/normal_form.h"

namespace sgpsro {

struct SolverConfig {
  // Minimum pure-strategy mass: each player's strategy stays at or above
  // gamma / |Pi_i| (PRD) or is mixed with gamma * uniform (RM).
  double gamma = 0.005;
  double prd_step = 1e-3;
  int prd_iterations = 100000;
  int rm_iterations = 10000;
  std::uint64_t seed = 0;

  void Validate() const;
};

MixedProfile MssUniform(const PayoffTensor& u);

// Projected replicator dynamics; returns the final iterate.
MixedProfile MssPrd(const PayoffTensor& u, const SolverConfig& cfg);

// Regret matching with gamma-uniform exploration; returns the average of the
// played strategies.
MixedProfile MssRegretMatching(const PayoffTensor& u, const SolverConfig& cfg);

// Point mass on the joint strategy with the largest payoff sum, lowest flat
// index among ties.
JointDevice MssMaxWelfare(const PayoffTensor& u);

namespace internal {

// Row-major joint strategy of every flat cell.
std::vector<std::vector<int>> AllJoints(const PayoffTensor& u);

// values[i][k] = u_i(k, sigma_{-i}) without validation.
std::vector<std::vector<double>> FastDeviationValues(
    const PayoffTensor& u, const std::vector<std::vector<int>>& joints,
    const std::vector<std::vector<double>>& sigma);

}  // namespace internal
}  // namespace sgpsro

#endif  // SGPSRO_SOLVERS_MSS_H_
