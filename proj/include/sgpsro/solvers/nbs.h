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

#ifndef SGPSRO_SOLVERS_NBS_H_
#define SGPSRO_SOLVERS_NBS_H_

#include <functional>
#include <optional>
#include <vector>

#include "sgpsro/core/payoff_tensor.h"
#include "sgpsro/egame/normal_form.h"

namespace sgpsro {

// Nash bargaining over a payoff tensor. The joint variable x is a
// distribution over flat cells; player i's payoff is u_i^T x.

// Default disagreement point: each player's minimum tensor value minus 1.
std::vector<double> DefaultDisagreement(const PayoffTensor& u);

// min_i min_c (u_i(c) - d_i): the margin guaranteed over the whole simplex.
double SimplexMargin(const PayoffTensor& u, const std::vector<double>& d);

// g(x) = sum_i log(u_i^T x - d_i); -inf outside the domain.
double LogNashProduct(const PayoffTensor& u, const std::vector<double>& d,
                      const std::vector<double>& x);
// sum_i u_i / (u_i^T x - d_i).
std::vector<double> LogNashProductGradient(const PayoffTensor& u,
                                           const std::vector<double>& d,
                                           const std::vector<double>& x);
// -sum_i u_i u_i^T / (u_i^T x - d_i)^2, dense row-major.
std::vector<std::vector<double>> LogNashProductHessian(
    const PayoffTensor& u, const std::vector<double>& d,
    const std::vector<double>& x);

// Nash product prod_i (u_i - d_i) of a payoff vector.
double NashProduct(const std::vector<double>& payoffs,
                   const std::vector<double>& d);

// u_max * n * sqrt(card) / (kappa * sqrt(t + 1)).
double NbsBound(int t, double kappa, double u_max, int n, int card);

struct NbsConfig {
  enum class Variant { kProjectedGradient, kExponentiated };

  // Defaults to DefaultDisagreement.
  std::optional<std::vector<double>> d;
  // Required margin u_i(x) - d_i >= kappa. When unset it is derived from the
  // tensor and must be positive; when set, it is checked at every iterate.
  std::optional<double> kappa;
  int iterations = 1000;
  Variant variant = Variant::kProjectedGradient;
  // Overrides the default step schedule alpha(t).
  std::function<double(int)> step;
  // Keep the best-so-far g after every iterate in NbsResult::trace.
  bool record_trace = false;

  void Validate() const;
};

struct NbsResult {
  MetaSolution solution;
  double log_nash_product = 0.0;
  double nash_product = 0.0;
  std::vector<double> d;
  double kappa = 0.0;
  double u_max = 0.0;
  // trace[t] = max_{s <= t} g(x^s); trace[0] is the uniform start.
  std::vector<double> trace;
};

// Gradient ascent over the joint simplex; returns the best iterate.
NbsResult NbsJoint(const PayoffTensor& u, const NbsConfig& cfg);
NbsResult NbsPga(const PayoffTensor& u, NbsConfig cfg);
NbsResult NbsEmda(const PayoffTensor& u, NbsConfig cfg);

// Best effort over independent profiles with per-player projection. The
// objective is not concave in general; the result carries the
// "nonconcave_best_effort" flag.
NbsResult NbsPgaIndependent(const PayoffTensor& u, const NbsConfig& cfg);

// Step-size schedules used by default.
double PgaStep(int t, double kappa, double u_max, int n, int card);
double EmdaStep(int t, double kappa, double u_max, int n, int card);

}  // namespace sgpsro

#endif  // SGPSRO_SOLVERS_NBS_H_
