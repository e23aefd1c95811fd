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

#ifndef SGPSRO_SOLVERS_CONSTRAINED_H_
#define SGPSRO_SOLVERS_CONSTRAINED_H_

#include <optional>
#include <string>
#include <vector>

#include "sgpsro/core/payoff_tensor.h"
#include "sgpsro/egame/normal_form.h"

namespace sgpsro {

enum class ConcaveObjective { kGini, kLogNashProduct, kWelfare, kEntropy };
enum class EquilibriumFamily { kCe, kCce };

const char* ConcaveObjectiveName(ConcaveObjective o);
ConcaveObjective ParseConcaveObjective(const std::string& name);
const char* EquilibriumFamilyName(EquilibriumFamily f);
EquilibriumFamily ParseEquilibriumFamily(const std::string& name);

struct ConstrainedProgram {
  ConcaveObjective objective = ConcaveObjective::kGini;
  EquilibriumFamily family = EquilibriumFamily::kCce;
  // Weight of the added entropy term. Unset means 1e-3 for the log Nash
  // product and 0 otherwise.
  std::optional<double> entropy_weight;
  // Disagreement point for the log Nash product; defaults as in nbs.h.
  std::optional<std::vector<double>> d;
  // Audit threshold on the largest deviation gain of the returned device.
  double tolerance = 1e-6;

  // Augmented-Lagrangian schedule.
  int max_outer = 80;
  int max_inner = 4000;
  double initial_step = 1.0;
  double initial_penalty = 10.0;
  double penalty_growth = 5.0;

  double EntropyWeight() const;
  void Validate() const;
};

// Doubles the iteration budgets and halves the initial step.
ConstrainedProgram ReferenceSchedule(const ConstrainedProgram& prog);

struct ConstrainedResult {
  JointDevice device;
  double objective = 0.0;     // objective including the entropy term
  double max_cce_gain = 0.0;  // audit, original payoff units
  double max_ce_gain = 0.0;   // audit; only meaningful for the CE family
  int outer_iterations = 0;
  int inner_iterations = 0;
};

// Maximizes the chosen concave objective over the (C)CE polytope. Throws
// kNotConverged, with the final infeasibility, when the audit fails.
ConstrainedResult SolveConcaveOverPolytope(const PayoffTensor& u,
                                           const ConstrainedProgram& prog);

// Value of the program's objective (with entropy term) at mu.
double ConcaveObjectiveValue(const PayoffTensor& u,
                             const ConstrainedProgram& prog,
                             const std::vector<double>& mu);

}  // namespace sgpsro

#endif  // SGPSRO_SOLVERS_CONSTRAINED_H_
