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

#ifndef SGPSRO_SOLVERS_REGISTRY_H_
#define SGPSRO_SOLVERS_REGISTRY_H_

#include <string>
#include <vector>

#include "json.hpp"
#include "sgpsro/core/payoff_tensor.h"
#include "sgpsro/egame/normal_form.h"
#include "sgpsro/solvers/constrained.h"
#include "sgpsro/solvers/mss.h"
#include "sgpsro/solvers/nbs.h"

namespace sgpsro {

struct MetaSolverOptions {
  SolverConfig solver;
  NbsConfig nbs;
  // Objective and family are overridden by the solver name.
  ConstrainedProgram program;
};

// Names: uniform, prd, rm, max_welfare, nbs_pga, nbs_emda,
// nbs_pga_independent, and max_{gini,nbs,welfare,entropy}_{cce,ce}.
const std::vector<std::string>& KnownMetaSolvers();
bool IsKnownMetaSolver(const std::string& name);

MetaSolution SolveMeta(const std::string& name, const PayoffTensor& u,
                       const MetaSolverOptions& options = {});

// Reads overrides such as {"gamma": 0.01, "rm_iterations": 100,
// "nbs_iterations": 500, "entropy_weight": 0, "d": [0, 0]}; unknown keys are
// rejected.
MetaSolverOptions MetaSolverOptionsFromJson(const nlohmann::json& j);

}  // namespace sgpsro

#endif  // SGPSRO_SOLVERS_REGISTRY_H_
