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

#include "sgpsro/solvers/registry.h"

#include <algorithm>

#include "sgpsro/core/error.h"

namespace sgpsro {

const std::vector<std::string>& KnownMetaSolvers() {
  static const std::vector<std::string> kNames = {"uniform",
                                                  "prd",
                                                  "rm",
                                                  "max_welfare",
                                                  "nbs_pga",
                                                  "nbs_emda",
                                                  "nbs_pga_independent",
                                                  "max_gini_cce",
                                                  "max_gini_ce",
                                                  "max_nbs_cce",
                                                  "max_nbs_ce",
                                                  "max_welfare_cce",
                                                  "max_welfare_ce",
                                                  "max_entropy_cce",
                                                  "max_entropy_ce"};
  return kNames;
}

bool IsKnownMetaSolver(const std::string& name) {
  const auto& names = KnownMetaSolvers();
  return std::find(names.begin(), names.end(), name) != names.end();
}

MetaSolution SolveMeta(const std::string& name, const PayoffTensor& u,
                       const MetaSolverOptions& options) {
  if (name == "uniform") return MetaSolution::Independent(MssUniform(u));
  if (name == "prd")
    return MetaSolution::Independent(MssPrd(u, options.solver));
  if (name == "rm") {
    return MetaSolution::Independent(MssRegretMatching(u, options.solver));
  }
  if (name == "max_welfare") return MetaSolution::Joint(MssMaxWelfare(u));
  if (name == "nbs_pga") return NbsPga(u, options.nbs).solution;
  if (name == "nbs_emda") return NbsEmda(u, options.nbs).solution;
  if (name == "nbs_pga_independent") {
    return NbsPgaIndependent(u, options.nbs).solution;
  }
  if (name.rfind("max_", 0) == 0) {
    const auto last = name.rfind('_');
    const std::string objective = name.substr(4, last - 4);
    const std::string family = name.substr(last + 1);
    if ((family == "ce" || family == "cce") &&
        (objective == "gini" || objective == "nbs" || objective == "welfare" ||
         objective == "entropy")) {
      ConstrainedProgram prog = options.program;
      prog.objective = objective == "nbs" ? ConcaveObjective::kLogNashProduct
                                          : ParseConcaveObjective(objective);
      prog.family = ParseEquilibriumFamily(family);
      if (!prog.d && options.nbs.d) prog.d = options.nbs.d;
      return MetaSolution::Joint(SolveConcaveOverPolytope(u, prog).device);
    }
  }
  Fail(ErrorCode::kInvalidArgument, "unknown meta-solver '", name, "'");
}

MetaSolverOptions MetaSolverOptionsFromJson(const nlohmann::json& j) {
  MetaSolverOptions o;
  if (j.is_null()) return o;
  if (!j.is_object()) {
    Fail(ErrorCode::kInvalidArgument, "solver options must be a JSON object");
  }
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "gamma") {
        o.solver.gamma = value.get<double>();
      } else if (key == "prd_step") {
        o.solver.prd_step = value.get<double>();
      } else if (key == "prd_iterations") {
        o.solver.prd_iterations = value.get<int>();
      } else if (key == "rm_iterations") {
        o.solver.rm_iterations = value.get<int>();
      } else if (key == "seed") {
        o.solver.seed = value.get<std::uint64_t>();
      } else if (key == "nbs_iterations") {
        o.nbs.iterations = value.get<int>();
      } else if (key == "kappa") {
        o.nbs.kappa = value.get<double>();
      } else if (key == "d") {
        o.nbs.d = value.get<std::vector<double>>();
        o.program.d = o.nbs.d;
      } else if (key == "entropy_weight") {
        o.program.entropy_weight = value.get<double>();
      } else if (key == "tolerance") {
        o.program.tolerance = value.get<double>();
      } else if (key == "max_outer") {
        o.program.max_outer = value.get<int>();
      } else if (key == "max_inner") {
        o.program.max_inner = value.get<int>();
      } else {
        Fail(ErrorCode::kInvalidArgument, "unknown solver option '", key, "'");
      }
    } catch (const nlohmann::json::exception& e) {
      Fail(ErrorCode::kInvalidArgument, "solver option '", key,
           "': ", e.what());
    }
  }
  o.solver.Validate();
  o.nbs.Validate();
  o.program.Validate();
  return o;
}

}  // namespace sgpsro
