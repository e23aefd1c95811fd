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

#include "sgpsro/oracles/oracle.h"

#include <algorithm>

#include "sgpsro/core/error.h"
#include "sgpsro/oracles/abr.h"
#include "sgpsro/oracles/exact_br.h"
#include "sgpsro/oracles/tabular_q.h"

namespace sgpsro {
namespace {

long NodeBudget(const nlohmann::json& params) {
  long budget = 50'000'000;
  for (const auto& [key, value] : params.items()) {
    if (key == "node_budget") {
      budget = value.get<long>();
    } else {
      Fail(ErrorCode::kInvalidArgument, "unknown exact oracle option '", key,
           "'");
    }
  }
  if (budget < 1) Fail(ErrorCode::kInvalidArgument, "node_budget must be >= 1");
  return budget;
}

}  // namespace

const std::vector<std::string>& KnownOracles() {
  static const std::vector<std::string> kNames = {"exact", "tabular_q", "abr"};
  return kNames;
}

void OracleSpec::Validate() const {
  const auto& names = KnownOracles();
  if (std::find(names.begin(), names.end(), kind) == names.end()) {
    Fail(ErrorCode::kInvalidArgument, "unknown oracle '", kind,
         "' (expected exact, tabular_q or abr)");
  }
  if (!params.is_object() && !params.is_null()) {
    Fail(ErrorCode::kInvalidArgument, "oracle params must be a JSON object");
  }
  if (kind == "exact") {
    NodeBudget(params);
  } else if (kind == "tabular_q") {
    TabularQConfig::FromJson(params);
  } else {
    AbrConfig::FromJson(params);
  }
}

nlohmann::json OracleSpec::ToJson() const {
  return {{"kind", kind}, {"params", params}};
}

OracleSpec OracleSpec::FromJson(const nlohmann::json& j) {
  OracleSpec s;
  if (j.is_string()) {
    s.kind = j.get<std::string>();
  } else {
    s.kind = j.at("kind").get<std::string>();
    if (j.contains("params")) s.params = j.at("params");
  }
  s.Validate();
  return s;
}

OracleOutput ComputeResponse(const OracleSpec& spec,
                             std::shared_ptr<const Game> game, Player player,
                             const OpponentMixture& mixture,
                             std::uint64_t seed) {
  spec.Validate();
  OracleOutput out;
  if (spec.kind == "exact") {
    const auto br =
        ExactBestResponse(*game, player, mixture, NodeBudget(spec.params));
    out.policy = br.policy;
    out.summary = {{"oracle", "exact"}, {"value", br.value}};
  } else if (spec.kind == "tabular_q") {
    TabularQConfig cfg = TabularQConfig::FromJson(spec.params);
    cfg.seed = seed;
    TabularQLearner learner(game, player, mixture, cfg);
    learner.Train();
    out.policy = learner.GreedyPolicy();
    out.summary = {{"oracle", "tabular_q"},
                   {"episodes", learner.episodes_done()},
                   {"states", learner.num_states()}};
  } else {
    AbrConfig cfg = AbrConfig::FromJson(spec.params);
    cfg.seed = seed;
    AbrTrainer trainer(game, player, mixture, cfg);
    trainer.Train();
    out.policy = trainer.FinalPolicy();
    out.summary = {{"oracle", "abr"},
                   {"episodes", trainer.episodes_done()},
                   {"decisions", trainer.decisions()},
                   {"value_entries", trainer.learners().v->size()}};
  }
  return out;
}

}  // namespace sgpsro
