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

#ifndef SGPSRO_ORACLES_ORACLE_H_
#define SGPSRO_ORACLES_ORACLE_H_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "sgpsro/belief/posterior.h"
#include "sgpsro/game/game.h"
#include "sgpsro/policy/policy.h"

namespace sgpsro {

// A response oracle by name ("exact", "tabular_q", "abr") with its options
// as JSON (ignored by "exact" except for "node_budget").
struct OracleSpec {
  std::string kind = "exact";
  nlohmann::json params = nlohmann::json::object();

  void Validate() const;
  nlohmann::json ToJson() const;
  static OracleSpec FromJson(const nlohmann::json& j);
};

const std::vector<std::string>& KnownOracles();

struct OracleOutput {
  PolicyPtr policy;
  // Short human-readable description, e.g. the exact BR value.
  nlohmann::json summary;
};

// Response of `player` to the mixture. `seed` overrides any seed in params
// so the caller controls per-epoch streams.
OracleOutput ComputeResponse(const OracleSpec& spec,
                             std::shared_ptr<const Game> game, Player player,
                             const OpponentMixture& mixture,
                             std::uint64_t seed);

}  // namespace sgpsro

#endif  // SGPSRO_ORACLES_ORACLE_H_
