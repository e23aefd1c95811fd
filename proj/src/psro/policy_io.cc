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

#include "sgpsro/psro/policy_io.h"

#include <string>

#include "sgpsro/core/error.h"
#include "sgpsro/oracles/abr.h"

namespace sgpsro {

PolicyPtr PolicyFromJson(const nlohmann::json& j,
                         std::shared_ptr<const Game> game,
                         PolicyResolver resolver) {
  if (!j.is_object() || !j.contains("kind")) {
    Fail(ErrorCode::kInvalidArgument, "policy JSON needs a \"kind\"");
  }
  if (PolicyPtr p = BasicPolicyFromJson(j)) return p;
  if (!resolver.inline_policy) {
    resolver.inline_policy = [game, resolver](const nlohmann::json& inner) {
      return PolicyFromJson(inner, game, resolver);
    };
  }
  if (PolicyPtr p = AbrPolicyFromJson(j, game, resolver)) return p;
  Fail(ErrorCode::kInvalidArgument, "unknown policy kind '",
       j.at("kind").get<std::string>(), "'");
}

}  // namespace sgpsro
