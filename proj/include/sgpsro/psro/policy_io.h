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

#ifndef SGPSRO_PSRO_POLICY_IO_H_
#define SGPSRO_PSRO_POLICY_IO_H_

#include <memory>

#include "json.hpp"
#include "sgpsro/belief/posterior.h"
#include "sgpsro/game/game.h"
#include "sgpsro/policy/policy.h"

namespace sgpsro {

// Reconstructs any policy kind written by ToJson(): the basic kinds plus the
// search-based oracle outputs. Catalog references go through
// `resolver.by_index`; inline opponents are loaded recursively. Throws
// kInvalidArgument for unknown kinds.
PolicyPtr PolicyFromJson(const nlohmann::json& j,
                         std::shared_ptr<const Game> game,
                         PolicyResolver resolver = {});

}  // namespace sgpsro

#endif  // SGPSRO_PSRO_POLICY_IO_H_
