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

#ifndef SGPSRO_CORE_RANDOM_H_
#define SGPSRO_CORE_RANDOM_H_

#include <cstdint>
#include <random>
#include <span>

#include "sgpsro/core/types.h"

namespace sgpsro {

using Rng = std::mt19937_64;

// Uniform double in [0, 1).
double Uniform01(Rng& rng);

// Samples an index proportionally to `weights` (need not be normalized).
// Consumes exactly one draw from `rng` regardless of the support size, so
// two calls over weight vectors that put all mass on the same index consume
// the generator identically.
int SampleIndex(std::span<const double> weights, Rng& rng);

Action SampleAction(const ActionsAndProbs& policy, Rng& rng);

// Derives an independent stream from a base seed and a label; used to give
// every worker, episode, or entry its own reproducible generator.
std::uint64_t DeriveSeed(std::uint64_t base, std::uint64_t label);

}  // namespace sgpsro

#endif  // SGPSRO_CORE_RANDOM_H_
