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

#include <charconv>
#include <cmath>

#include "sgpsro/core/error.h"
#include "sgpsro/core/info_state_key.h"
#include "sgpsro/core/random.h"
#include "sgpsro/core/types.h"

namespace sgpsro {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return "invalid_argument";
    case ErrorCode::kFailedPrecondition:
      return "failed_precondition";
    case ErrorCode::kNotFound:
      return "not_found";
    case ErrorCode::kConflict:
      return "conflict";
    case ErrorCode::kResourceExhausted:
      return "resource_exhausted";
    case ErrorCode::kNotConverged:
      return "not_converged";
    case ErrorCode::kIo:
      return "io";
    case ErrorCode::kInternal:
      return "internal";
  }
  return "unknown";
}

double GetProb(const ActionsAndProbs& policy, Action action) {
  for (const auto& [a, p] : policy) {
    if (a == action) return p;
  }
  return 0.0;
}

ActionsAndProbs UniformOver(const std::vector<Action>& actions) {
  ActionsAndProbs out;
  out.reserve(actions.size());
  const double p = 1.0 / static_cast<double>(actions.size());
  for (Action a : actions) out.emplace_back(a, p);
  return out;
}

double TotalMass(const ActionsAndProbs& policy) {
  double total = 0.0;
  for (const auto& [a, p] : policy) total += p;
  return total;
}

double Uniform01(Rng& rng) {
  // 53 random bits mapped to [0, 1).
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

int SampleIndex(std::span<const double> weights, Rng& rng) {
  double total = 0.0;
  for (double w : weights) total += w;
  if (weights.empty() || !(total > 0.0)) {
    Fail(ErrorCode::kInvalidArgument,
         "SampleIndex: weights must have positive total mass");
  }
  const double target = Uniform01(rng) * total;
  double cumulative = 0.0;
  int last_positive = -1;
  for (int i = 0; i < static_cast<int>(weights.size()); ++i) {
    if (weights[i] <= 0.0) continue;
    last_positive = i;
    cumulative += weights[i];
    if (target < cumulative) return i;
  }
  return last_positive;
}

Action SampleAction(const ActionsAndProbs& policy, Rng& rng) {
  std::vector<double> weights;
  weights.reserve(policy.size());
  for (const auto& [a, p] : policy) weights.push_back(p);
  return policy[SampleIndex(weights, rng)].first;
}

std::uint64_t DeriveSeed(std::uint64_t base, std::uint64_t label) {
  // splitmix64 over the combined value.
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (label + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::string InfoStateKey::ToString() const {
  return std::to_string(player_) + "|" + encoding_;
}

std::uint64_t InfoStateKey::StableHash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : ToString()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

InfoStateKey InfoStateKey::Parse(std::string_view text) {
  const auto bar = text.find('|');
  if (bar == std::string_view::npos) {
    Fail(ErrorCode::kInvalidArgument, "malformed info state key: ", text);
  }
  int player = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + bar, player);
  if (ec != std::errc() || ptr != text.data() + bar) {
    Fail(ErrorCode::kInvalidArgument,
         "malformed info state key player: ", text);
  }
  return InfoStateKey(player, std::string(text.substr(bar + 1)));
}

KeyBuilder& KeyBuilder::Field(std::string_view value) {
  out_ += std::to_string(value.size());
  out_ += ':';
  out_.append(value);
  return *this;
}

KeyBuilder& KeyBuilder::Ints(const std::vector<int>& values) {
  std::string joined;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) joined += ',';
    joined += std::to_string(values[i]);
  }
  return Field(joined);
}

KeyBuilder& KeyBuilder::Actions(const std::vector<Action>& actions) {
  std::string joined;
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (i) joined += ',';
    joined += std::to_string(actions[i]);
  }
  return Field(joined);
}

}  // namespace sgpsro
