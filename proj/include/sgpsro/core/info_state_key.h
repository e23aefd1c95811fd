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

#ifndef SGPSRO_CORE_INFO_STATE_KEY_H_
#define SGPSRO_CORE_INFO_STATE_KEY_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "sgpsro/core/types.h"

namespace sgpsro {

// Identifies the information state of `player`. The encoding is a
// length-prefixed concatenation of (player id, private observation, public
// action list), so it is stable across processes and can be persisted.
class InfoStateKey {
 public:
  InfoStateKey() = default;
  InfoStateKey(Player player, std::string encoding)
      : player_(player), encoding_(std::move(encoding)) {}

  Player player() const { return player_; }
  const std::string& encoding() const { return encoding_; }

  // Printable form "<player>|<encoding>"; round-trips through Parse.
  std::string ToString() const;
  static InfoStateKey Parse(std::string_view text);

  // FNV-1a of ToString(); identical across processes and platforms.
  std::uint64_t StableHash() const;

  bool operator==(const InfoStateKey&) const = default;
  auto operator<=>(const InfoStateKey&) const = default;

 private:
  Player player_ = 0;
  std::string encoding_;
};

// Builds canonical encodings. Each field is written as "<len>:<bytes>" so
// concatenations cannot collide.
class KeyBuilder {
 public:
  explicit KeyBuilder(Player player) : player_(player) {}

  KeyBuilder& Field(std::string_view value);
  KeyBuilder& Ints(const std::vector<int>& values);
  KeyBuilder& Actions(const std::vector<Action>& actions);

  InfoStateKey Build() const { return InfoStateKey(player_, out_); }

 private:
  Player player_;
  std::string out_;
};

struct InfoStateKeyHash {
  std::size_t operator()(const InfoStateKey& key) const {
    return std::hash<std::string>()(key.encoding()) ^
           (static_cast<std::size_t>(key.player()) * 0x9e3779b97f4a7c15ULL);
  }
};

}  // namespace sgpsro

#endif  // SGPSRO_CORE_INFO_STATE_KEY_H_
