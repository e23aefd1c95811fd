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

#ifndef SGPSRO_CORE_FIFO_BUFFER_H_
#define SGPSRO_CORE_FIFO_BUFFER_H_

#include <cstdint>
#include <deque>
#include <vector>

#include "sgpsro/core/error.h"
#include "sgpsro/core/random.h"

namespace sgpsro {

inline constexpr int kDefaultBufferCapacity = 1 << 16;

// Bounded buffer with first-in-first-out eviction. Every element gets a
// sequence number equal to the number of elements added before it, so
// readers can track what was added or evicted since they last looked.
template <typename T>
class FifoBuffer {
 public:
  explicit FifoBuffer(int capacity = kDefaultBufferCapacity)
      : capacity_(capacity) {
    if (capacity < 1) {
      Fail(ErrorCode::kInvalidArgument, "buffer capacity must be >= 1, got ",
           capacity);
    }
  }

  void Add(T item) {
    if (static_cast<int>(items_.size()) == capacity_) items_.pop_front();
    items_.push_back(std::move(item));
    ++total_added_;
  }

  int size() const { return static_cast<int>(items_.size()); }
  bool empty() const { return items_.empty(); }
  int capacity() const { return capacity_; }
  std::int64_t total_added() const { return total_added_; }
  // Sequence number of items()[0].
  std::int64_t first_sequence() const {
    return total_added_ - static_cast<std::int64_t>(items_.size());
  }

  const T& operator[](int i) const { return items_[i]; }
  const std::deque<T>& items() const { return items_; }

  // `batch` indices drawn uniformly with replacement; empty if the buffer is.
  std::vector<int> SampleIndices(int batch, Rng& rng) const {
    std::vector<int> out;
    if (items_.empty()) return out;
    std::uniform_int_distribution<int> pick(0, size() - 1);
    out.reserve(batch);
    for (int b = 0; b < batch; ++b) out.push_back(pick(rng));
    return out;
  }

  void Clear() { items_.clear(); }

 private:
  int capacity_;
  std::deque<T> items_;
  std::int64_t total_added_ = 0;
};

}  // namespace sgpsro

#endif  // SGPSRO_CORE_FIFO_BUFFER_H_
