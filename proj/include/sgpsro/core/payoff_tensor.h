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

#ifndef SGPSRO_CORE_PAYOFF_TENSOR_H_
#define SGPSRO_CORE_PAYOFF_TENSOR_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace sgpsro {

// Dense n-player payoff tensor. Joint pure strategies are laid out row-major
// with the last player varying fastest; each cell stores one utility per
// player.
class PayoffTensor {
 public:
  PayoffTensor() = default;
  explicit PayoffTensor(std::vector<int> shape);
  PayoffTensor(std::vector<int> shape, std::vector<double> values);

  int num_players() const { return static_cast<int>(shape_.size()); }
  const std::vector<int>& shape() const { return shape_; }
  int num_cells() const { return num_cells_; }

  // Flat index <-> joint strategy.
  int Flatten(const std::vector<int>& joint) const;
  std::vector<int> Unflatten(int flat) const;

  double At(int flat, int player) const {
    return values_[flat * num_players() + player];
  }
  double& At(int flat, int player) {
    return values_[flat * num_players() + player];
  }
  double At(const std::vector<int>& joint, int player) const {
    return At(Flatten(joint), player);
  }

  const std::vector<double>& values() const { return values_; }

  double MinValue() const;
  double MaxValue() const;
  double MaxAbsValue() const;

  // Copy with the strategy set of `player` grown to `new_size`; new cells are
  // zero.
  PayoffTensor Extended(const std::vector<int>& new_shape) const;

  // Text format:
  //   tensor v1
  //   players <n>
  //   shape <a_1> ... <a_n>
  //   <n values> per line, one line per joint strategy in flat order
  std::string Serialize() const;
  static PayoffTensor Parse(const std::string& text);
  static PayoffTensor ReadFile(const std::string& path);
  void WriteFile(const std::string& path) const;

 private:
  std::vector<int> shape_;
  std::vector<int> strides_;
  int num_cells_ = 0;
  std::vector<double> values_;
};

// Named two-player benchmark games.
PayoffTensor ChickenTensor();           // actions C, S
PayoffTensor BattleOfSexesTensor();     // actions B, S
PayoffTensor MatchingPenniesTensor();   // actions H, T
PayoffTensor PrisonersDilemmaTensor();  // actions C, D

}  // namespace sgpsro

#endif  // SGPSRO_CORE_PAYOFF_TENSOR_H_
