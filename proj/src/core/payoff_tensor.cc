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

#include "sgpsro/core/payoff_tensor.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "sgpsro/core/error.h"

namespace sgpsro {

PayoffTensor::PayoffTensor(std::vector<int> shape) : shape_(std::move(shape)) {
  if (shape_.size() < 2) {
    Fail(ErrorCode::kInvalidArgument, "payoff tensor needs >= 2 players");
  }
  strides_.assign(shape_.size(), 1);
  num_cells_ = 1;
  for (int p = static_cast<int>(shape_.size()) - 1; p >= 0; --p) {
    if (shape_[p] < 1) {
      Fail(ErrorCode::kInvalidArgument, "payoff tensor dimension ", p,
           " must be >= 1, got ", shape_[p]);
    }
    strides_[p] = num_cells_;
    num_cells_ *= shape_[p];
  }
  values_.assign(static_cast<size_t>(num_cells_) * shape_.size(), 0.0);
}

PayoffTensor::PayoffTensor(std::vector<int> shape, std::vector<double> values)
    : PayoffTensor(std::move(shape)) {
  if (values.size() != values_.size()) {
    Fail(ErrorCode::kInvalidArgument, "payoff tensor expects ", values_.size(),
         " values, got ", values.size());
  }
  for (double v : values) {
    if (!std::isfinite(v)) {
      Fail(ErrorCode::kInvalidArgument, "payoff tensor values must be finite");
    }
  }
  values_ = std::move(values);
}

int PayoffTensor::Flatten(const std::vector<int>& joint) const {
  if (joint.size() != shape_.size()) {
    Fail(ErrorCode::kInvalidArgument, "joint strategy has ", joint.size(),
         " entries, tensor has ", shape_.size(), " players");
  }
  int flat = 0;
  for (size_t p = 0; p < shape_.size(); ++p) {
    if (joint[p] < 0 || joint[p] >= shape_[p]) {
      Fail(ErrorCode::kInvalidArgument, "strategy ", joint[p],
           " out of range for player ", p);
    }
    flat += joint[p] * strides_[p];
  }
  return flat;
}

std::vector<int> PayoffTensor::Unflatten(int flat) const {
  std::vector<int> joint(shape_.size());
  for (size_t p = 0; p < shape_.size(); ++p) {
    joint[p] = flat / strides_[p];
    flat %= strides_[p];
  }
  return joint;
}

double PayoffTensor::MinValue() const {
  return *std::min_element(values_.begin(), values_.end());
}

double PayoffTensor::MaxValue() const {
  return *std::max_element(values_.begin(), values_.end());
}

double PayoffTensor::MaxAbsValue() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

PayoffTensor PayoffTensor::Extended(const std::vector<int>& new_shape) const {
  if (new_shape.size() != shape_.size()) {
    Fail(ErrorCode::kInvalidArgument, "Extended: player count mismatch");
  }
  for (size_t p = 0; p < shape_.size(); ++p) {
    if (new_shape[p] < shape_[p]) {
      Fail(ErrorCode::kInvalidArgument, "Extended: cannot shrink player ", p);
    }
  }
  PayoffTensor out(new_shape);
  for (int c = 0; c < num_cells_; ++c) {
    const int dst = out.Flatten(Unflatten(c));
    for (int p = 0; p < num_players(); ++p) out.At(dst, p) = At(c, p);
  }
  return out;
}

std::string PayoffTensor::Serialize() const {
  std::ostringstream out;
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  out << "tensor v1\nplayers " << num_players() << "\nshape";
  for (int s : shape_) out << ' ' << s;
  out << '\n';
  for (int c = 0; c < num_cells_; ++c) {
    for (int p = 0; p < num_players(); ++p) {
      if (p) out << ' ';
      out << At(c, p);
    }
    out << '\n';
  }
  return out.str();
}

PayoffTensor PayoffTensor::Parse(const std::string& text) {
  std::istringstream in(text);
  std::string word, version;
  if (!(in >> word >> version) || word != "tensor" || version != "v1") {
    Fail(ErrorCode::kInvalidArgument,
         "tensor text must start with 'tensor v1'");
  }
  int n = 0;
  if (!(in >> word >> n) || word != "players" || n < 2) {
    Fail(ErrorCode::kInvalidArgument, "tensor text: bad 'players' line");
  }
  if (!(in >> word) || word != "shape") {
    Fail(ErrorCode::kInvalidArgument, "tensor text: missing 'shape' line");
  }
  std::vector<int> shape(n);
  for (int p = 0; p < n; ++p) {
    if (!(in >> shape[p])) {
      Fail(ErrorCode::kInvalidArgument, "tensor text: short shape line");
    }
  }
  PayoffTensor probe(shape);
  std::vector<double> values(probe.values_.size());
  for (size_t k = 0; k < values.size(); ++k) {
    if (!(in >> values[k])) {
      Fail(ErrorCode::kInvalidArgument, "tensor text: expected ", values.size(),
           " values, found ", k);
    }
  }
  if (in >> word) {
    Fail(ErrorCode::kInvalidArgument, "tensor text: trailing content '", word,
         "'");
  }
  return PayoffTensor(std::move(shape), std::move(values));
}

PayoffTensor PayoffTensor::ReadFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kNotFound, "cannot open tensor file: ", path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return Parse(buffer.str());
}

void PayoffTensor::WriteFile(const std::string& path) const {
  std::ofstream out(path);
  if (!out) Fail(ErrorCode::kIo, "cannot write tensor file: ", path);
  out << Serialize();
}

PayoffTensor ChickenTensor() {
  return PayoffTensor({2, 2}, {-5, -5, 1, -1, -1, 1, -1, -1});
}

PayoffTensor BattleOfSexesTensor() {
  return PayoffTensor({2, 2}, {3, 2, 0, 0, 0, 0, 2, 3});
}

PayoffTensor MatchingPenniesTensor() {
  return PayoffTensor({2, 2}, {1, -1, -1, 1, -1, 1, 1, -1});
}

PayoffTensor PrisonersDilemmaTensor() {
  return PayoffTensor({2, 2}, {-1, -1, -3, 0, 0, -3, -2, -2});
}

}  // namespace sgpsro
