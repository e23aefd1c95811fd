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

#include "sgpsro/solvers/projection.h"

#include <algorithm>
#include <cmath>
#include <functional>

#include "sgpsro/core/error.h"

namespace sgpsro {
namespace {

// Projection onto {x >= 0, sum x = radius}.
std::vector<double> ProjectScaledSimplex(const std::vector<double>& y,
                                         double radius) {
  const size_t n = y.size();
  std::vector<double> out(n, 0.0);
  if (n == 0) return out;
  if (radius <= 0.0) return out;
  std::vector<double> sorted = y;
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  double cumulative = 0.0, theta = 0.0;
  for (size_t k = 0; k < n; ++k) {
    cumulative += sorted[k];
    const double t = (cumulative - radius) / static_cast<double>(k + 1);
    if (k + 1 == n || sorted[k + 1] <= t) {
      theta = t;
      break;
    }
  }
  double total = 0.0;
  for (size_t k = 0; k < n; ++k) {
    out[k] = std::max(0.0, y[k] - theta);
    total += out[k];
  }
  // Renormalize away rounding so the result sums to radius exactly enough.
  if (total > 0.0) {
    for (double& x : out) x *= radius / total;
  }
  return out;
}

}  // namespace

std::vector<double> ProjectSimplex(const std::vector<double>& y) {
  for (double v : y) {
    if (!std::isfinite(v)) {
      Fail(ErrorCode::kInvalidArgument,
           "simplex projection of non-finite input");
    }
  }
  return ProjectScaledSimplex(y, 1.0);
}

std::vector<double> ProjectTruncatedSimplex(const std::vector<double>& y,
                                            double floor) {
  const double dim = static_cast<double>(y.size());
  if (floor < 0.0 || floor * dim > 1.0 + 1e-12) {
    Fail(ErrorCode::kInvalidArgument, "truncated simplex floor ", floor,
         " infeasible in dimension ", y.size());
  }
  std::vector<double> shifted(y.size());
  for (size_t k = 0; k < y.size(); ++k) {
    if (!std::isfinite(y[k])) {
      Fail(ErrorCode::kInvalidArgument,
           "simplex projection of non-finite input");
    }
    shifted[k] = y[k] - floor;
  }
  std::vector<double> out =
      ProjectScaledSimplex(shifted, std::max(0.0, 1.0 - floor * dim));
  for (double& x : out) x += floor;
  return out;
}

}  // namespace sgpsro
