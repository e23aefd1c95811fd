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

#ifndef SGPSRO_SOLVERS_PROJECTION_H_
#define SGPSRO_SOLVERS_PROJECTION_H_

#include <vector>

namespace sgpsro {

// Euclidean projection onto the probability simplex (sort-based).
std::vector<double> ProjectSimplex(const std::vector<double>& y);

// Euclidean projection onto {x : x_k >= floor, sum_k x_k = 1}. Throws
// kInvalidArgument when floor * dim > 1.
std::vector<double> ProjectTruncatedSimplex(const std::vector<double>& y,
                                            double floor);

}  // namespace sgpsro

#endif  // SGPSRO_SOLVERS_PROJECTION_H_
