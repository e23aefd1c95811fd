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

#ifndef SGPSRO_EVAL_METRICS_H_
#define SGPSRO_EVAL_METRICS_H_

#include <array>
#include <vector>

#include "sgpsro/game/game.h"
#include "sgpsro/policy/policy.h"

namespace sgpsro {

struct NashConvResult {
  double nashconv = 0.0;
  std::vector<double> values;     // u_i(pi)
  std::vector<double> br_values;  // u_i(BR_i, pi_{-i})
  std::vector<double> gains;      // br_values - values, clamped at 0
};

// sum_i [u_i(exact BR vs pi_{-i}) - u_i(pi)] for one policy per player.
// Throws kResourceExhausted when the game is too large to enumerate.
NashConvResult NashConvExtensive(const Game& game,
                                 const std::vector<PolicyPtr>& profile,
                                 long node_budget = 50'000'000);

struct WelfareNbs {
  double welfare = 0.0;
  double nbs = 0.0;
};

// SW = sum_i u_i and NBS = prod_i (u_i - d_i) of expected utilities; d
// defaults to zeros.
WelfareNbs WelfareAndNbs(const std::vector<double>& means,
                         std::vector<double> d = {});
// Same from a stream of per-episode return vectors.
WelfareNbs WelfareAndNbsFromReturns(
    const std::vector<std::vector<double>>& returns,
    std::vector<double> d = {});

using Point2 = std::array<double, 2>;

// Minimal l2 distance from `point` to the outer faces of the convex hull of
// `outcomes`, i.e. the hull edges whose outward normal has no negative
// component. Collinear sets use the segments between consecutive
// Pareto-optimal points; a single Pareto point is used as is.
double ParetoDistance(const std::vector<Point2>& outcomes, const Point2& point);

// Mean ParetoDistance over `points`. Throws if `outcomes` is empty or a
// coordinate is not finite.
double ParetoGap(const std::vector<Point2>& outcomes,
                 const std::vector<Point2>& points);

// The outer faces used above, as segments (a point is a zero-length one).
std::vector<std::array<Point2, 2>> ParetoFaces(
    const std::vector<Point2>& outcomes);

}  // namespace sgpsro

#endif  // SGPSRO_EVAL_METRICS_H_
