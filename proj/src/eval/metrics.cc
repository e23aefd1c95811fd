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

#include "sgpsro/eval/metrics.h"

#include <algorithm>
#include <cmath>

#include "sgpsro/belief/posterior.h"
#include "sgpsro/core/error.h"
#include "sgpsro/oracles/exact_br.h"
#include "sgpsro/policy/evaluate.h"

namespace sgpsro {
namespace {

constexpr double kGeomEps = 1e-12;

double Cross(const Point2& o, const Point2& a, const Point2& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

double SegmentDistance(const Point2& p, const Point2& a, const Point2& b) {
  const double dx = b[0] - a[0], dy = b[1] - a[1];
  const double len2 = dx * dx + dy * dy;
  double t = 0.0;
  if (len2 > 0.0) {
    t = ((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / len2;
    t = std::clamp(t, 0.0, 1.0);
  }
  const double x = a[0] + t * dx - p[0], y = a[1] + t * dy - p[1];
  return std::sqrt(x * x + y * y);
}

// Counter-clockwise hull without collinear points (Andrew's monotone chain).
std::vector<Point2> Hull(std::vector<Point2> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Point2> h(2 * pts.size());
  size_t k = 0;
  for (size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && Cross(h[k - 2], h[k - 1], pts[i]) <= kGeomEps) --k;
    h[k++] = pts[i];
  }
  for (size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
    while (k >= t && Cross(h[k - 2], h[k - 1], pts[i - 1]) <= kGeomEps) --k;
    h[k++] = pts[i - 1];
  }
  h.resize(k - 1);
  return h;
}

std::vector<Point2> ParetoSubset(const std::vector<Point2>& pts) {
  std::vector<Point2> out;
  for (const auto& p : pts) {
    bool dominated = false;
    for (const auto& q : pts) {
      if (q[0] >= p[0] && q[1] >= p[1] && (q[0] > p[0] || q[1] > p[1])) {
        dominated = true;
        break;
      }
    }
    if (!dominated) out.push_back(p);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

NashConvResult NashConvExtensive(const Game& game,
                                 const std::vector<PolicyPtr>& profile,
                                 long node_budget) {
  const int n = game.NumPlayers();
  if (static_cast<int>(profile.size()) != n) {
    Fail(ErrorCode::kInvalidArgument, "profile has ", profile.size(),
         " policies for a ", n, "-player game");
  }
  NashConvResult r;
  r.values = ExpectedReturns(game, profile, node_budget);
  for (Player i = 0; i < n; ++i) {
    std::vector<PolicyPtr> others = profile;
    others[i] = nullptr;
    const double br =
        ExactBestResponse(game, i, PureMixture(others), node_budget).value;
    r.br_values.push_back(br);
    r.gains.push_back(std::max(0.0, br - r.values[i]));
    r.nashconv += r.gains.back();
  }
  return r;
}

WelfareNbs WelfareAndNbs(const std::vector<double>& means,
                         std::vector<double> d) {
  if (d.empty()) d.assign(means.size(), 0.0);
  if (d.size() != means.size()) {
    Fail(ErrorCode::kInvalidArgument, "disagreement point has ", d.size(),
         " entries for ", means.size(), " players");
  }
  WelfareNbs out;
  out.nbs = 1.0;
  for (size_t i = 0; i < means.size(); ++i) {
    out.welfare += means[i];
    out.nbs *= means[i] - d[i];
  }
  return out;
}

WelfareNbs WelfareAndNbsFromReturns(
    const std::vector<std::vector<double>>& returns, std::vector<double> d) {
  if (returns.empty()) {
    Fail(ErrorCode::kInvalidArgument, "no returns to average");
  }
  std::vector<double> means(returns.front().size(), 0.0);
  for (const auto& r : returns) {
    if (r.size() != means.size()) {
      Fail(ErrorCode::kInvalidArgument, "ragged returns stream");
    }
    for (size_t i = 0; i < r.size(); ++i) means[i] += r[i];
  }
  for (double& m : means) m /= returns.size();
  return WelfareAndNbs(means, std::move(d));
}

std::vector<std::array<Point2, 2>> ParetoFaces(
    const std::vector<Point2>& outcomes) {
  if (outcomes.empty()) {
    Fail(ErrorCode::kInvalidArgument, "outcome set is empty");
  }
  for (const auto& p : outcomes) {
    if (!std::isfinite(p[0]) || !std::isfinite(p[1])) {
      Fail(ErrorCode::kInvalidArgument, "outcome coordinates must be finite");
    }
  }
  std::vector<std::array<Point2, 2>> faces;
  const auto hull = Hull(outcomes);
  if (hull.size() >= 3) {
    for (size_t i = 0; i < hull.size(); ++i) {
      const Point2& a = hull[i];
      const Point2& b = hull[(i + 1) % hull.size()];
      // Counter-clockwise order: the outward normal of a->b is (dy, -dx).
      const double nx = b[1] - a[1], ny = -(b[0] - a[0]);
      if (nx >= -kGeomEps && ny >= -kGeomEps) faces.push_back({a, b});
    }
    if (!faces.empty()) return faces;
  }
  const auto front = ParetoSubset(outcomes);
  if (front.size() == 1) return {{front[0], front[0]}};
  for (size_t i = 0; i + 1 < front.size(); ++i) {
    faces.push_back({front[i], front[i + 1]});
  }
  return faces;
}

double ParetoDistance(const std::vector<Point2>& outcomes,
                      const Point2& point) {
  double best = INFINITY;
  for (const auto& f : ParetoFaces(outcomes)) {
    best = std::min(best, SegmentDistance(point, f[0], f[1]));
  }
  return best;
}

double ParetoGap(const std::vector<Point2>& outcomes,
                 const std::vector<Point2>& points) {
  if (points.empty()) {
    Fail(ErrorCode::kInvalidArgument, "no points to evaluate");
  }
  const auto faces = ParetoFaces(outcomes);
  double total = 0.0;
  for (const auto& p : points) {
    double best = INFINITY;
    for (const auto& f : faces) {
      best = std::min(best, SegmentDistance(p, f[0], f[1]));
    }
    total += best;
  }
  return total / points.size();
}

}  // namespace sgpsro
