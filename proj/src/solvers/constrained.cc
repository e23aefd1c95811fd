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

#include "sgpsro/solvers/constrained.h"

#include <algorithm>
#include <cmath>

#include "sgpsro/core/error.h"
#include "sgpsro/solvers/nbs.h"
#include "sgpsro/solvers/projection.h"

namespace sgpsro {
namespace {

// Sparse rows a_j with the constraint a_j^T mu <= 0, in payoff units
// divided by `scale`.
struct Constraints {
  std::vector<int> start{0};
  std::vector<int> cell;
  std::vector<double> coef;
  std::vector<int> player;
  std::vector<int> recommendation;  // -1 for CCE rows

  int size() const { return static_cast<int>(start.size()) - 1; }

  void AddRow(const std::vector<std::pair<int, double>>& entries, int p,
              int r) {
    bool binding = false;
    for (const auto& [c, a] : entries) binding |= a > 0.0;
    if (!binding) return;  // a <= 0 holds for every mu >= 0
    for (const auto& [c, a] : entries) {
      if (a == 0.0) continue;
      cell.push_back(c);
      coef.push_back(a);
    }
    start.push_back(static_cast<int>(cell.size()));
    player.push_back(p);
    recommendation.push_back(r);
  }

  void Apply(const std::vector<double>& mu, std::vector<double>& out) const {
    out.assign(size(), 0.0);
    for (int j = 0; j < size(); ++j) {
      double s = 0.0;
      for (int e = start[j]; e < start[j + 1]; ++e) s += coef[e] * mu[cell[e]];
      out[j] = s;
    }
  }
};

Constraints BuildConstraints(const PayoffTensor& u, EquilibriumFamily family,
                             double scale) {
  Constraints rows;
  const int n = u.num_players();
  std::vector<std::vector<int>> joints;
  for (int c = 0; c < u.num_cells(); ++c) joints.push_back(u.Unflatten(c));
  for (int i = 0; i < n; ++i) {
    const int size = u.shape()[i];
    for (int k = 0; k < size; ++k) {
      if (family == EquilibriumFamily::kCce) {
        std::vector<std::pair<int, double>> entries;
        for (int c = 0; c < u.num_cells(); ++c) {
          auto joint = joints[c];
          joint[i] = k;
          entries.push_back({c, (u.At(joint, i) - u.At(c, i)) / scale});
        }
        rows.AddRow(entries, i, -1);
      } else {
        for (int r = 0; r < size; ++r) {
          if (r == k) continue;
          std::vector<std::pair<int, double>> entries;
          for (int c = 0; c < u.num_cells(); ++c) {
            if (joints[c][i] != r) continue;
            auto joint = joints[c];
            joint[i] = k;
            entries.push_back({c, (u.At(joint, i) - u.At(c, i)) / scale});
          }
          rows.AddRow(entries, i, r);
        }
      }
    }
  }
  return rows;
}

constexpr double kSmoothing = 1e-6;

class Problem {
 public:
  Problem(const PayoffTensor& u, const ConstrainedProgram& prog,
          Constraints rows)
      : u_(u), prog_(prog), rows_(std::move(rows)) {
    weight_ = prog.EntropyWeight();
    if (prog.objective == ConcaveObjective::kEntropy) weight_ += 1.0;
    if (prog.objective == ConcaveObjective::kLogNashProduct) {
      d_ = prog.d ? *prog.d : DefaultDisagreement(u);
      if (static_cast<int>(d_.size()) != u.num_players()) {
        Fail(ErrorCode::kInvalidArgument,
             "need one disagreement value per player");
      }
    }
    lambda_.assign(rows_.size(), 0.0);
    rho_ = prog.initial_penalty;
  }

  // Objective to maximize, including the entropy term; -inf off-domain.
  // With `smoothed`, the entropy is -sum (m + e) log(m + e) for a small e so
  // its gradient stays bounded at the simplex boundary.
  double Objective(const std::vector<double>& mu, bool smoothed = true) const {
    double f = 0.0;
    switch (prog_.objective) {
      case ConcaveObjective::kGini:
        f = 1.0;
        for (double m : mu) f -= m * m;
        break;
      case ConcaveObjective::kLogNashProduct:
        f = LogNashProduct(u_, d_, mu);
        break;
      case ConcaveObjective::kWelfare:
        for (int c = 0; c < u_.num_cells(); ++c) {
          for (int i = 0; i < u_.num_players(); ++i) f += mu[c] * u_.At(c, i);
        }
        break;
      case ConcaveObjective::kEntropy:
        break;
    }
    if (weight_ > 0.0) {
      for (double m : mu) {
        if (smoothed) {
          f -= weight_ * ((m + kSmoothing) * std::log(m + kSmoothing) -
                          kSmoothing * std::log(kSmoothing));
        } else if (m > 0.0) {
          f -= weight_ * m * std::log(m);
        }
      }
    }
    return f;
  }

  void ObjectiveGradient(const std::vector<double>& mu,
                         std::vector<double>& g) const {
    g.assign(mu.size(), 0.0);
    switch (prog_.objective) {
      case ConcaveObjective::kGini:
        for (size_t c = 0; c < mu.size(); ++c) g[c] = -2.0 * mu[c];
        break;
      case ConcaveObjective::kLogNashProduct:
        g = LogNashProductGradient(u_, d_, mu);
        break;
      case ConcaveObjective::kWelfare:
        for (int c = 0; c < u_.num_cells(); ++c) {
          for (int i = 0; i < u_.num_players(); ++i) g[c] += u_.At(c, i);
        }
        break;
      case ConcaveObjective::kEntropy:
        break;
    }
    if (weight_ > 0.0) {
      for (size_t c = 0; c < mu.size(); ++c) {
        g[c] -= weight_ * (std::log(mu[c] + kSmoothing) + 1.0);
      }
    }
  }

  // Augmented Lagrangian (minimized) and its gradient.
  double Lagrangian(const std::vector<double>& mu) const {
    const double f = Objective(mu);
    if (!std::isfinite(f)) return INFINITY;
    std::vector<double> a;
    rows_.Apply(mu, a);
    double pen = 0.0;
    for (int j = 0; j < rows_.size(); ++j) {
      const double v = std::max(0.0, a[j] + lambda_[j] / rho_);
      pen += v * v;
    }
    return -f + 0.5 * rho_ * pen;
  }

  void LagrangianGradient(const std::vector<double>& mu,
                          std::vector<double>& g) const {
    ObjectiveGradient(mu, g);
    for (double& x : g) x = -x;
    std::vector<double> a;
    rows_.Apply(mu, a);
    for (int j = 0; j < rows_.size(); ++j) {
      const double m = std::max(0.0, lambda_[j] + rho_ * a[j]);
      if (m == 0.0) continue;
      for (int e = rows_.start[j]; e < rows_.start[j + 1]; ++e) {
        g[rows_.cell[e]] += m * rows_.coef[e];
      }
    }
  }

  std::vector<double> ProjectOnSupport(const std::vector<double>& y) const {
    std::vector<double> sub;
    for (size_t c = 0; c < y.size(); ++c) {
      if (support_[c]) sub.push_back(y[c]);
    }
    sub = ProjectSimplex(sub);
    std::vector<double> out(y.size(), 0.0);
    size_t k = 0;
    for (size_t c = 0; c < y.size(); ++c) {
      if (support_[c]) out[c] = sub[k++];
    }
    return out;
  }

  // Accelerated projected gradient with backtracking and adaptive restart.
  double InnerEuclidean(std::vector<double>& mu, double tol, int max_iter,
                        int& iters) {
    std::vector<double> g, y = mu, prev = mu, p;
    double t = 1.0;
    double residual = INFINITY;
    double lips = 1.0 / eta_;
    double f_mu = Lagrangian(mu);
    for (int it = 0; it < max_iter; ++it, ++iters) {
      double fy = Lagrangian(y);
      if (!std::isfinite(fy)) {
        y = mu;
        t = 1.0;
        fy = f_mu;
      }
      LagrangianGradient(y, g);
      double fp = INFINITY;
      for (int tries = 0; tries < 80; ++tries) {
        std::vector<double> step(y.size());
        for (size_t c = 0; c < y.size(); ++c) step[c] = y[c] - g[c] / lips;
        p = ProjectOnSupport(step);
        double lin = 0.0, sq = 0.0;
        for (size_t c = 0; c < y.size(); ++c) {
          lin += g[c] * (p[c] - y[c]);
          sq += (p[c] - y[c]) * (p[c] - y[c]);
        }
        fp = Lagrangian(p);
        if (fp <= fy + lin + 0.5 * lips * sq + 1e-14 * std::abs(fy)) {
          residual = lips * std::sqrt(sq);
          break;
        }
        lips *= 2.0;
      }
      if (fp > f_mu) {
        // Momentum overshot; restart from the last iterate.
        if (y != mu) {
          y = mu;
          t = 1.0;
          continue;
        }
        break;
      }
      prev = mu;
      mu = p;
      f_mu = fp;
      const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      for (size_t c = 0; c < y.size(); ++c) {
        y[c] = mu[c] + (t - 1.0) / t_next * (mu[c] - prev[c]);
      }
      t = t_next;
      if (residual <= tol) break;
      lips *= 0.95;
    }
    eta_ = 1.0 / lips;
    return residual;
  }

  struct OuterStats {
    int outer = 0;
    int inner = 0;
    double violation = INFINITY;
  };

  OuterStats Run(std::vector<double>& mu, double feasibility_target) {
    OuterStats stats;
    if (support_.empty()) support_.assign(mu.size(), true);
    double prev_violation = INFINITY;
    std::vector<double> a;
    for (int k = 0; k < prog_.max_outer; ++k, ++stats.outer) {
      const double tol = std::max(1e-12, 1e-3 * std::pow(0.3, k));
      const double residual =
          InnerEuclidean(mu, tol, prog_.max_inner, stats.inner);
      rows_.Apply(mu, a);
      double violation = 0.0, dual_change = 0.0, dual_size = 1.0;
      for (int j = 0; j < rows_.size(); ++j) {
        violation = std::max(violation, a[j]);
        const double next = std::max(0.0, lambda_[j] + rho_ * a[j]);
        dual_change = std::max(dual_change, std::abs(next - lambda_[j]));
        lambda_[j] = next;
        dual_size = std::max(dual_size, next);
      }
      stats.violation = violation;
      if (violation <= feasibility_target && residual <= 1e-7 &&
          dual_change <= 1e-7 * dual_size && k >= 2) {
        ++stats.outer;
        break;
      }
      if (violation > 0.25 * prev_violation) {
        rho_ = std::min(rho_ * prog_.penalty_growth, 1e10);
      }
      prev_violation = violation;
    }
    return stats;
  }

  void set_support(std::vector<bool> s) { support_ = std::move(s); }
  void set_eta(double e) { eta_ = e; }
  const Constraints& rows() const { return rows_; }

 private:
  const PayoffTensor& u_;
  const ConstrainedProgram& prog_;
  Constraints rows_;
  std::vector<double> d_;
  double weight_ = 0.0;
  std::vector<double> lambda_;
  double rho_ = 10.0;
  double eta_ = 1.0;
  std::vector<bool> support_;
};

void Renormalize(std::vector<double>& mu) {
  double total = 0.0;
  for (double m : mu) total += m;
  for (double& m : mu) m /= total;
}

}  // namespace

const char* ConcaveObjectiveName(ConcaveObjective o) {
  switch (o) {
    case ConcaveObjective::kGini:
      return "gini";
    case ConcaveObjective::kLogNashProduct:
      return "log_nash_product";
    case ConcaveObjective::kWelfare:
      return "welfare";
    case ConcaveObjective::kEntropy:
      return "entropy";
  }
  return "?";
}

ConcaveObjective ParseConcaveObjective(const std::string& name) {
  for (auto o : {ConcaveObjective::kGini, ConcaveObjective::kLogNashProduct,
                 ConcaveObjective::kWelfare, ConcaveObjective::kEntropy}) {
    if (name == ConcaveObjectiveName(o)) return o;
  }
  Fail(ErrorCode::kInvalidArgument, "unknown objective '", name, "'");
}

const char* EquilibriumFamilyName(EquilibriumFamily f) {
  return f == EquilibriumFamily::kCe ? "ce" : "cce";
}

EquilibriumFamily ParseEquilibriumFamily(const std::string& name) {
  if (name == "ce") return EquilibriumFamily::kCe;
  if (name == "cce") return EquilibriumFamily::kCce;
  Fail(ErrorCode::kInvalidArgument, "unknown equilibrium family '", name, "'");
}

double ConstrainedProgram::EntropyWeight() const {
  if (entropy_weight) return *entropy_weight;
  return objective == ConcaveObjective::kLogNashProduct ? 1e-3 : 0.0;
}

void ConstrainedProgram::Validate() const {
  if (!(tolerance > 0.0)) {
    Fail(ErrorCode::kInvalidArgument, "tolerance must be positive");
  }
  if (!(EntropyWeight() >= 0.0)) {
    Fail(ErrorCode::kInvalidArgument, "entropy weight must be >= 0");
  }
  if (max_outer < 1 || max_inner < 1 || !(initial_step > 0.0) ||
      !(initial_penalty > 0.0) || !(penalty_growth >= 1.0)) {
    Fail(ErrorCode::kInvalidArgument, "bad augmented-Lagrangian schedule");
  }
}

ConstrainedProgram ReferenceSchedule(const ConstrainedProgram& prog) {
  ConstrainedProgram ref = prog;
  ref.max_outer *= 2;
  ref.max_inner *= 2;
  ref.initial_step *= 0.5;
  return ref;
}

double ConcaveObjectiveValue(const PayoffTensor& u,
                             const ConstrainedProgram& prog,
                             const std::vector<double>& mu) {
  Problem problem(u, prog, Constraints{});
  return problem.Objective(mu, /*smoothed=*/false);
}

ConstrainedResult SolveConcaveOverPolytope(const PayoffTensor& u,
                                           const ConstrainedProgram& prog) {
  prog.Validate();
  if (u.num_cells() < 1) Fail(ErrorCode::kFailedPrecondition, "empty tensor");
  for (double v : u.values()) {
    if (!std::isfinite(v)) {
      Fail(ErrorCode::kFailedPrecondition, "payoff tensor has missing entries");
    }
  }
  const double scale = std::max(u.MaxAbsValue(), 1e-12);
  Problem problem(u, prog, BuildConstraints(u, prog.family, scale));
  problem.set_eta(prog.initial_step);
  const int cells = u.num_cells();
  std::vector<double> mu(cells, 1.0 / cells);
  const double target = 1e-4 * prog.tolerance / scale;

  ConstrainedResult result;
  auto audit = [&](const std::vector<double>& m) {
    JointDevice device{m};
    result.max_cce_gain = MaxCceGain(u, device);
    result.max_ce_gain = prog.family == EquilibriumFamily::kCe
                             ? MaxCeGain(u, device)
                             : result.max_cce_gain;
    return prog.family == EquilibriumFamily::kCe ? result.max_ce_gain
                                                 : result.max_cce_gain;
  };

  auto stats = problem.Run(mu, target);
  result.outer_iterations += stats.outer;
  result.inner_iterations += stats.inner;
  std::vector<bool> support(cells, true);
  for (int c = 0; c < cells; ++c) {
    if (mu[c] < 1e-13) {
      mu[c] = 0.0;
      support[c] = false;
    }
  }
  Renormalize(mu);
  double gain = audit(mu);
  // Repair: a recommendation with tiny probability can carry a large
  // conditional gain; drop it and re-solve on the remaining support.
  for (int round = 0; round < 4 && gain > prog.tolerance; ++round) {
    if (prog.family == EquilibriumFamily::kCe) {
      const CeGains gains = CeDeviationGains(u, JointDevice{mu});
      const MixedProfile marginals = DeviceMarginals(u, JointDevice{mu});
      for (int i = 0; i < u.num_players(); ++i) {
        for (int r = 0; r < u.shape()[i]; ++r) {
          if (gains.recommendation_zero[i][r]) continue;
          const double worst = *std::max_element(
              gains.conditional[i][r].begin(), gains.conditional[i][r].end());
          if (worst > prog.tolerance && marginals.sigma[i][r] < 1e-3) {
            for (int c = 0; c < cells; ++c) {
              if (u.Unflatten(c)[i] == r) {
                mu[c] = 0.0;
                support[c] = false;
              }
            }
          }
        }
      }
      if (std::none_of(support.begin(), support.end(),
                       [](bool b) { return b; })) {
        break;
      }
      Renormalize(mu);
    }
    problem.set_support(support);
    stats = problem.Run(mu, target * 1e-2);
    result.outer_iterations += stats.outer;
    result.inner_iterations += stats.inner;
    gain = audit(mu);
  }
  if (!(gain <= prog.tolerance)) {
    Fail(ErrorCode::kNotConverged, "constrained solver (",
         ConcaveObjectiveName(prog.objective), ", ",
         EquilibriumFamilyName(prog.family),
         ") did not reach feasibility: max deviation gain ", gain, " > ",
         prog.tolerance, " after ", result.outer_iterations,
         " outer iterations");
  }
  result.device.mu = mu;
  result.objective = problem.Objective(mu, /*smoothed=*/false);
  return result;
}

}  // namespace sgpsro
