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

#include "sgpsro/egame/empirical_game.h"

#include <algorithm>
#include <thread>

#include "sgpsro/core/error.h"
#include "sgpsro/policy/evaluate.h"

namespace sgpsro {

EntryEstimate EstimateEntry(const Game& game,
                            const std::vector<PolicyPtr>& policies,
                            int num_sims, Rng& rng) {
  if (num_sims < 1) {
    Fail(ErrorCode::kInvalidArgument, "num_sims must be >= 1");
  }
  EntryEstimate est;
  est.means.assign(game.NumPlayers(), 0.0);
  for (int s = 0; s < num_sims; ++s) {
    const auto r = PlayEpisode(game, policies, rng);
    for (size_t p = 0; p < r.size(); ++p) est.means[p] += r[p];
  }
  for (double& m : est.means) m /= num_sims;
  est.count = num_sims;
  return est;
}

EmpiricalGame::EmpiricalGame(std::shared_ptr<const Game> game,
                             EntryConfig config)
    : game_(std::move(game)), config_(config) {
  catalogs_.resize(game_->NumPlayers());
}

std::vector<int> EmpiricalGame::shape() const {
  std::vector<int> s;
  for (const auto& c : catalogs_) s.push_back(static_cast<int>(c.size()));
  return s;
}

void EmpiricalGame::Resize() {
  const auto new_shape = shape();
  for (int n : new_shape) {
    if (n == 0) return;  // tensor undefined until every catalog is non-empty
  }
  if (tensor_.num_players() == 0) {
    tensor_ = PayoffTensor(new_shape);
    counts_.assign(tensor_.num_cells(), 0);
    filled_.assign(tensor_.num_cells(), false);
    return;
  }
  PayoffTensor grown = tensor_.Extended(new_shape);
  std::vector<int> counts(grown.num_cells(), 0);
  std::vector<bool> filled(grown.num_cells(), false);
  for (int c = 0; c < tensor_.num_cells(); ++c) {
    const int dst = grown.Flatten(tensor_.Unflatten(c));
    counts[dst] = counts_[c];
    filled[dst] = filled_[c];
  }
  tensor_ = std::move(grown);
  counts_ = std::move(counts);
  filled_ = std::move(filled);
}

void EmpiricalGame::AddPolicy(Player p, PolicyPtr policy) {
  if (p < 0 || p >= num_players()) {
    Fail(ErrorCode::kInvalidArgument, "no player ", p);
  }
  catalogs_[p].push_back(std::move(policy));
  Resize();
}

std::uint64_t EmpiricalGame::EntrySeed(const std::vector<int>& joint) const {
  std::uint64_t seed = DeriveSeed(config_.seed, 0x5eed);
  for (int j : joint) seed = DeriveSeed(seed, static_cast<std::uint64_t>(j));
  return seed;
}

int EmpiricalGame::FillMissingEntries() {
  if (tensor_.num_players() == 0) {
    Fail(ErrorCode::kFailedPrecondition, "every catalog needs a policy");
  }
  std::vector<int> missing;
  for (int c = 0; c < tensor_.num_cells(); ++c) {
    if (!filled_[c]) missing.push_back(c);
  }
  std::vector<EntryEstimate> results(missing.size());
  auto work = [&](size_t begin, size_t stride) {
    for (size_t m = begin; m < missing.size(); m += stride) {
      const auto joint = tensor_.Unflatten(missing[m]);
      std::vector<PolicyPtr> policies;
      for (int p = 0; p < num_players(); ++p) {
        policies.push_back(catalogs_[p][joint[p]]);
      }
      if (config_.exact) {
        results[m].means = ExpectedReturns(*game_, policies);
        results[m].count = 0;
      } else {
        Rng rng(EntrySeed(joint));
        results[m] = EstimateEntry(*game_, policies, config_.num_sims, rng);
      }
    }
  };
  const int threads = std::max(1, config_.num_threads);
  if (threads == 1 || missing.size() < 2) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        try {
          work(t, threads);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  for (size_t m = 0; m < missing.size(); ++m) {
    for (int p = 0; p < num_players(); ++p) {
      tensor_.At(missing[m], p) = results[m].means[p];
    }
    counts_[missing[m]] = results[m].count;
    filled_[missing[m]] = true;
  }
  return static_cast<int>(missing.size());
}

bool EmpiricalGame::IsComplete() const {
  if (tensor_.num_players() == 0) return false;
  return std::all_of(filled_.begin(), filled_.end(), [](bool f) { return f; });
}

void EmpiricalGame::SetEntry(const std::vector<int>& joint,
                             const std::vector<double>& means, int count) {
  const int flat = tensor_.Flatten(joint);
  if (static_cast<int>(means.size()) != num_players()) {
    Fail(ErrorCode::kInvalidArgument, "entry needs one mean per player");
  }
  for (int p = 0; p < num_players(); ++p) tensor_.At(flat, p) = means[p];
  counts_[flat] = count;
  filled_[flat] = true;
}

}  // namespace sgpsro
