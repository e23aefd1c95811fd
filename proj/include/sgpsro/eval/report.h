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

#ifndef SGPSRO_EVAL_REPORT_H_
#define SGPSRO_EVAL_REPORT_H_

#include <string>
#include <vector>

#include "json.hpp"
#include "sgpsro/psro/final_agent.h"
#include "sgpsro/psro/psro.h"

namespace sgpsro {

struct SeriesPoint {
  int epoch = 0;
  std::string metric;
  double value = 0.0;
};

// Aggregate policy of the run as it stood after `epoch`: the first epoch + 1
// policies of every catalog mixed by that epoch's meta-solution.
std::shared_ptr<AggregatePolicy> AggregateAtEpoch(const Psro& run, int epoch);

struct SeriesOptions {
  // Exact NashConv of the aggregate policy per epoch (enumerable games).
  bool nashconv = true;
  long node_budget = 50'000'000;
};

// Per epoch: meta-game expected payoff per player ("meta_value_p<i>"),
// "meta_welfare", "meta_nbs" (d = 0), and "nashconv" when requested.
std::vector<SeriesPoint> PsroSeries(const Psro& run,
                                    const SeriesOptions& options = {});

// "epoch,metric,value" lines with a header.
std::string SeriesToCsv(const std::vector<SeriesPoint>& series);
nlohmann::json SeriesToJson(const std::vector<SeriesPoint>& series);

}  // namespace sgpsro

#endif  // SGPSRO_EVAL_REPORT_H_
