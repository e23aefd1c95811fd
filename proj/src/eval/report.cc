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

#include "sgpsro/eval/report.h"

#include <sstream>

#include "fmt/format.h"
#include "sgpsro/core/error.h"
#include "sgpsro/eval/metrics.h"

namespace sgpsro {

std::shared_ptr<AggregatePolicy> AggregateAtEpoch(const Psro& run, int epoch) {
  if (epoch < 0 || epoch >= static_cast<int>(run.history().size())) {
    Fail(ErrorCode::kInvalidArgument, "epoch ", epoch, " not in the run");
  }
  const auto& record = run.history()[epoch];
  const PayoffTensor& u = record.tensor;
  std::vector<std::vector<PolicyPtr>> catalogs;
  std::vector<std::vector<double>> sigmas;
  for (Player p = 0; p < u.num_players(); ++p) {
    const auto& full = run.empirical_game().catalog(p);
    catalogs.emplace_back(full.begin(), full.begin() + u.shape()[p]);
    sigmas.push_back(PlayerMetaStrategy(u, record.solution, p));
  }
  return std::make_shared<AggregatePolicy>(std::move(catalogs),
                                           std::move(sigmas));
}

std::vector<SeriesPoint> PsroSeries(const Psro& run,
                                    const SeriesOptions& options) {
  std::vector<SeriesPoint> out;
  for (const auto& record : run.history()) {
    const auto values =
        record.solution.is_joint()
            ? ExpectedValue(record.tensor, record.solution.device)
            : ExpectedValue(record.tensor, record.solution.profile);
    for (size_t p = 0; p < values.size(); ++p) {
      out.push_back(
          {record.epoch, fmt::format("meta_value_p{}", p), values[p]});
    }
    const WelfareNbs w = WelfareAndNbs(values);
    out.push_back({record.epoch, "meta_welfare", w.welfare});
    out.push_back({record.epoch, "meta_nbs", w.nbs});
    if (options.nashconv) {
      const auto agg = AggregateAtEpoch(run, record.epoch);
      std::vector<PolicyPtr> profile(values.size(), agg);
      out.push_back(
          {record.epoch, "nashconv",
           NashConvExtensive(*run.game(), profile, options.node_budget)
               .nashconv});
    }
  }
  return out;
}

std::string SeriesToCsv(const std::vector<SeriesPoint>& series) {
  std::ostringstream ss;
  ss << "epoch,metric,value\n";
  for (const auto& p : series) {
    ss << fmt::format("{},{},{:.17g}\n", p.epoch, p.metric, p.value);
  }
  return ss.str();
}

nlohmann::json SeriesToJson(const std::vector<SeriesPoint>& series) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& p : series) {
    out.push_back(
        {{"epoch", p.epoch}, {"metric", p.metric}, {"value", p.value}});
  }
  return out;
}

}  // namespace sgpsro
