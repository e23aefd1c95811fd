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

#include "sgpsro/service/cli.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "json.hpp"
#include "sgpsro/core/payoff_tensor.h"

namespace sgpsro {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

struct CliResult {
  int status;
  std::string out, err;
};

CliResult RunTool(const std::vector<std::string>& args,
                  const std::string& input = "") {
  std::ostringstream out, err;
  std::istringstream in(input);
  const int status = RunCli(args, out, err, in);
  return {status, out.str(), err.str()};
}

fs::path Temp(const std::string& name) {
  const fs::path p =
      fs::temp_directory_path() /
      ("sgpsro_cli_test_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  return p;
}

void WriteText(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

void ExpectChickenDevice(const json& report) {
  const auto& mu = report["solution"]["device"];
  ASSERT_EQ(mu.size(), 4u);
  EXPECT_NEAR(mu[0].get<double>(), 0.0, 1e-3);
  EXPECT_NEAR(mu[1].get<double>(), 0.5, 1e-3);
  EXPECT_NEAR(mu[2].get<double>(), 0.5, 1e-3);
  EXPECT_NEAR(mu[3].get<double>(), 0.0, 1e-3);
}

TEST(CliTest, SolveChickenWithMaxNbsCce) {
  auto r = RunTool({"solve", "--game", "chicken", "--solver", "max_nbs_cce"});
  ASSERT_EQ(r.status, 0) << r.err;
  const json report = json::parse(r.out);
  ExpectChickenDevice(report);
  ASSERT_EQ(report["support"].size(), 2u);
  EXPECT_EQ(report["support"][0]["label"], "CS");
  EXPECT_EQ(report["support"][1]["label"], "SC");

  const fs::path tensor = Temp("chicken.txt");
  ChickenTensor().WriteFile(tensor.string());
  const fs::path out = Temp("solution.json");
  r = RunTool({"solve", "--tensor", tensor.string(), "--out", out.string()});
  ASSERT_EQ(r.status, 0) << r.err;
  ExpectChickenDevice(json::parse(std::ifstream(out)));
  fs::remove(tensor);
  fs::remove(out);
}

TEST(CliTest, SolveFailuresLeaveNoOutput) {
  const fs::path out = Temp("none.json");
  auto r = RunTool(
      {"solve", "--tensor", "/no/such/tensor.txt", "--out", out.string()});
  EXPECT_NE(r.status, 0);
  EXPECT_FALSE(fs::exists(out));
  EXPECT_TRUE(r.out.empty());

  const fs::path bad = Temp("bad_tensor.txt");
  WriteText(bad, "tensor v1\nplayers 2\nshape 2 2\n1 2\n");
  r = RunTool({"solve", "--tensor", bad.string(), "--out", out.string()});
  EXPECT_EQ(r.status, 1);
  EXPECT_FALSE(fs::exists(out));
  r = RunTool({"solve", "--game", "chicken", "--solver", "nope"});
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.err.find("nope"), std::string::npos);
  r = RunTool({"solve", "--game", "chicken", "--options", R"({"bogus": 1})"});
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.err.find("bogus"), std::string::npos);
  fs::remove(bad);
}

TEST(CliTest, UsageErrors) {
  auto r = RunTool({});
  EXPECT_NE(r.status, 0);
  EXPECT_NE(r.err.find("Usage"), std::string::npos);
  r = RunTool({"frobnicate"});
  EXPECT_NE(r.status, 0);
  EXPECT_NE(r.err.find("Usage"), std::string::npos);
  r = RunTool({"solve", "--unknown-flag"});
  EXPECT_NE(r.status, 0);
  EXPECT_NE(r.err.find("Usage"), std::string::npos);
  r = RunTool({"serve", "--port", "99999"});
  EXPECT_NE(r.status, 0);
  r = RunTool({"--help"});
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("train"), std::string::npos);
}

TEST(CliTest, TrainWritesACheckpointWithCatalogsOfThree) {
  const fs::path dir = Temp("train");
  auto r = RunTool({"train", "--game", "kuhn_poker", "--epochs", "2", "--out",
                    dir.string(), "--seed", "3"});
  ASSERT_EQ(r.status, 0) << r.err;
  const json manifest = json::parse(std::ifstream(dir / "manifest.json"));
  EXPECT_EQ(manifest["catalog_sizes"], json({3, 3}));
  EXPECT_EQ(manifest["epoch"], 2);
  EXPECT_EQ(json::parse(r.out)["catalog_sizes"], json({3, 3}));

  // Resuming continues to the requested epoch count.
  r = RunTool({"train", "--game", "kuhn_poker", "--epochs", "3", "--out",
               dir.string(), "--resume"});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(json::parse(std::ifstream(dir / "manifest.json"))["epoch"], 3);

  // Evaluation of the checkpoint.
  const fs::path report = Temp("report.json");
  const fs::path csv = Temp("series.csv");
  r = RunTool({"eval", "--checkpoint", dir.string(), "--out", report.string(),
               "--csv", csv.string(), "--tournament", "--episodes", "20"});
  ASSERT_EQ(r.status, 0) << r.err;
  const json rep = json::parse(std::ifstream(report));
  bool has_nashconv = false;
  for (const auto& p : rep["series"]) {
    has_nashconv = has_nashconv || p["metric"] == "nashconv";
  }
  EXPECT_TRUE(has_nashconv);
  EXPECT_EQ(rep["tournament"]["agents"].size(), 4u);
  EXPECT_EQ(rep["rankings"]["borda_fairness"].size(), 4u);
  EXPECT_TRUE(fs::exists(csv));
  fs::remove_all(dir);
  fs::remove(report);
  fs::remove(csv);
}

TEST(CliTest, TrainConfigErrorsAreFieldPrecise) {
  const fs::path cfg = Temp("psro.json");
  WriteText(cfg,
            R"({"game": "kuhn_poker", "epochs": 2, "oracle": {"kind": "exact"},
                    "entries": {"exact": true, "speed": 3}})");
  auto r = RunTool(
      {"train", "--config", cfg.string(), "--out", Temp("never").string()});
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.err.find("psro.entries.speed"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(Temp("never")));
  WriteText(cfg, R"({"game": "kuhn_poker"})");
  r = RunTool({"train", "--config", cfg.string()});
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.err.find("--out"), std::string::npos);
  WriteText(cfg, "{ not json");
  r = RunTool({"train", "--config", cfg.string(), "--out", "/tmp/x"});
  EXPECT_EQ(r.status, 1);
  fs::remove(cfg);
}

TEST(CliTest, PlayInTheTerminalAndSummarizeTheLog) {
  const fs::path cfg = Temp("service.json");
  const fs::path log = Temp("episodes.jsonl");
  WriteText(cfg, json{{"game", "mini_dond"},
                      {"episodes_per_session", 2},
                      {"human_seat", "second"},
                      {"log_path", log.string()}}
                     .dump());
  auto r = RunTool(
      {"play", "--config", cfg.string(), "--agent", "rule", "--seed", "4"},
      "propose 9 9 9\naccept\ncontinue\naccept\ncontinue\n");
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_NE(r.out.find("error: split"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("status deal"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("final totals"), std::string::npos);

  r = RunTool({"eval", "--log", log.string()});
  ASSERT_EQ(r.status, 0) << r.err;
  const json rep = json::parse(r.out);
  EXPECT_EQ(rep["episode_log"]["episodes"], 2);
  EXPECT_EQ(rep["episode_log"]["deals"], 2);
  EXPECT_EQ(rep["episode_log"]["replay_failures"], 0);
  r = RunTool({"play", "--config", cfg.string(), "--agent", "ghost"}, "");
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.err.find("not_found"), std::string::npos);
  fs::remove(cfg);
  fs::remove(log);
}

}  // namespace
}  // namespace sgpsro
