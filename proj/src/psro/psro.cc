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

#include "sgpsro/psro/psro.h"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>
#include <utility>

#include "sgpsro/belief/posterior.h"
#include "sgpsro/core/error.h"
#include "sgpsro/psro/policy_io.h"
#include "sgpsro/solvers/registry.h"
#include "spdlog/spdlog.h"

namespace sgpsro {
namespace {

namespace fs = std::filesystem;

constexpr int kCheckpointVersion = 1;
constexpr const char* kCheckpointFormat = "sgpsro.psro_checkpoint";

void WriteAtomically(const fs::path& path, const std::string& contents) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << contents;
    if (!out) Fail(ErrorCode::kIo, "cannot write ", tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec)
    Fail(ErrorCode::kIo, "cannot rename ", tmp.string(), ": ", ec.message());
}

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot read ", path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json ParseJson(const fs::path& path) {
  try {
    return nlohmann::json::parse(ReadFile(path));
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kInvalidArgument, path.string(), ": ", e.what());
  }
}

std::string PolicyFile(Player p, int k) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "policies/p%d_%03d.json", p, k);
  return buf;
}

std::string TensorSnapshotFile(int epoch) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "tensors/epoch_%03d.txt", epoch);
  return buf;
}

template <typename T>
void Read(const nlohmann::json& j, const char* key, T& out,
          const std::string& path) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kInvalidArgument, path, ".", key, ": ", e.what());
  }
}

}  // namespace

void PsroConfig::Validate() const {
  game.Validate();
  if (!IsKnownMetaSolver(meta_solver)) {
    Fail(ErrorCode::kInvalidArgument, "psro.meta_solver: unknown solver '",
         meta_solver, "'");
  }
  MetaSolverOptionsFromJson(solver_options);
  oracle.Validate();
  if (epochs < 0) {
    Fail(ErrorCode::kInvalidArgument, "psro.epochs: must be >= 0, got ",
         epochs);
  }
  if (entries.num_sims < 1) {
    Fail(ErrorCode::kInvalidArgument, "psro.entries.num_sims: must be >= 1");
  }
  if (entries.num_threads < 1 || num_threads < 1) {
    Fail(ErrorCode::kInvalidArgument, "psro.num_threads: must be >= 1");
  }
}

nlohmann::json PsroConfig::ToJson() const {
  return {{"game", game.ToJson()},
          {"meta_solver", meta_solver},
          {"solver_options", solver_options},
          {"oracle", oracle.ToJson()},
          {"epochs", epochs},
          {"entries",
           {{"exact", entries.exact},
            {"num_sims", entries.num_sims},
            {"seed", entries.seed},
            {"num_threads", entries.num_threads}}},
          {"seed", seed},
          {"num_threads", num_threads},
          {"checkpoint_dir", checkpoint_dir}};
}

PsroConfig PsroConfig::FromJson(const nlohmann::json& j) {
  if (!j.is_object()) {
    Fail(ErrorCode::kInvalidArgument, "psro: expected an object");
  }
  PsroConfig c;
  for (const auto& [key, value] : j.items()) {
    if (key == "game") {
      c.game = GameSpec::FromJson(value);
    } else if (key == "meta_solver") {
      Read(j, "meta_solver", c.meta_solver, "psro");
    } else if (key == "solver_options") {
      c.solver_options = value;
    } else if (key == "oracle") {
      try {
        c.oracle = OracleSpec::FromJson(value);
      } catch (const Error& e) {
        Fail(ErrorCode::kInvalidArgument, "psro.oracle: ", e.what());
      }
    } else if (key == "epochs") {
      Read(j, "epochs", c.epochs, "psro");
    } else if (key == "seed") {
      Read(j, "seed", c.seed, "psro");
    } else if (key == "num_threads") {
      Read(j, "num_threads", c.num_threads, "psro");
    } else if (key == "checkpoint_dir") {
      Read(j, "checkpoint_dir", c.checkpoint_dir, "psro");
    } else if (key == "entries") {
      for (const auto& [ek, ev] : value.items()) {
        if (ek == "exact") {
          Read(value, "exact", c.entries.exact, "psro.entries");
        } else if (ek == "num_sims") {
          Read(value, "num_sims", c.entries.num_sims, "psro.entries");
        } else if (ek == "seed") {
          Read(value, "seed", c.entries.seed, "psro.entries");
        } else if (ek == "num_threads") {
          Read(value, "num_threads", c.entries.num_threads, "psro.entries");
        } else {
          Fail(ErrorCode::kInvalidArgument, "psro.entries.", ek,
               ": unknown field");
        }
      }
    } else {
      Fail(ErrorCode::kInvalidArgument, "psro.", key, ": unknown field");
    }
  }
  try {
    MetaSolverOptionsFromJson(c.solver_options);
  } catch (const Error& e) {
    Fail(ErrorCode::kInvalidArgument, "psro.solver_options: ", e.what());
  }
  c.Validate();
  return c;
}

nlohmann::json EpochRecord::ToJson() const {
  return {{"epoch", epoch},
          {"solution", MetaSolutionToJson(solution)},
          {"oracle", oracle_summaries},
          {"errors", errors},
          {"entries_filled", entries_filled},
          {"seconds", seconds}};
}

std::vector<double> PlayerMetaStrategy(const PayoffTensor& shape_only,
                                       const MetaSolution& solution,
                                       Player player) {
  if (!solution.is_joint()) return solution.profile.sigma.at(player);
  return DeviceMarginals(shape_only, solution.device).sigma.at(player);
}

Psro::Psro(PsroConfig config) : Psro(std::move(config), true) {}

Psro::Psro(PsroConfig config, bool seed_catalogs) : config_(std::move(config)) {
  config_.Validate();
  game_ = LoadGame(config_.game);
  egame_ = std::make_unique<EmpiricalGame>(game_, config_.entries);
  if (!seed_catalogs) return;
  const auto start = std::chrono::steady_clock::now();
  for (Player p = 0; p < game_->NumPlayers(); ++p) {
    egame_->AddPolicy(p, std::make_shared<UniformRandomPolicy>());
  }
  EpochRecord record;
  record.epoch = 0;
  record.entries_filled = egame_->FillMissingEntries();
  Solve(record);
  record.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  history_.push_back(std::move(record));
  if (!config_.checkpoint_dir.empty()) SaveCheckpoint(config_.checkpoint_dir);
}

std::vector<std::vector<PolicyPtr>> Psro::catalogs() const {
  std::vector<std::vector<PolicyPtr>> out;
  for (Player p = 0; p < egame_->num_players(); ++p) {
    out.push_back(egame_->catalog(p));
  }
  return out;
}

void Psro::Solve(EpochRecord& record) {
  const PayoffTensor& u = egame_->tensor();
  try {
    solution_ = SolveMeta(config_.meta_solver, u,
                          MetaSolverOptionsFromJson(config_.solver_options));
  } catch (const Error& e) {
    record.errors.push_back(std::string("meta-solver: ") + e.what());
    spdlog::warn("epoch {}: meta-solver failed ({}); using uniform",
                 record.epoch, e.what());
    solution_ = MetaSolution::Independent(UniformProfile(u.shape()));
    solution_.flags.push_back("solver_failed_uniform_fallback");
  }
  record.solution = solution_;
  record.tensor = u;
}

void Psro::RunEpoch() {
  const auto start = std::chrono::steady_clock::now();
  EpochRecord record;
  record.epoch = epoch_ + 1;
  const int n = game_->NumPlayers();
  const auto cats = catalogs();
  std::vector<OracleOutput> outputs(n);
  std::vector<std::string> errors(n);
  auto respond = [&](Player i) {
    try {
      const OpponentMixture mixture = MixtureFromSolution(cats, solution_, i);
      outputs[i] = ComputeResponse(
          config_.oracle, game_, i, mixture,
          DeriveSeed(config_.seed,
                     static_cast<std::uint64_t>(record.epoch) * 1024 + i));
    } catch (const Error& e) {
      errors[i] = e.what();
    }
  };
  if (config_.num_threads > 1 && n > 1) {
    for (Player first = 0; first < n; first += config_.num_threads) {
      std::vector<std::future<void>> jobs;
      for (Player i = first; i < std::min(n, first + config_.num_threads);
           ++i) {
        jobs.push_back(std::async(std::launch::async, respond, i));
      }
      for (auto& job : jobs) job.get();
    }
  } else {
    for (Player i = 0; i < n; ++i) respond(i);
  }
  for (Player i = 0; i < n; ++i) {
    if (!errors[i].empty()) {
      record.errors.push_back("oracle for player " + std::to_string(i) + ": " +
                              errors[i]);
      spdlog::warn(
          "epoch {}: oracle failed for player {} ({}); adding the "
          "uniform policy",
          record.epoch, i, errors[i]);
      outputs[i].policy = std::make_shared<UniformRandomPolicy>();
      outputs[i].summary = {{"oracle", "fallback_uniform"}};
    }
    record.oracle_summaries.push_back(outputs[i].summary);
  }
  for (Player i = 0; i < n; ++i) egame_->AddPolicy(i, outputs[i].policy);
  record.entries_filled = egame_->FillMissingEntries();
  Solve(record);
  ++epoch_;
  record.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  spdlog::info("epoch {}: {} entries filled in {:.2f}s", record.epoch,
               record.entries_filled, record.seconds);
  history_.push_back(std::move(record));
  if (!config_.checkpoint_dir.empty()) SaveCheckpoint(config_.checkpoint_dir);
}

void Psro::Run() {
  while (epoch_ < config_.epochs) RunEpoch();
}

void Psro::SaveCheckpoint(const std::string& dir) const {
  const fs::path root(dir);
  fs::create_directories(root / "policies");
  fs::create_directories(root / "tensors");
  nlohmann::json files = nlohmann::json::array();
  std::vector<int> sizes;
  for (Player p = 0; p < egame_->num_players(); ++p) {
    nlohmann::json names = nlohmann::json::array();
    const auto& cat = egame_->catalog(p);
    for (int k = 0; k < static_cast<int>(cat.size()); ++k) {
      const std::string name = PolicyFile(p, k);
      // Earlier policies never change, so only new files are written.
      if (!fs::exists(root / name)) {
        WriteAtomically(root / name, cat[k]->ToJson().dump());
      }
      names.push_back(name);
    }
    files.push_back(std::move(names));
    sizes.push_back(static_cast<int>(cat.size()));
  }
  nlohmann::json history = nlohmann::json::array();
  for (const auto& r : history_) {
    const std::string name = TensorSnapshotFile(r.epoch);
    if (!fs::exists(root / name))
      WriteAtomically(root / name, r.tensor.Serialize());
    nlohmann::json rj = r.ToJson();
    rj["tensor_file"] = name;
    history.push_back(std::move(rj));
  }
  WriteAtomically(root / "tensor.txt", egame_->tensor().Serialize());
  WriteAtomically(root / "meta_solution.json",
                  MetaSolutionToJson(solution_).dump(2));
  const nlohmann::json manifest = {{"format", kCheckpointFormat},
                                   {"version", kCheckpointVersion},
                                   {"game", config_.game.ToJson()},
                                   {"meta_solver", config_.meta_solver},
                                   {"oracle", config_.oracle.ToJson()},
                                   {"epoch", epoch_},
                                   {"seed", config_.seed},
                                   {"config", config_.ToJson()},
                                   {"catalog_sizes", sizes},
                                   {"policies", files},
                                   {"tensor", "tensor.txt"},
                                   {"tensor_counts", egame_->counts()},
                                   {"meta_solution", "meta_solution.json"},
                                   {"history", history}};
  // The manifest goes last: a directory with a manifest is complete.
  WriteAtomically(root / "manifest.json", manifest.dump(2));
}

std::unique_ptr<Psro> Psro::Resume(const std::string& dir) {
  const fs::path root(dir);
  const nlohmann::json manifest = ParseJson(root / "manifest.json");
  if (manifest.value("format", "") != kCheckpointFormat) {
    Fail(ErrorCode::kInvalidArgument, dir, ": not a PSRO checkpoint");
  }
  if (manifest.value("version", 0) != kCheckpointVersion) {
    Fail(ErrorCode::kInvalidArgument, dir, ": unsupported checkpoint version ",
         manifest.value("version", 0));
  }
  PsroConfig config = PsroConfig::FromJson(manifest.at("config"));
  std::unique_ptr<Psro> run(new Psro(config, false));
  const auto& files = manifest.at("policies");
  const int n = run->game_->NumPlayers();
  if (static_cast<int>(files.size()) != n) {
    Fail(ErrorCode::kInvalidArgument, dir, ": policies for ", files.size(),
         " players, game has ", n);
  }
  size_t depth = 0;
  for (const auto& f : files) depth = std::max(depth, f.size());
  PolicyResolver resolver;
  EmpiricalGame* egame = run->egame_.get();
  resolver.by_index = [egame](Player p, int k) {
    const auto& cat = egame->catalog(p);
    if (k < 0 || k >= static_cast<int>(cat.size())) {
      Fail(ErrorCode::kInvalidArgument, "policy reference (", p, ", ", k,
           ") precedes its definition");
    }
    return cat[k];
  };
  // Index-major order: policy k may refer to any policy with index < k.
  for (size_t k = 0; k < depth; ++k) {
    for (Player p = 0; p < n; ++p) {
      if (k >= files[p].size()) continue;
      const auto name = files[p][k].get<std::string>();
      try {
        egame->AddPolicy(
            p, PolicyFromJson(ParseJson(root / name), run->game_, resolver));
      } catch (const Error& e) {
        Fail(ErrorCode::kInvalidArgument, dir, "/", name, ": ", e.what());
      }
    }
  }
  const PayoffTensor tensor =
      PayoffTensor::ReadFile((root / "tensor.txt").string());
  if (tensor.shape() != egame->shape()) {
    Fail(ErrorCode::kInvalidArgument, dir,
         ": tensor shape does not match "
         "the catalogs");
  }
  const auto counts = manifest.at("tensor_counts").get<std::vector<int>>();
  for (int flat = 0; flat < tensor.num_cells(); ++flat) {
    std::vector<double> means;
    for (Player p = 0; p < n; ++p) means.push_back(tensor.At(flat, p));
    egame->SetEntry(tensor.Unflatten(flat), means, counts.at(flat));
  }
  run->solution_ = MetaSolutionFromJson(ParseJson(root / "meta_solution.json"));
  run->epoch_ = manifest.at("epoch").get<int>();
  for (const auto& rj : manifest.at("history")) {
    EpochRecord r;
    r.epoch = rj.at("epoch").get<int>();
    r.solution = MetaSolutionFromJson(rj.at("solution"));
    r.oracle_summaries = rj.at("oracle").get<std::vector<nlohmann::json>>();
    r.errors = rj.at("errors").get<std::vector<std::string>>();
    r.entries_filled = rj.at("entries_filled").get<int>();
    r.seconds = rj.at("seconds").get<double>();
    r.tensor = PayoffTensor::ReadFile(
        (root / rj.at("tensor_file").get<std::string>()).string());
    run->history_.push_back(std::move(r));
  }
  return run;
}

std::unique_ptr<Psro> RunPsro(const PsroConfig& config) {
  auto run = std::make_unique<Psro>(config);
  run->Run();
  return run;
}

}  // namespace sgpsro
