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

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "httplib.h"
#include "json.hpp"
#include "sgpsro/core/error.h"
#include "sgpsro/eval/report.h"
#include "sgpsro/eval/tournament.h"
#include "sgpsro/game/matrix_game.h"
#include "sgpsro/psro/psro.h"
#include "sgpsro/service/agents.h"
#include "sgpsro/service/episode_log.h"
#include "sgpsro/service/http_api.h"
#include "sgpsro/service/session.h"
#include "sgpsro/solvers/registry.h"
#include "spdlog/spdlog.h"

namespace sgpsro {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

json ReadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kIo, "cannot read ", path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    Fail(ErrorCode::kInvalidArgument, path, ": ", e.what());
  }
}

// Writes through a temporary file so readers never see partial output.
void WriteFileAtomic(const std::string& path, const std::string& text) {
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp);
    out << text;
    if (!out) Fail(ErrorCode::kIo, "cannot write ", tmp.string());
  }
  fs::rename(tmp, target);
}

std::vector<FinalAgentMode> ParseModes(const std::vector<std::string>& names) {
  std::vector<FinalAgentMode> modes;
  for (const auto& n : names) modes.push_back(ParseFinalAgentMode(n));
  return modes;
}

// "name=dir" or "dir" (named after the directory).
std::pair<std::string, std::string> SplitCheckpointArg(const std::string& a) {
  const auto eq = a.find('=');
  if (eq != std::string::npos) return {a.substr(0, eq), a.substr(eq + 1)};
  std::string name = fs::path(a).lexically_normal().filename().string();
  if (name.empty()) name = fs::path(a).parent_path().filename().string();
  return {name.empty() ? "psro" : name, a};
}

// ---------------------------------------------------------------- train

struct TrainArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> epochs;
  std::optional<int> threads;
  std::string out, game, meta_solver, oracle;
  bool resume = false;
};

int Train(const TrainArgs& a, std::ostream& out) {
  PsroConfig cfg;
  if (!a.config.empty()) cfg = PsroConfig::FromJson(ReadJsonFile(a.config));
  if (a.seed) cfg.seed = *a.seed;
  if (a.epochs) cfg.epochs = *a.epochs;
  if (a.threads) cfg.num_threads = *a.threads;
  if (!a.out.empty()) cfg.checkpoint_dir = a.out;
  if (!a.game.empty()) cfg.game = GameSpec::FromJson(a.game);
  if (!a.meta_solver.empty()) cfg.meta_solver = a.meta_solver;
  if (!a.oracle.empty()) cfg.oracle = OracleSpec::FromJson(a.oracle);
  cfg.Validate();
  if (cfg.checkpoint_dir.empty()) {
    Fail(ErrorCode::kInvalidArgument,
         "--out (or checkpoint_dir in the config) is required");
  }
  std::unique_ptr<Psro> run;
  if (a.resume && fs::exists(fs::path(cfg.checkpoint_dir) / "manifest.json")) {
    run = Psro::Resume(cfg.checkpoint_dir);
    run->mutable_config().epochs = cfg.epochs;
    run->Run();
  } else {
    run = RunPsro(cfg);
  }
  json sizes = json::array();
  for (int p = 0; p < run->game()->NumPlayers(); ++p) {
    sizes.push_back(run->empirical_game().catalog(p).size());
  }
  out << json{{"checkpoint", cfg.checkpoint_dir},
              {"epoch", run->epoch()},
              {"catalog_sizes", sizes},
              {"meta_solution", MetaSolutionToJson(run->solution())}}
             .dump(2)
      << "\n";
  return 0;
}

// ---------------------------------------------------------------- solve

struct SolveArgs {
  std::string tensor, game, solver = "max_nbs_cce", options, config, out;
};

int Solve(const SolveArgs& a, std::ostream& out) {
  if (a.tensor.empty() == a.game.empty()) {
    Fail(ErrorCode::kInvalidArgument, "give exactly one of --tensor, --game");
  }
  PayoffTensor u;
  std::vector<std::vector<std::string>> names;
  if (!a.tensor.empty()) {
    u = PayoffTensor::ReadFile(a.tensor);
  } else {
    auto game = std::dynamic_pointer_cast<const MatrixGame>(LoadGame(a.game));
    if (!game) {
      Fail(ErrorCode::kInvalidArgument, "--game must be a matrix game");
    }
    u = game->payoffs();
    for (int p = 0; p < u.num_players(); ++p) {
      std::vector<std::string> n;
      for (int k = 0; k < u.shape()[p]; ++k)
        n.push_back(game->ActionName(p, k));
      names.push_back(n);
    }
  }
  json opts = json::object();
  if (!a.config.empty()) opts = ReadJsonFile(a.config);
  if (!a.options.empty()) {
    try {
      opts.update(json::parse(a.options));
    } catch (const json::exception& e) {
      Fail(ErrorCode::kInvalidArgument, "--options: ", e.what());
    }
  }
  if (!IsKnownMetaSolver(a.solver)) {
    Fail(ErrorCode::kInvalidArgument, "unknown solver '", a.solver, "'");
  }
  const MetaSolution sol =
      SolveMeta(a.solver, u, MetaSolverOptionsFromJson(opts));
  const JointDevice mu =
      sol.is_joint() ? sol.device : ProductDevice(u, sol.profile);
  json cells = json::array();
  for (int f = 0; f < u.num_cells(); ++f) {
    if (mu.mu[f] <= 1e-9) continue;
    const auto joint = u.Unflatten(f);
    json cell = {{"joint", joint}, {"probability", mu.mu[f]}};
    if (!names.empty()) {
      std::string label;
      for (int p = 0; p < u.num_players(); ++p) label += names[p][joint[p]];
      cell["label"] = label;
    }
    cells.push_back(std::move(cell));
  }
  const json report = {{"solver", a.solver},
                       {"shape", u.shape()},
                       {"solution", MetaSolutionToJson(sol)},
                       {"support", cells},
                       {"expected_payoffs", ExpectedValue(u, mu)},
                       {"max_cce_gain", MaxCceGain(u, mu)},
                       {"max_ce_gain", MaxCeGain(u, mu)}};
  if (!a.out.empty()) WriteFileAtomic(a.out, report.dump(2) + "\n");
  out << report.dump(2) << "\n";
  return 0;
}

// ---------------------------------------------------------------- eval

struct EvalArgs {
  std::string checkpoint, out, csv, log;
  bool no_nashconv = false;
  bool tournament = false;
  bool exclude_timeouts = false;
  int episodes = 200;
  int simulations = 100;
  std::uint64_t seed = 0;
  std::vector<std::string> modes = {"naive", "self-posterior", "aggregate"};
};

json RankingJson(const std::vector<RankedAgent>& ranked) {
  json out = json::array();
  for (const auto& r : ranked) {
    out.push_back({{"agent", r.agent}, {"score", r.score}});
  }
  return out;
}

int Eval(const EvalArgs& a, std::ostream& out) {
  if (a.checkpoint.empty() && a.log.empty()) {
    Fail(ErrorCode::kInvalidArgument, "give --checkpoint and/or --log");
  }
  json report = json::object();
  if (!a.checkpoint.empty()) {
    auto run = Psro::Resume(a.checkpoint);
    SeriesOptions so;
    so.nashconv = !a.no_nashconv;
    const auto series = PsroSeries(*run, so);
    report["checkpoint"] = a.checkpoint;
    report["game"] = run->config().game.ToJson();
    report["meta_solver"] = run->config().meta_solver;
    report["epoch"] = run->epoch();
    report["series"] = SeriesToJson(series);
    if (!a.csv.empty()) WriteFileAtomic(a.csv, SeriesToCsv(series));
    if (a.tournament) {
      if (run->game()->NumPlayers() != 2) {
        Fail(ErrorCode::kInvalidArgument, "tournaments need a 2-player game");
      }
      RationalPlanningOptions rp;
      rp.search.simulations = a.simulations;
      rp.search.seed = a.seed;
      std::vector<AgentPtr> agents;
      for (FinalAgentMode m : ParseModes(a.modes)) {
        agents.push_back(std::make_shared<FinalAgent>(
            run->game(), run->catalogs(), run->solution(), m, rp));
      }
      agents.push_back(std::make_shared<PolicyAgent>(
          "uniform", std::make_shared<UniformRandomPolicy>()));
      TournamentConfig tc;
      tc.episodes_per_pair = a.episodes;
      tc.seed = a.seed;
      const auto result = RunTournament(agents, *run->game(), tc);
      report["tournament"] = result.ToJson();
      bool complete = true;
      for (const auto& row : result.errors) {
        for (const auto& e : row) complete = complete && e.empty();
      }
      if (complete) {
        report["rankings"] = {
            {"equilibrium_response", RankingJson(EquilibriumResponseRank(
                                         result, run->config().meta_solver))},
            {"borda_fairness", RankingJson(BordaFairnessRank(result))}};
      }
    }
  }
  if (!a.log.empty()) {
    const auto contents = ReadEpisodeLog(a.log);
    int replay_failures = 0;
    for (const auto& r : contents.records) replay_failures += !ReplayMatches(r);
    json s = SummarizeEpisodes(contents.records, a.exclude_timeouts).ToJson();
    s["malformed_lines"] = contents.malformed;
    s["replay_failures"] = replay_failures;
    s["exclude_timeouts"] = a.exclude_timeouts;
    report["episode_log"] = s;
  }
  if (!a.out.empty()) WriteFileAtomic(a.out, report.dump(2) + "\n");
  out << report.dump(2) << "\n";
  return 0;
}

// ---------------------------------------------------------------- serve / play

struct ServiceArgs {
  std::string config, log, host = "127.0.0.1", agent = "rule";
  std::vector<std::string> checkpoints;
  std::vector<std::string> modes = {"self-posterior", "aggregate",
                                    "rational-planning"};
  int port = 8080;
  int simulations = 300;
  std::optional<std::uint64_t> seed;
};

std::unique_ptr<SessionManager> BuildService(const ServiceArgs& a) {
  ServiceConfig cfg;
  if (!a.config.empty()) cfg = ServiceConfig::FromJson(ReadJsonFile(a.config));
  if (!a.log.empty()) cfg.log_path = a.log;
  cfg.Validate();
  auto registry = std::make_shared<AgentRegistry>(cfg.game);
  registry->AddBaselines();
  RationalPlanningOptions rp;
  rp.search.simulations = a.simulations;
  for (const auto& arg : a.checkpoints) {
    const auto [name, dir] = SplitCheckpointArg(arg);
    registry->AddCheckpoint(name, dir, ParseModes(a.modes), rp);
  }
  return std::make_unique<SessionManager>(cfg, registry);
}

int Serve(const ServiceArgs& a, std::ostream& out) {
  auto sessions = BuildService(a);
  httplib::Server server;
  RegisterRoutes(server, *sessions);
  if (!server.bind_to_port(a.host, a.port)) {
    Fail(ErrorCode::kIo, "cannot listen on ", a.host, ":", a.port);
  }
  out << "serving " << sessions->Agents().size() << " agents on http://"
      << a.host << ":" << a.port << "\n"
      << std::flush;
  server.listen_after_bind();
  return 0;
}

void PrintView(const json& v, std::ostream& out) {
  out << "episode " << v["episode"] << "/" << v["episodes_total"] << "  status "
      << v["status"].get<std::string>() << "\n"
      << "  pool      " << v["pool"].dump() << "\n"
      << "  my values " << v["my_values"].dump() << "\n";
  for (const auto& h : v["history"]) {
    out << "  " << h["player"].get<std::string>() << " "
        << h["type"].get<std::string>();
    if (h.contains("split")) out << " keeps " << h["split"].dump();
    out << "\n";
  }
  if (v.contains("offer_to_you")) {
    out << "  standing offer to you " << v["offer_to_you"].dump() << "\n";
  }
  if (v.contains("scores")) {
    out << "  scores: you " << v["scores"]["human"] << ", agent "
        << v["scores"]["agent"] << "\n";
  }
  out << "  totals: you " << v["totals"]["human"] << ", agent "
      << v["totals"]["agent"] << "\n";
}

int Play(const ServiceArgs& a, std::ostream& out, std::istream& in) {
  auto sessions = BuildService(a);
  const json created = sessions->Create(a.agent, a.seed);
  const std::string id = created["session_id"];
  json view = created["view"];
  out << "commands: propose <counts you keep...> | accept | continue | quit\n";
  PrintView(view, out);
  std::string line;
  while (view["status"] != "done") {
    out << "> " << std::flush;
    if (!std::getline(in, line)) break;
    std::istringstream words(line);
    std::string cmd;
    words >> cmd;
    if (cmd.empty()) continue;
    if (cmd == "quit") break;
    json action = {{"type", cmd}};
    if (cmd == "propose") {
      std::vector<int> split;
      for (int x; words >> x;) split.push_back(x);
      action["split"] = split;
    }
    try {
      view = sessions->Act(id, action)["view"];
      PrintView(view, out);
    } catch (const Error& e) {
      out << "error: " << e.what() << "\n";
    }
  }
  out << "final totals: you " << view["totals"]["human"] << ", agent "
      << view["totals"]["agent"] << "\n";
  return 0;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err, std::istream& in) {
  CLI::App app{"Strategic-game PSRO toolkit", "sgpsro"};
  app.require_subcommand(1);

  TrainArgs train;
  auto* t = app.add_subcommand("train", "Run PSRO and write checkpoints");
  t->add_option("--config", train.config, "PSRO config (JSON)")
      ->check(CLI::ExistingFile);
  t->add_option("--seed", train.seed, "Base seed");
  t->add_option("--epochs", train.epochs, "Number of PSRO epochs");
  t->add_option("--threads", train.threads, "Best-response threads");
  t->add_option("--out", train.out, "Checkpoint directory");
  t->add_option("--game", train.game, "Game id");
  t->add_option("--meta-solver", train.meta_solver, "Meta-strategy solver");
  t->add_option("--oracle", train.oracle, "Oracle kind");
  t->add_flag("--resume", train.resume, "Continue an existing checkpoint");

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "Run a meta-solver on a payoff tensor");
  s->add_option("--tensor", solve.tensor, "Tensor file")
      ->check(CLI::ExistingFile);
  s->add_option("--game", solve.game, "Built-in matrix game instead of a file");
  s->add_option("--solver", solve.solver, "Solver name")->capture_default_str();
  s->add_option("--config", solve.config, "Solver options (JSON file)")
      ->check(CLI::ExistingFile);
  s->add_option("--options", solve.options, "Solver options (inline JSON)");
  s->add_option("--out", solve.out, "Write the report here as well");

  EvalArgs eval;
  auto* e = app.add_subcommand("eval", "Metrics and tournaments");
  e->add_option("--checkpoint", eval.checkpoint, "PSRO checkpoint directory")
      ->check(CLI::ExistingDirectory);
  e->add_option("--out", eval.out, "Report file (JSON)");
  e->add_option("--csv", eval.csv, "Per-epoch series (CSV)");
  e->add_option("--log", eval.log, "Episode log to summarize")
      ->check(CLI::ExistingFile);
  e->add_flag("--no-nashconv", eval.no_nashconv, "Skip exact NashConv");
  e->add_flag("--tournament", eval.tournament,
              "Head-to-head tournament of final agents");
  e->add_flag("--exclude-timeouts", eval.exclude_timeouts,
              "Leave timed-out episodes out of log means");
  e->add_option("--episodes", eval.episodes, "Episodes per tournament pair")
      ->check(CLI::PositiveNumber);
  e->add_option("--simulations", eval.simulations,
                "Search simulations for rational planning");
  e->add_option("--modes", eval.modes, "Final-agent modes")
      ->capture_default_str();
  e->add_option("--seed", eval.seed, "Tournament seed");

  ServiceArgs serve;
  auto* sv = app.add_subcommand("serve", "Start the play service");
  ServiceArgs play;
  auto* pl = app.add_subcommand("play", "Play in the terminal");
  for (auto [cmd, sa] : {std::pair{sv, &serve}, std::pair{pl, &play}}) {
    cmd->add_option("--config", sa->config, "Service config (JSON)")
        ->check(CLI::ExistingFile);
    cmd->add_option("--checkpoint", sa->checkpoints,
                    "PSRO checkpoint, as dir or name=dir (repeatable)");
    cmd->add_option("--modes", sa->modes, "Final-agent modes to offer");
    cmd->add_option("--simulations", sa->simulations,
                    "Search simulations for rational planning");
    cmd->add_option("--log", sa->log, "Episode log file");
  }
  sv->add_option("--host", serve.host, "Bind address");
  sv->add_option("--port", serve.port, "Port")->check(CLI::Range(1, 65535));
  pl->add_option("--agent", play.agent, "Agent id")->capture_default_str();
  pl->add_option("--seed", play.seed, "Session seed");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& ex) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& ex) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& ex) {
    err << "error: " << ex.what() << "\n\n" << app.help();
    return ex.get_exit_code() == 0 ? 2 : ex.get_exit_code();
  }

  try {
    if (t->parsed()) return Train(train, out);
    if (s->parsed()) return Solve(solve, out);
    if (e->parsed()) return Eval(eval, out);
    if (sv->parsed()) return Serve(serve, out);
    if (pl->parsed()) return Play(play, out, in);
  } catch (const Error& ex) {
    err << "error (" << ErrorCodeName(ex.code()) << "): " << ex.what() << "\n";
    return 1;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace sgpsro
