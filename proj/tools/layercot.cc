// Copyright 2026 The LayerCoT Authors.
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

// layercot: run sessions, simulate, serve the HTTP API.
//
//   layercot run --scenario medical --mode interactive
//   layercot simulate --p 0.2 --q 0.9 --sweep p --values 0.05,0.1,0.2
//   layercot serve --addr 127.0.0.1:8080 --storage-root /tmp/sessions
//   layercot scenarios list

#include <signal.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "fmt/format.h"
#include "layercot/core/engine.h"
#include "layercot/core/error.h"
#include "layercot/core/strings.h"
#include "layercot/core/trace.h"
#include "layercot/service/config.h"
#include "layercot/service/http-server.h"
#include "layercot/service/session-service.h"
#include "layercot/sim/sim.h"
#include "spdlog/sinks/stdout_color_sinks.h"
#include "spdlog/spdlog.h"

namespace {

using layercot::Error;
using layercot::ErrorCode;
using namespace layercot;

constexpr int kExitError = 1;
constexpr int kExitFailed = 2;
constexpr int kExitAwaiting = 3;

struct CommonOptions {
  std::string config_file;
  std::string scenarios_dir;
};

service::AppConfig LoadConfig(const CommonOptions &common) {
  service::AppConfig config;
  if (!common.config_file.empty()) {
    config = service::AppConfig::LoadFile(common.config_file);
  }
  if (!common.scenarios_dir.empty()) {
    config.scenarios_dir = common.scenarios_dir;
  } else if (config.scenarios_dir.empty()) {
    config.scenarios_dir = LAYERCOT_SCENARIOS_DIR;
  }
  return config;
}

struct RunOptions {
  std::string query;
  std::string scenario;
  std::string domain_tag;
  std::string mode;
  std::optional<int> max_layers;
  std::optional<int> max_refinements;
  std::string on_exhausted;
  std::string backend;
  std::string session_id = "cli";
  std::string trace_out;
  bool vanilla = false;
  bool json = false;
};

void PrintLayer(std::ostream &out, const core::Session &session, int index) {
  const auto &sub = session.plan->sub_problems[index];
  const auto &record = session.layers[index];
  out << fmt::format("\nLayer {}: {}  [{}, attempt {}]\n", index + 1,
                           sub.objective, core::Name(record.state),
                           record.attempt);
  if (!record.partial) return;
  out << record.partial->narrative << "\n";
  if (!record.verdict) return;
  for (size_t i = 0; i < record.partial->claims.size(); ++i) {
    const auto &claim = record.partial->claims[i];
    out << fmt::format("  {} ({}): {}  -- {}\n", claim.id, claim.statement,
                             core::Name(record.verdict->per_claim[i].status),
                             record.verdict->evidence[i].text);
  }
}

// Reads one reviewer decision from stdin; the dialog goes to stderr so
// stdout carries only the result. Returns nullopt at end of input.
std::optional<core::Feedback> PromptFeedback(const core::Session &session,
                                             int layer) {
  while (true) {
    std::cerr << "\n[a]pprove, [r]eject <note>, [n]ote <constraint>: "
              << std::flush;
    std::string line;
    if (!std::getline(std::cin, line)) return std::nullopt;
    std::string_view text = Trim(line);
    if (text.empty()) continue;
    std::string_view rest;
    if (auto space = text.find(' '); space != std::string_view::npos) {
      rest = Trim(text.substr(space));
    }

    core::Feedback feedback;
    feedback.session_id = session.id;
    feedback.layer_index = layer;
    switch (text.front()) {
      case 'a':
        feedback.action = core::FeedbackAction::kApprove;
        return feedback;
      case 'r':
        if (rest.empty()) break;
        feedback.action = core::FeedbackAction::kReject;
        feedback.note = std::string(rest);
        return feedback;
      case 'n':
        if (rest.empty()) break;
        feedback.action = core::FeedbackAction::kAnnotate;
        feedback.added_constraint = std::string(rest);
        return feedback;
      default:
        break;
    }
    std::cerr << "a reject needs a note and an annotation needs a constraint\n";
  }
}

void WriteTrace(const std::string &path, const core::Session &session) {
  if (path.empty()) return;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  out << core::ToJsonLines(session.events);
}

int Run(const CommonOptions &common, const RunOptions &opts) {
  service::AppConfig config = LoadConfig(common);
  service::EngineFactory factory(config);

  std::optional<std::string> scenario;
  std::shared_ptr<const agents::ScriptedScenario> script;
  if (!opts.scenario.empty()) {
    scenario = opts.scenario;
    script = factory.catalog().Get(opts.scenario);
  }

  core::EngineConfig engine_config = config.engine;
  if (!opts.mode.empty()) {
    engine_config.verification_mode = core::ParseVerificationMode(opts.mode);
  }
  if (opts.max_layers) engine_config.max_layers = *opts.max_layers;
  if (opts.max_refinements) engine_config.max_refinements = *opts.max_refinements;
  if (!opts.on_exhausted.empty()) {
    engine_config.on_exhausted = core::ParseOnExhausted(opts.on_exhausted);
  }
  if (!opts.backend.empty()) {
    engine_config.backend = opts.backend;
  } else if (script) {
    engine_config.backend = "scripted";
  }
  engine_config.Validate();

  core::Query query;
  query.text = opts.query;
  if (query.text.empty() && script && script->query) query.text = *script->query;
  query.domain_tag = opts.domain_tag;
  if (query.domain_tag.empty() && script) query.domain_tag = script->domain_tag;

  auto engine = factory.For(engine_config, scenario);

  if (opts.vanilla) {
    core::VanillaRun run = engine->RunVanilla(opts.session_id, query, engine_config);
    WriteTrace(opts.trace_out, run.session);
    if (opts.json) {
      std::cout << core::SessionSnapshot(run.session).dump(2) << "\n";
    } else {
      std::cout << run.answer.text << "\n";
    }
    return 0;
  }

  core::Session session =
      engine->Create(opts.session_id, query, engine_config, scenario);
  core::StepOutcome outcome;
  try {
    outcome = engine->Run(session);
    while (outcome == core::StepOutcome::kAwaitingUser) {
      int layer = *session.AwaitingLayer();
      PrintLayer(std::cerr, session, layer);
      auto feedback = PromptFeedback(session, layer);
      if (!feedback) break;
      engine->ApplyFeedback(session, *feedback);
      outcome = engine->Run(session);
    }
  } catch (const Error &) {
    WriteTrace(opts.trace_out, session);
    throw;
  }
  WriteTrace(opts.trace_out, session);

  if (opts.json) {
    std::cout << core::SessionSnapshot(session).dump(2) << "\n";
  } else {
    for (int i = 0; session.plan && i < session.plan->size(); ++i) {
      PrintLayer(std::cout, session, i);
    }
    if (session.final) {
      std::cout << "\nAnswer: " << session.final->text << "\n";
      std::cout << fmt::format("quality {:.3f}, backend calls {}\n",
                               session.final->quality,
                               core::BackendCalls(session.events));
    }
  }
  switch (session.Status()) {
    case core::SessionStatus::kFinished:
      return 0;
    case core::SessionStatus::kFailed:
      std::cerr << "session failed\n";
      return kExitFailed;
    default:
      std::cerr << "session is waiting for feedback\n";
      return kExitAwaiting;
  }
}

struct SimOptions {
  sim::SimConfig config;
  std::string sweep;
  std::vector<double> values;
  std::string csv;
};

int Simulate(const SimOptions &opts) {
  if (opts.sweep.empty()) {
    sim::SimResult result = sim::Simulate(opts.config);
    core::Json out = result;
    out["analytic"] = sim::Analytic(opts.config);
    std::cout << out.dump(2) << "\n";
    return 0;
  }
  auto param = sim::ParseSweepParam(opts.sweep);
  auto rows = sim::Sweep(opts.config, param, opts.values);
  const std::string csv = sim::SweepCsv(param, rows);
  if (opts.csv.empty() || opts.csv == "-") {
    std::cout << csv;
  } else {
    std::ofstream out(opts.csv, std::ios::binary);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + opts.csv);
    out << csv;
    std::cerr << fmt::format("wrote {} row(s) to {}\n", rows.size(), opts.csv);
  }
  return 0;
}

struct ServeOptions {
  std::string addr = "127.0.0.1:8080";
  std::string storage_root;
};

int Serve(const CommonOptions &common, const ServeOptions &opts) {
  service::AppConfig config = LoadConfig(common);
  if (!opts.storage_root.empty()) {
    config.storage_root = opts.storage_root;
  } else if (const char *env = std::getenv(service::kStorageRootEnv)) {
    config.storage_root = env;
  } else if (config.storage_root.empty()) {
    config.storage_root = "sessions";
  }
  auto [host, port] = service::ParseAddress(opts.addr);

  // Stop cleanly on SIGINT/SIGTERM, handled by a dedicated thread.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  service::SessionService sessions(config);
  service::HttpServer server(sessions);
  int bound = server.Bind(host, port);
  if (bound < 0) {
    throw Error(ErrorCode::kIo, "cannot bind " + opts.addr);
  }
  spdlog::info("listening on {}:{}, storage {}", host, bound,
               config.storage_root.string());
  // The port line lets scripts find a port chosen with :0.
  std::cout << "listening on " << host << ":" << bound << std::endl;

  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    spdlog::info("signal {}, shutting down", sig);
    server.Stop();
  });
  waiter.detach();
  server.Serve();
  return 0;
}

int ListScenarios(const CommonOptions &common) {
  service::AppConfig config = LoadConfig(common);
  agents::ScenarioCatalog catalog(config.scenarios_dir);
  for (const auto &name : catalog.Names()) {
    auto scenario = catalog.Get(name);
    std::cout << fmt::format("{}\t{} layer(s)\t{}\n", name,
                             scenario->planned_layers.size(),
                             scenario->query.value_or(""));
  }
  return 0;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Layered chain-of-thought sessions and simulator"};
  app.require_subcommand(1);

  CommonOptions common;
  app.add_option("--config", common.config_file, "JSON config file")
      ->check(CLI::ExistingFile);
  app.add_option("--scenarios-dir", common.scenarios_dir,
                 "Directory of scripted scenarios");
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Debug logging");

  RunOptions run;
  auto *run_cmd = app.add_subcommand("run", "Run one session");
  run_cmd->add_option("--query", run.query, "Query text");
  run_cmd->add_option("--scenario", run.scenario, "Scripted scenario name");
  run_cmd->add_option("--domain-tag", run.domain_tag);
  run_cmd->add_option("--mode", run.mode, "automatic, interactive or hybrid")
      ->check(CLI::IsMember({"automatic", "interactive", "hybrid"}));
  run_cmd->add_option("--max-layers", run.max_layers)->check(CLI::PositiveNumber);
  run_cmd->add_option("--max-refinements", run.max_refinements)
      ->check(CLI::NonNegativeNumber);
  run_cmd->add_option("--on-exhausted", run.on_exhausted)
      ->check(CLI::IsMember({"fail_session", "accept_flagged"}));
  run_cmd->add_option("--backend", run.backend, "scripted or chat");
  run_cmd->add_option("--session-id", run.session_id);
  run_cmd->add_option("--trace-out", run.trace_out, "Write the trace as JSON Lines");
  run_cmd->add_flag("--vanilla", run.vanilla, "Single unverified pass");
  run_cmd->add_flag("--json", run.json, "Print the session snapshot as JSON");

  SimOptions sim_opts;
  auto *sim_cmd = app.add_subcommand("simulate", "Error-propagation simulator");
  sim_cmd->add_option("--tasks", sim_opts.config.num_tasks)->capture_default_str();
  sim_cmd->add_option("--layers,-N", sim_opts.config.num_layers)
      ->capture_default_str();
  sim_cmd->add_option("--p", sim_opts.config.error_prob, "Layer error probability")
      ->capture_default_str();
  sim_cmd->add_option("--q", sim_opts.config.detection_prob,
                      "Detection probability")
      ->capture_default_str();
  sim_cmd->add_option("--refinements,-R", sim_opts.config.max_refinements)
      ->capture_default_str();
  sim_cmd->add_option("--seed", sim_opts.config.seed)->capture_default_str();
  sim_cmd->add_option("--threads", sim_opts.config.threads);
  sim_cmd->add_option("--sweep", sim_opts.sweep, "p, q, N or R");
  sim_cmd->add_option("--values", sim_opts.values, "Comma-separated sweep values")
      ->delimiter(',');
  sim_cmd->add_option("--csv", sim_opts.csv, "CSV output path (- for stdout)");

  ServeOptions serve;
  auto *serve_cmd = app.add_subcommand("serve", "Serve the HTTP API");
  serve_cmd->add_option("--addr", serve.addr, "host:port")->capture_default_str();
  serve_cmd->add_option("--storage-root", serve.storage_root,
                        "Session log directory (default $LAYERCOT_STORAGE_ROOT)");

  auto *scenarios_cmd = app.add_subcommand("scenarios", "Scripted scenarios");
  scenarios_cmd->require_subcommand(1);
  auto *list_cmd = scenarios_cmd->add_subcommand("list", "List scenarios");

  CLI11_PARSE(app, argc, argv);
  // stdout carries command output; logs go to stderr.
  spdlog::set_default_logger(spdlog::stderr_color_mt("layercot"));
  spdlog::set_level(verbose ? spdlog::level::debug : spdlog::level::info);

  try {
    if (*run_cmd) return Run(common, run);
    if (*sim_cmd) return Simulate(sim_opts);
    if (*serve_cmd) return Serve(common, serve);
    if (*list_cmd) return ListScenarios(common);
  } catch (const Error &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return 0;
}
