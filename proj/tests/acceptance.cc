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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any fails.

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "engine-harness.h"
#include "fmt/format.h"
#include "httplib.h"
#include "layercot/service/session-service.h"
#include "layercot/sim/sim.h"
#include "spdlog/spdlog.h"
#include "test-util.h"

namespace layercot {
namespace {

using core::Json;
using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

// Collects failures for one criterion.
class Check {
 public:
  void Expect(bool ok, const std::string &what) {
    if (!ok) failures_.push_back(what);
  }
  const std::vector<std::string> &failures() const { return failures_; }

 private:
  std::vector<std::string> failures_;
};

int g_failed = 0;

void Report(const std::string &name, const std::function<void(Check &)> &body) {
  Check check;
  const auto start = Clock::now();
  try {
    body(check);
  } catch (const std::exception &e) {
    check.Expect(false, std::string("exception: ") + e.what());
  }
  const double elapsed = Seconds(start);
  if (check.failures().empty()) {
    std::cout << fmt::format("PASS {} ({:.2f} s)", name, elapsed) << std::endl;
    return;
  }
  ++g_failed;
  std::cout << fmt::format("FAIL {} ({:.2f} s): {}", name, elapsed,
                           check.failures().front());
  if (check.failures().size() > 1) {
    std::cout << fmt::format(" (+{} more)", check.failures().size() - 1);
  }
  std::cout << std::endl;
}

sim::SimConfig SimPoint(int n, double p, double q, int r, std::int64_t tasks) {
  sim::SimConfig c;
  c.num_layers = n;
  c.error_prob = p;
  c.detection_prob = q;
  c.max_refinements = r;
  c.num_tasks = tasks;
  return c;
}

// Error-rate sweep over p: layered below vanilla at every point, Monte Carlo
// within 3 sigma of the closed form, CSV produced, under 5 s.
void SweepCriterion(Check &check) {
  const auto start = Clock::now();
  const std::vector<double> ps{0.05, 0.1, 0.2, 0.3, 0.4};
  auto rows = sim::Sweep(SimPoint(5, 0.0, 0.9, 2, 1000), sim::SweepParam::kErrorProb, ps);
  const std::string csv = sim::SweepCsv(sim::SweepParam::kErrorProb, rows);
  const double elapsed = Seconds(start);

  check.Expect(rows.size() == ps.size(), "one row per value");
  for (const auto &row : rows) {
    const auto &s = row.simulated;
    const auto &a = row.analytic;
    check.Expect(s.layered_error_rate < s.vanilla_error_rate,
                 fmt::format("p={}: layered {} not below vanilla {}", row.value,
                             s.layered_error_rate, s.vanilla_error_rate));
    const double sigma = sim::RateSigma(a.layered_error_rate, s.num_tasks);
    check.Expect(std::abs(s.layered_error_rate - a.layered_error_rate) <= 3 * sigma,
                 fmt::format("p={}: simulated {} vs analytic {} exceeds 3 sigma ({})",
                             row.value, s.layered_error_rate, a.layered_error_rate,
                             sigma));
  }
  std::istringstream lines(csv);
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) ++count;
  check.Expect(csv.rfind("param,value,vanilla_err,layered_err,", 0) == 0,
               "CSV header");
  check.Expect(count == static_cast<int>(ps.size()) + 1, "CSV row count");
  check.Expect(elapsed < 5.0, fmt::format("took {:.2f} s", elapsed));
}

// N=3, p=0.2, q=1, R=1 over 10^6 tasks: success within 0.005 of 0.884736,
// vanilla success 0.512.
void WorkedPointCriterion(Check &check) {
  const auto start = Clock::now();
  auto r = sim::Simulate(SimPoint(3, 0.2, 1.0, 1, 1000000));
  const double elapsed = Seconds(start);
  const double success = 1.0 - r.layered_error_rate - r.exhausted_rate;
  const double vanilla = 1.0 - r.vanilla_error_rate;
  check.Expect(std::abs(success - 0.884736) <= 0.005,
               fmt::format("layered success {:.6f}", success));
  check.Expect(std::abs(vanilla - 0.512) <= 0.005,
               fmt::format("vanilla success {:.6f}", vanilla));
  auto a = sim::Analytic(SimPoint(3, 0.2, 1.0, 1, 1));
  check.Expect(std::abs(1.0 - a.layered_error_rate - a.exhausted_rate - 0.884736) < 1e-6,
               "analytic success");
  check.Expect(elapsed < 60.0, fmt::format("took {:.2f} s", elapsed));
}

// Blind verification (q=0): layered and vanilla error agree within 3 sigma.
void DegeneracyCriterion(Check &check) {
  for (double p : {0.05, 0.1, 0.2, 0.3, 0.4}) {
    auto r = sim::Simulate(SimPoint(5, p, 0.0, 2, 10000));
    const double sigma =
        sim::DifferenceSigma(r.layered_error_rate, r.vanilla_error_rate, r.num_tasks);
    check.Expect(std::abs(r.layered_error_rate - r.vanilla_error_rate) <= 3 * sigma,
                 fmt::format("p={}: layered {} vanilla {} sigma {}", p,
                             r.layered_error_rate, r.vanilla_error_rate, sigma));
    check.Expect(r.exhausted == 0, fmt::format("p={}: exhaustion without detection", p));
  }
}

core::Session DriveScenario(const std::string &name, core::VerificationMode mode,
                            Check &check) {
  auto rig = testing::LoadRig(name);
  core::EngineConfig config;
  config.verification_mode = mode;
  auto session = rig.engine->Create(name, rig.query(), config);
  rig.engine->Run(session);
  while (auto layer = session.AwaitingLayer()) {
    rig.engine->ApplyFeedback(
        session, {name, *layer, core::FeedbackAction::kApprove, {}, {}, {}});
    rig.engine->Run(session);
  }
  check.Expect(session.Status() == core::SessionStatus::kFinished,
               name + " did not finish");

  // Each accepted layer has exactly one verdict for the generation that was
  // accepted.
  int verdicts = 0;
  for (const auto &e : session.events) {
    switch (e.kind) {
      case core::EventKind::kPartialGenerated:
      case core::EventKind::kRefined:
        verdicts = 0;
        break;
      case core::EventKind::kVerdictRecorded:
        ++verdicts;
        break;
      case core::EventKind::kLayerAccepted:
        check.Expect(verdicts == 1,
                     fmt::format("{}: layer {} accepted with {} verdicts", name,
                                 e.payload["layer"].get<int>(), verdicts));
        break;
      default:
        break;
    }
  }
  return session;
}

void ScenarioCriterion(Check &check) {
  const auto start = Clock::now();
  for (auto mode : {core::VerificationMode::kAutomatic,
                    core::VerificationMode::kInteractive,
                    core::VerificationMode::kHybrid}) {
    for (const char *name : {"agile", "algorithm_x", "finance", "medical"}) {
      DriveScenario(name, mode, check);
    }
  }
  auto medical = DriveScenario("medical", core::VerificationMode::kAutomatic, check);
  check.Expect(medical.final &&
                   medical.final->text.find("scheduling a doctor's visit is advised") !=
                       std::string::npos,
               "medical answer");

  auto finance = DriveScenario("finance", core::VerificationMode::kAutomatic, check);
  bool found = false;
  for (const auto &e : finance.events) {
    if (e.kind != core::EventKind::kVerdictRecorded) continue;
    auto verdict = e.payload["verdict"].get<core::VerificationVerdict>();
    check.Expect(verdict.layer_index == 0, "first verdict is for layer 0");
    // The first verdict must contradict the patent claim.
    const auto &partial = finance.events[e.seq - 2].payload["partial"];
    for (size_t i = 0; i < partial["claims"].size(); ++i) {
      const std::string statement = partial["claims"][i]["statement"];
      if (statement.find("patent_status") != std::string::npos) {
        found = true;
        check.Expect(verdict.per_claim[i].status == core::ClaimStatus::kContradicted,
                     "patent claim not contradicted");
      }
    }
    break;
  }
  check.Expect(found, "finance first layer has no patent claim");
  const double elapsed = Seconds(start);
  check.Expect(elapsed < 1.0, fmt::format("took {:.2f} s", elapsed));
}

void RandomizedCriterion(Check &check) {
  for (std::uint64_t seed = 1; seed <= 10000; ++seed) {
    auto violations = testing::CheckInvariants(testing::RunRandomSession(seed));
    if (!violations.empty()) {
      check.Expect(false, fmt::format("seed {}: {}", seed, violations.front()));
      return;
    }
  }
}

// A `layercot serve` child process.
class ServerProcess {
 public:
  explicit ServerProcess(const std::filesystem::path &root) {
    int fds[2];
    if (::pipe(fds) != 0) throw std::runtime_error("pipe failed");
    pid_ = ::fork();
    if (pid_ < 0) throw std::runtime_error("fork failed");
    if (pid_ == 0) {
      ::dup2(fds[1], STDOUT_FILENO);
      const int null_fd = ::open("/dev/null", O_WRONLY);
      if (null_fd >= 0) ::dup2(null_fd, STDERR_FILENO);
      ::close(fds[0]);
      ::close(fds[1]);
      const std::string root_arg = root.string();
      const std::string scenarios = testing::ScenariosDir().string();
      ::execl(LAYERCOT_CLI, LAYERCOT_CLI, "--scenarios-dir", scenarios.c_str(), "serve",
              "--addr", "127.0.0.1:0", "--storage-root", root_arg.c_str(),
              static_cast<char *>(nullptr));
      ::_exit(127);
    }
    ::close(fds[1]);
    FILE *out = ::fdopen(fds[0], "r");
    char line[256] = {0};
    std::string text;
    while (std::fgets(line, sizeof(line), out)) {
      text = line;
      if (text.rfind("listening on ", 0) == 0) break;
      text.clear();
    }
    ::fclose(out);
    if (text.empty()) throw std::runtime_error("server did not report its address");
    port_ = std::stoi(text.substr(text.rfind(':') + 1));
  }
  ~ServerProcess() {
    if (pid_ > 0) Kill(SIGTERM);
  }

  void Kill(int sig) {
    ::kill(pid_, sig);
    int status = 0;
    ::waitpid(pid_, &status, 0);
    pid_ = -1;
  }

  int port() const { return port_; }

 private:
  pid_t pid_ = -1;
  int port_ = 0;
};

const std::vector<Json> &FeedbackSequence() {
  static const std::vector<Json> seq{
      {{"layer", 0}, {"action", "reject"}, {"note", "patient is immunocompromised"}},
      {{"layer", 0}, {"action", "approve"}},
      {{"layer", 1}, {"action", "approve"}},
  };
  return seq;
}

const Json &CreateRequest() {
  static const Json req{{"scenario", "medical"},
                        {"session_id", "crash"},
                        {"config", {{"verification_mode", "interactive"}}}};
  return req;
}

std::string StripTimestamps(const Json &trace) {
  auto events = trace.get<std::vector<core::TraceEvent>>();
  return testing::TraceWithoutTimestamps(events);
}

// Kill -9 the server while the session waits for the reviewer, restart on
// the same storage root, finish the feedback sequence and compare against an
// uninterrupted run.
void CrashResumeCriterion(Check &check) {
  testing::TempDir reference_dir;
  service::AppConfig reference_config;
  reference_config.scenarios_dir = testing::ScenariosDir();
  reference_config.storage_root = reference_dir.path();
  service::SessionService reference(reference_config);
  reference.Create(CreateRequest());
  for (const auto &fb : FeedbackSequence()) reference.PostFeedback("crash", fb);
  const std::string expected = StripTimestamps(reference.Trace("crash"));
  check.Expect(reference.Get("crash")["status"] == "Finished", "reference run finished");

  testing::TempDir dir;
  auto post = [&](int port, const std::string &path, const Json &body) {
    httplib::Client client("127.0.0.1", port);
    auto res = client.Post(path, body.dump(), "application/json");
    if (!res) throw std::runtime_error("request to " + path + " failed");
    return std::make_pair(res->status, Json::parse(res->body));
  };

  size_t next = 0;
  {
    ServerProcess server(dir.path());
    auto [status, body] = post(server.port(), "/sessions", CreateRequest());
    check.Expect(status == 201, fmt::format("create returned {}", status));
    check.Expect(body["status"] == "AwaitingUser", "not awaiting after create");
    server.Kill(SIGKILL);
  }
  // Restart, apply one step, crash again, then finish.
  for (int round = 0; round < 2; ++round) {
    ServerProcess server(dir.path());
    const size_t stop = round == 0 ? 1 : FeedbackSequence().size();
    for (; next < stop; ++next) {
      auto [status, body] =
          post(server.port(), "/sessions/crash/feedback", FeedbackSequence()[next]);
      check.Expect(status == 200, fmt::format("feedback {} returned {}: {}", next, status,
                                              body.dump()));
    }
    if (round == 0) {
      server.Kill(SIGKILL);
      continue;
    }
    httplib::Client client("127.0.0.1", server.port());
    auto res = client.Get("/sessions/crash/trace");
    check.Expect(res && res->status == 200, "trace fetch");
    if (!res) return;
    check.Expect(StripTimestamps(Json::parse(res->body)) == expected,
                 "resumed trace differs from the uninterrupted run");
    auto snap = client.Get("/sessions/crash");
    check.Expect(snap && Json::parse(snap->body)["status"] == "Finished",
                 "resumed session did not finish");
  }
}

// Automatic runs without refinement cost N + 2 backend calls.
void InteractionCountCriterion(Check &check) {
  for (int n : {1, 2, 5}) {
    Json doc{{"name", "count"}, {"layers", Json::array()}, {"responses", Json::array()}};
    std::string facts;
    for (int i = 0; i < n; ++i) {
      doc["layers"].push_back(fmt::format("step {}", i + 1));
      doc["responses"].push_back(
          {{"step", "reason"}, {"layer", i}, {"text", fmt::format("CLAIM: f{} | ok | yes", i)}});
      facts += fmt::format("f{} | ok | yes | true\n", i);
    }
    doc["responses"].push_back({{"step", "integrate"}, {"text", "done"}});
    auto scenario = std::make_shared<const agents::ScriptedScenario>(
        agents::ScriptedScenario::FromJson(doc, {}));
    auto backend = std::make_shared<agents::RecordingBackend>(
        std::make_shared<agents::ScriptedBackend>(scenario));
    core::Engine engine(agents::Agents::Single(backend),
                        std::make_shared<const knowledge::FactStore>(
                            knowledge::FactStore::Parse(facts)));
    core::EngineConfig config;
    config.max_refinements = 0;
    auto session = engine.Create("n", {"", "query", "", {}}, config);
    engine.Run(session);
    check.Expect(session.Status() == core::SessionStatus::kFinished,
                 fmt::format("N={} did not finish", n));
    check.Expect(backend->calls() == static_cast<size_t>(n + 2),
                 fmt::format("N={}: {} calls", n, backend->calls()));
    check.Expect(core::BackendCalls(session.events) == n + 2,
                 fmt::format("N={}: trace counts {}", n, core::BackendCalls(session.events)));
  }
}

}  // namespace
}  // namespace layercot

int main() {
  using namespace layercot;
  spdlog::set_level(spdlog::level::warn);
  Report("sweep-p-layered-below-vanilla", SweepCriterion);
  Report("worked-point-1e6-tasks", WorkedPointCriterion);
  Report("blind-verification-matches-vanilla", DegeneracyCriterion);
  Report("scenario-suite", ScenarioCriterion);
  Report("randomized-10000-sessions", RandomizedCriterion);
  Report("crash-resume-identical-trace", CrashResumeCriterion);
  Report("interaction-count-n-plus-2", InteractionCountCriterion);
  return g_failed == 0 ? 0 : 1;
}
