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

#include "layercot/sim/sim.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

#include "fmt/format.h"
#include "layercot/core/error.h"

namespace layercot::sim {
namespace {

constexpr int kMaxLayers = 1000;
constexpr int kMaxRefinements = 1000;

[[noreturn]] void Bad(const std::string &message) {
  throw Error(ErrorCode::kBadParameter, message);
}

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Uniform double in [0, 1) from the top 53 bits.
double Uniform(std::mt19937_64 &gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

struct Counts {
  std::int64_t tasks = 0;
  std::int64_t vanilla_errors = 0;
  std::int64_t layered_errors = 0;
  std::int64_t exhausted = 0;
  std::int64_t calls = 0;
  std::int64_t claims = 0;
  std::int64_t verified = 0;

  void Add(const Counts &o) {
    tasks += o.tasks;
    vanilla_errors += o.vanilla_errors;
    layered_errors += o.layered_errors;
    exhausted += o.exhausted;
    calls += o.calls;
    claims += o.claims;
    verified += o.verified;
  }
};

void RunTask(const SimConfig &config, std::int64_t task, Counts &counts) {
  std::mt19937_64 gen(
      SplitMix64(config.seed ^ SplitMix64(static_cast<std::uint64_t>(task))));
  const double p = config.error_prob;
  const double q = config.detection_prob;

  bool vanilla_wrong = false;
  for (int i = 0; i < config.num_layers; ++i) {
    if (Uniform(gen) < p) vanilla_wrong = true;
  }

  std::int64_t calls = 1;  // plan
  bool wrong = false;
  bool exhausted = false;
  for (int layer = 0; layer < config.num_layers && !exhausted; ++layer) {
    for (int attempt = 0; attempt <= config.max_refinements; ++attempt) {
      ++calls;
      ++counts.claims;
      const bool layer_wrong = Uniform(gen) < p;
      const bool detected = Uniform(gen) < q;
      if (!layer_wrong) {
        if (detected) ++counts.verified;
        break;
      }
      if (!detected) {
        wrong = true;
        break;
      }
      if (attempt == config.max_refinements) exhausted = true;
    }
  }
  if (!exhausted) ++calls;  // integrate

  ++counts.tasks;
  counts.calls += calls;
  if (vanilla_wrong) ++counts.vanilla_errors;
  if (exhausted) {
    ++counts.exhausted;
  } else if (wrong) {
    ++counts.layered_errors;
  }
}

double Rate(std::int64_t count, std::int64_t total) {
  return total == 0 ? 0.0
                    : static_cast<double>(count) / static_cast<double>(total);
}

std::string Num(double v) { return fmt::format("{:.6g}", v); }

// RFC 4180: quote fields holding a separator, quote or line break.
std::string CsvField(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

void SimConfig::Validate() const {
  if (num_tasks < 1) Bad("num_tasks must be at least 1");
  if (num_layers < 1 || num_layers > kMaxLayers) {
    Bad(fmt::format("num_layers must be in 1..{}", kMaxLayers));
  }
  if (!(error_prob >= 0.0 && error_prob <= 1.0)) {
    Bad("error_prob must be in [0, 1]");
  }
  if (!(detection_prob >= 0.0 && detection_prob <= 1.0)) {
    Bad("detection_prob must be in [0, 1]");
  }
  if (max_refinements < 0 || max_refinements > kMaxRefinements) {
    Bad(fmt::format("max_refinements must be in 0..{}", kMaxRefinements));
  }
  if (threads < 0) Bad("threads must be non-negative");
}

LayerProbabilities LayerOutcome(const SimConfig &config) {
  const double p = config.error_prob;
  const double q = config.detection_prob;
  const double pq = p * q;
  double s = 0.0;
  double term = 1.0;
  for (int k = 0; k <= config.max_refinements; ++k) {
    s += term;
    term *= pq;
  }
  LayerProbabilities out;
  out.accept_correct = (1.0 - p) * s;
  out.accept_wrong = p * (1.0 - q) * s;
  out.exhausted = term;  // (pq)^(R+1)
  out.expected_attempts = s;
  return out;
}

SimResult Analytic(const SimConfig &config) {
  config.Validate();
  const LayerProbabilities layer = LayerOutcome(config);
  const int n = config.num_layers;
  const double survive = 1.0 - layer.exhausted;

  SimResult r;
  r.vanilla_error_rate = 1.0 - std::pow(1.0 - config.error_prob, n);
  const double success = std::pow(layer.accept_correct, n);
  r.layered_error_rate =
      std::max(0.0, std::pow(layer.accept_correct + layer.accept_wrong, n) -
                        success);
  r.exhausted_rate = 1.0 - std::pow(survive, n);

  // Layer j is reached when none of the j before it exhausted.
  double reached = 0.0;
  double reach = 1.0;
  for (int j = 0; j < n; ++j) {
    reached += reach;
    reach *= survive;
  }
  r.mean_backend_calls = 1.0 + layer.expected_attempts * reached + reach;
  r.quality = (1.0 - config.error_prob) * config.detection_prob;
  return r;
}

SimResult Simulate(const SimConfig &config) {
  config.Validate();
  int threads = config.threads > 0
                    ? config.threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, threads);
  // Small runs are not worth a thread each.
  threads = static_cast<int>(
      std::min<std::int64_t>(threads, (config.num_tasks + 4095) / 4096));
  threads = std::max(1, threads);

  std::vector<Counts> shards(threads);
  auto run = [&](int shard) {
    const std::int64_t begin = config.num_tasks * shard / threads;
    const std::int64_t end = config.num_tasks * (shard + 1) / threads;
    for (std::int64_t task = begin; task < end; ++task) {
      RunTask(config, task, shards[shard]);
    }
  };
  if (threads == 1) {
    run(0);
  } else {
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    for (int i = 0; i < threads; ++i) workers.emplace_back(run, i);
  }

  Counts total;
  for (const auto &s : shards) total.Add(s);

  SimResult r;
  r.num_tasks = total.tasks;
  r.vanilla_errors = total.vanilla_errors;
  r.layered_errors = total.layered_errors;
  r.exhausted = total.exhausted;
  r.backend_calls = total.calls;
  r.claims = total.claims;
  r.verified_claims = total.verified;
  r.vanilla_error_rate = Rate(total.vanilla_errors, total.tasks);
  r.layered_error_rate = Rate(total.layered_errors, total.tasks);
  r.exhausted_rate = Rate(total.exhausted, total.tasks);
  r.mean_backend_calls = Rate(total.calls, total.tasks);
  r.quality = Rate(total.verified, total.claims);
  return r;
}

double RateSigma(double rate, std::int64_t n) {
  if (n <= 0) return 0.0;
  return std::sqrt(rate * (1.0 - rate) / static_cast<double>(n));
}

double DifferenceSigma(double rate_a, double rate_b, std::int64_t n) {
  return std::hypot(RateSigma(rate_a, n), RateSigma(rate_b, n));
}

std::string_view Name(SweepParam param) {
  switch (param) {
    case SweepParam::kErrorProb: return "p";
    case SweepParam::kDetectionProb: return "q";
    case SweepParam::kNumLayers: return "N";
    case SweepParam::kMaxRefinements: return "R";
  }
  return "?";
}

SweepParam ParseSweepParam(std::string_view name) {
  if (name == "p" || name == "error_prob") return SweepParam::kErrorProb;
  if (name == "q" || name == "detection_prob") return SweepParam::kDetectionProb;
  if (name == "N" || name == "num_layers") return SweepParam::kNumLayers;
  if (name == "R" || name == "max_refinements") {
    return SweepParam::kMaxRefinements;
  }
  Bad(fmt::format("unknown sweep parameter '{}' (expected p, q, N or R)",
                  name));
}

std::vector<SweepRow> Sweep(const SimConfig &base, SweepParam param,
                            const std::vector<double> &values) {
  base.Validate();
  std::vector<SimConfig> configs;
  for (double v : values) {
    SimConfig c = base;
    switch (param) {
      case SweepParam::kErrorProb:
        c.error_prob = v;
        break;
      case SweepParam::kDetectionProb:
        c.detection_prob = v;
        break;
      case SweepParam::kNumLayers:
      case SweepParam::kMaxRefinements: {
        if (!std::isfinite(v) || v != std::floor(v) || std::abs(v) > 1e6) {
          Bad(fmt::format("{} takes integer values, got {}", Name(param), v));
        }
        int i = static_cast<int>(v);
        (param == SweepParam::kNumLayers ? c.num_layers : c.max_refinements) = i;
        break;
      }
    }
    c.Validate();
    configs.push_back(c);
  }

  std::vector<SweepRow> rows;
  rows.reserve(values.size());
  for (size_t i = 0; i < values.size(); ++i) {
    rows.push_back({values[i], Simulate(configs[i]), Analytic(configs[i])});
  }
  return rows;
}

std::string SweepCsv(SweepParam param, const std::vector<SweepRow> &rows) {
  std::string out =
      "param,value,vanilla_err,layered_err,layered_err_analytic,exhausted,"
      "quality,mean_calls\n";
  for (const auto &row : rows) {
    out += fmt::format("{},{},{},{},{},{},{},{}\n", CsvField(Name(param)),
                       Num(row.value),
                       Num(row.simulated.vanilla_error_rate),
                       Num(row.simulated.layered_error_rate),
                       Num(row.analytic.layered_error_rate),
                       Num(row.simulated.exhausted_rate),
                       Num(row.simulated.quality),
                       Num(row.simulated.mean_backend_calls));
  }
  return out;
}

void to_json(nlohmann::json &j, const SimConfig &v) {
  j = nlohmann::json{{"num_tasks", v.num_tasks},
                     {"num_layers", v.num_layers},
                     {"error_prob", v.error_prob},
                     {"detection_prob", v.detection_prob},
                     {"max_refinements", v.max_refinements},
                     {"seed", v.seed}};
}

void from_json(const nlohmann::json &j, SimConfig &v) {
  if (!j.is_object()) Bad("simulation config must be a JSON object");
  auto read = [&](std::initializer_list<const char *> keys, auto &field) {
    for (const char *key : keys) {
      if (!j.contains(key)) continue;
      try {
        j.at(key).get_to(field);
      } catch (const nlohmann::json::exception &) {
        Bad(fmt::format("field '{}' has the wrong type", key));
      }
      return;
    }
  };
  read({"num_tasks", "tasks"}, v.num_tasks);
  read({"num_layers", "N"}, v.num_layers);
  read({"error_prob", "p"}, v.error_prob);
  read({"detection_prob", "q"}, v.detection_prob);
  read({"max_refinements", "R"}, v.max_refinements);
  read({"seed"}, v.seed);
}

void to_json(nlohmann::json &j, const SimResult &v) {
  j = nlohmann::json{{"vanilla_error_rate", v.vanilla_error_rate},
                     {"layered_error_rate", v.layered_error_rate},
                     {"exhausted_rate", v.exhausted_rate},
                     {"mean_backend_calls", v.mean_backend_calls},
                     {"quality", v.quality}};
  if (v.num_tasks > 0) {
    j["counts"] = {{"tasks", v.num_tasks},
                   {"vanilla_errors", v.vanilla_errors},
                   {"layered_errors", v.layered_errors},
                   {"exhausted", v.exhausted},
                   {"backend_calls", v.backend_calls},
                   {"claims", v.claims},
                   {"verified_claims", v.verified_claims}};
  }
}

}  // namespace layercot::sim
