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

// Bernoulli error-injection model of vanilla vs. layered reasoning.
//
// Each layer attempt is wrong with probability p. Vanilla keeps every layer
// unchecked. The layered pipeline verifies each attempt: a wrong attempt is
// caught with probability q and retried while the budget R allows; a layer
// still caught after R refinements exhausts the budget and fails the task.
// A task succeeds when every layer is accepted correct.
//
// With S = sum_{k=0..R} (pq)^k, one layer ends in exactly one of
//   accept-correct  a = (1-p) S
//   accept-wrong    b = p (1-q) S
//   exhausted       e = (pq)^(R+1)
// and the task outcome follows from N independent layers that stop at the
// first exhaustion.

#ifndef LAYERCOT_SIM_SIM_H_
#define LAYERCOT_SIM_SIM_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace layercot::sim {

struct SimConfig {
  std::int64_t num_tasks = 1000;
  int num_layers = 5;
  double error_prob = 0.2;
  double detection_prob = 0.9;
  int max_refinements = 2;
  std::uint64_t seed = 1;
  // Worker threads for simulate; 0 picks the hardware concurrency. Results
  // do not depend on it.
  int threads = 0;

  // Throws Error(kBadParameter).
  void Validate() const;
};

struct SimResult {
  double vanilla_error_rate = 0.0;
  double layered_error_rate = 0.0;
  double exhausted_rate = 0.0;
  double mean_backend_calls = 0.0;
  double quality = 0.0;

  // Raw Monte Carlo counts; zero for analytic results.
  std::int64_t num_tasks = 0;
  std::int64_t vanilla_errors = 0;
  std::int64_t layered_errors = 0;
  std::int64_t exhausted = 0;
  std::int64_t backend_calls = 0;
  std::int64_t claims = 0;
  std::int64_t verified_claims = 0;

  bool operator==(const SimResult &other) const = default;
};

struct LayerProbabilities {
  double accept_correct = 0.0;
  double accept_wrong = 0.0;
  double exhausted = 0.0;
  // Expected attempts per layer that is reached.
  double expected_attempts = 0.0;
};

LayerProbabilities LayerOutcome(const SimConfig &config);

// Closed-form rates. Layered error counts tasks that finish with at least
// one wrong layer; exhausted tasks are counted separately.
SimResult Analytic(const SimConfig &config);

// Monte Carlo over config.num_tasks tasks. Task i draws from its own
// generator seeded from (seed, i), so the result depends on the config only.
SimResult Simulate(const SimConfig &config);

// Standard deviation of (rate_a - rate_b) for two independent binomial
// estimates over n trials each.
double DifferenceSigma(double rate_a, double rate_b, std::int64_t n);

// Standard deviation of a binomial rate estimate over n trials.
double RateSigma(double rate, std::int64_t n);

enum class SweepParam { kErrorProb, kDetectionProb, kNumLayers, kMaxRefinements };

std::string_view Name(SweepParam param);
// Accepts "p", "q", "N", "R". Throws Error(kBadParameter).
SweepParam ParseSweepParam(std::string_view name);

struct SweepRow {
  double value = 0.0;
  SimResult simulated;
  SimResult analytic;
};

// One Simulate and one Analytic per value. Throws Error(kBadParameter) for
// values outside the parameter's domain.
std::vector<SweepRow> Sweep(const SimConfig &base, SweepParam param,
                            const std::vector<double> &values);

// Header plus one row per sweep row, LF line endings.
std::string SweepCsv(SweepParam param, const std::vector<SweepRow> &rows);

void to_json(nlohmann::json &j, const SimConfig &v);
// Missing keys keep their defaults. Accepts the long names (error_prob, ...)
// and the symbols (p, q, N, R).
void from_json(const nlohmann::json &j, SimConfig &v);
void to_json(nlohmann::json &j, const SimResult &v);

}  // namespace layercot::sim

#endif  // LAYERCOT_SIM_SIM_H_
