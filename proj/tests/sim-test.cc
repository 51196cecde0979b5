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

#include <cmath>
#include <sstream>

#include "gtest/gtest.h"
#include "layercot/core/error.h"

namespace layercot::sim {
namespace {

// Exhaustive enumeration of per-layer outcomes (attempt by attempt) and of
// their combinations across layers. Independent of the closed forms.
struct Enumerated {
  double success = 0, wrong = 0, exhausted = 0, calls = 0;
};

Enumerated Enumerate(int n, double p, double q, int r) {
  struct Branch {
    double prob;
    int kind;  // 0 correct, 1 wrong, 2 exhausted
    int attempts;
  };
  std::vector<Branch> branches;
  double reach = 1.0;
  for (int k = 1; k <= r + 1; ++k) {
    branches.push_back({reach * (1 - p), 0, k});
    branches.push_back({reach * p * (1 - q), 1, k});
    reach *= p * q;
  }
  branches.push_back({reach, 2, r + 1});

  Enumerated out;
  std::function<void(int, double, bool, int)> walk = [&](int layer, double prob,
                                                         bool wrong, int calls) {
    if (layer == n) {
      (wrong ? out.wrong : out.success) += prob;
      out.calls += prob * (calls + 1);  // integrate
      return;
    }
    for (const auto &b : branches) {
      if (b.kind == 2) {
        out.exhausted += prob * b.prob;
        out.calls += prob * b.prob * (calls + b.attempts);
      } else {
        walk(layer + 1, prob * b.prob, wrong || b.kind == 1, calls + b.attempts);
      }
    }
  };
  walk(0, 1.0, false, 1);  // plan
  return out;
}

SimConfig Config(int n, double p, double q, int r, std::int64_t tasks = 1000) {
  SimConfig c;
  c.num_layers = n;
  c.error_prob = p;
  c.detection_prob = q;
  c.max_refinements = r;
  c.num_tasks = tasks;
  return c;
}

TEST(SimAnalyticTest, LayerOutcomesSumToOne) {
  for (double p : {0.0, 0.05, 0.3, 0.7, 1.0}) {
    for (double q : {0.0, 0.4, 0.9, 1.0}) {
      for (int r : {0, 1, 2, 5}) {
        auto o = LayerOutcome(Config(1, p, q, r));
        EXPECT_NEAR(o.accept_correct + o.accept_wrong + o.exhausted, 1.0, 1e-12)
            << p << " " << q << " " << r;
      }
    }
  }
}

TEST(SimAnalyticTest, MatchesExhaustiveEnumeration) {
  for (int n : {1, 2, 3, 5}) {
    for (double p : {0.0, 0.1, 0.35, 0.8}) {
      for (double q : {0.0, 0.5, 0.9, 1.0}) {
        for (int r : {0, 1, 3}) {
          auto a = Analytic(Config(n, p, q, r));
          auto e = Enumerate(n, p, q, r);
          EXPECT_NEAR(a.layered_error_rate, e.wrong, 1e-12);
          EXPECT_NEAR(a.exhausted_rate, e.exhausted, 1e-12);
          EXPECT_NEAR(1 - a.layered_error_rate - a.exhausted_rate, e.success, 1e-12);
          EXPECT_NEAR(a.mean_backend_calls, e.calls, 1e-9);
          EXPECT_NEAR(a.vanilla_error_rate, 1 - std::pow(1 - p, n), 1e-12);
        }
      }
    }
  }
}

TEST(SimAnalyticTest, WorkedPoint) {
  auto a = Analytic(Config(3, 0.2, 1.0, 1));
  EXPECT_NEAR(LayerOutcome(Config(3, 0.2, 1.0, 1)).accept_correct, 0.96, 1e-12);
  EXPECT_NEAR(1 - a.layered_error_rate - a.exhausted_rate, 0.884736, 1e-6);
  EXPECT_NEAR(1 - a.vanilla_error_rate, 0.512, 1e-12);
  EXPECT_NEAR(a.layered_error_rate, 0.0, 1e-12);
}

TEST(SimAnalyticTest, Degenerate) {
  // Perfect reasoning: no errors, one attempt per layer.
  auto perfect = Analytic(Config(4, 0.0, 0.5, 2));
  EXPECT_EQ(perfect.layered_error_rate, 0.0);
  EXPECT_EQ(perfect.exhausted_rate, 0.0);
  EXPECT_DOUBLE_EQ(perfect.mean_backend_calls, 6.0);
  // Blind verification: layered equals vanilla.
  for (double p : {0.1, 0.5, 0.9}) {
    auto blind = Analytic(Config(4, p, 0.0, 2));
    EXPECT_NEAR(blind.layered_error_rate, blind.vanilla_error_rate, 1e-12);
    EXPECT_EQ(blind.exhausted_rate, 0.0);
  }
}

TEST(SimMonteCarloTest, AgreesWithAnalyticWithinThreeSigma) {
  for (double p : {0.05, 0.2, 0.4}) {
    for (double q : {0.0, 0.6, 0.9}) {
      auto c = Config(4, p, q, 2, 20000);
      auto sim = Simulate(c);
      auto a = Analytic(c);
      const auto n = c.num_tasks;
      EXPECT_LE(std::abs(sim.layered_error_rate - a.layered_error_rate),
                3 * RateSigma(a.layered_error_rate, n) + 1e-12);
      EXPECT_LE(std::abs(sim.exhausted_rate - a.exhausted_rate),
                3 * RateSigma(a.exhausted_rate, n) + 1e-12);
      EXPECT_LE(std::abs(sim.vanilla_error_rate - a.vanilla_error_rate),
                3 * RateSigma(a.vanilla_error_rate, n) + 1e-12);
      EXPECT_NEAR(sim.mean_backend_calls, a.mean_backend_calls, 0.05);
      EXPECT_NEAR(sim.quality, a.quality, 0.02);
    }
  }
}

TEST(SimMonteCarloTest, CountsAreConsistent) {
  auto r = Simulate(Config(3, 0.3, 0.7, 1, 5000));
  EXPECT_EQ(r.num_tasks, 5000);
  EXPECT_LE(r.layered_errors + r.exhausted, r.num_tasks);
  EXPECT_DOUBLE_EQ(r.layered_error_rate, r.layered_errors / 5000.0);
  // At least plan plus one attempt per task, at most everything.
  EXPECT_GE(r.backend_calls, 2 * r.num_tasks);
  EXPECT_LE(r.backend_calls, r.num_tasks * (1 + 3 * 2 + 1));
  EXPECT_LE(r.verified_claims, r.claims);
}

TEST(SimMonteCarloTest, DeterministicAndThreadInvariant) {
  auto c = Config(5, 0.2, 0.9, 2, 50000);
  c.threads = 1;
  auto one = Simulate(c);
  EXPECT_EQ(Simulate(c), one);
  c.threads = 4;
  EXPECT_EQ(Simulate(c), one);
  c.threads = 7;
  EXPECT_EQ(Simulate(c), one);
  c.seed = 2;
  EXPECT_FALSE(Simulate(c) == one);
}

TEST(SimMonteCarloTest, SingleTask) {
  auto r = Simulate(Config(2, 0.5, 0.5, 1, 1));
  EXPECT_EQ(r.num_tasks, 1);
  for (double rate : {r.layered_error_rate, r.exhausted_rate, r.vanilla_error_rate}) {
    EXPECT_TRUE(rate == 0.0 || rate == 1.0);
  }
}

TEST(SimMonteCarloTest, RejectsBadParameters) {
  auto expect_bad = [](SimConfig c) {
    try {
      Simulate(c);
      FAIL();
    } catch (const Error &e) {
      EXPECT_EQ(e.code(), ErrorCode::kBadParameter);
    }
  };
  expect_bad(Config(0, 0.1, 0.5, 1));
  expect_bad(Config(2, -0.1, 0.5, 1));
  expect_bad(Config(2, 0.1, 1.5, 1));
  expect_bad(Config(2, 0.1, std::nan(""), 1));
  expect_bad(Config(2, 0.1, 0.5, -1));
  expect_bad(Config(2, 0.1, 0.5, 1, 0));
}

TEST(SimSweepTest, LayeredErrorFallsWithDetection) {
  auto rows = Sweep(Config(5, 0.2, 0.0, 2, 1000), SweepParam::kDetectionProb,
                    {0.0, 0.25, 0.5, 0.75, 1.0});
  ASSERT_EQ(rows.size(), 5u);
  for (size_t i = 1; i < rows.size(); ++i) {
    EXPECT_LT(rows[i].analytic.layered_error_rate,
              rows[i - 1].analytic.layered_error_rate);
    EXPECT_EQ(rows[i].simulated.num_tasks, 1000);
  }
}

TEST(SimSweepTest, LayeredNeverWorseThanVanillaAnalytically) {
  for (double p : {0.01, 0.1, 0.3, 0.6, 0.9}) {
    for (double q : {0.0, 0.3, 0.9, 1.0}) {
      for (int r : {0, 2}) {
        auto a = Analytic(Config(5, p, q, r));
        EXPECT_LE(a.layered_error_rate, a.vanilla_error_rate + 1e-12);
      }
    }
  }
}

TEST(SimSweepTest, IntegerParametersOnly) {
  EXPECT_THROW(Sweep(Config(5, 0.2, 0.9, 2), SweepParam::kNumLayers, {1.5}), Error);
  auto rows = Sweep(Config(5, 0.2, 0.9, 2, 100), SweepParam::kMaxRefinements, {0, 3});
  EXPECT_EQ(rows.size(), 2u);
  EXPECT_TRUE(Sweep(Config(5, 0.2, 0.9, 2), SweepParam::kErrorProb, {}).empty());
}

TEST(SimSweepTest, CsvHasAHeaderAndOneRowPerValue) {
  auto rows = Sweep(Config(5, 0.2, 0.9, 2, 200), SweepParam::kErrorProb, {0.1, 0.2});
  const std::string csv = SweepCsv(SweepParam::kErrorProb, rows);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line,
            "param,value,vanilla_err,layered_err,layered_err_analytic,exhausted,"
            "quality,mean_calls");
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 7);
    EXPECT_EQ(line.rfind("p,", 0), 0u);
  }
  EXPECT_EQ(n, 2);
}

TEST(SimSweepTest, ParamNames) {
  EXPECT_EQ(ParseSweepParam("q"), SweepParam::kDetectionProb);
  EXPECT_EQ(ParseSweepParam("num_layers"), SweepParam::kNumLayers);
  EXPECT_THROW(ParseSweepParam("x"), Error);
}

TEST(SimJsonTest, ConfigAcceptsShortNames) {
  auto c = nlohmann::json::parse(R"({"p": 0.3, "q": 0.5, "N": 4, "R": 1, "tasks": 10})")
               .get<SimConfig>();
  EXPECT_EQ(c.num_layers, 4);
  EXPECT_EQ(c.max_refinements, 1);
  EXPECT_DOUBLE_EQ(c.error_prob, 0.3);
  EXPECT_EQ(c.num_tasks, 10);
  EXPECT_THROW(nlohmann::json::parse(R"({"p": "x"})").get<SimConfig>(), Error);
}

}  // namespace
}  // namespace layercot::sim
