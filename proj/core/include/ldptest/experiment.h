// Copyright 2026 The ldptest Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Monte-Carlo orchestration: single trials, error rates over an n grid,
// sample-complexity search, and report emission.

#ifndef LDPTEST_EXPERIMENT_H_
#define LDPTEST_EXPERIMENT_H_

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "ldptest/calibration.h"
#include "ldptest/verdict.h"
#include "nlohmann/json.hpp"

namespace ldptest {

enum class InstanceKind {
  // Uniform over [k], or over [k] x [k] for independence tests.
  kUniform,
  // Paninski perturbation of uniform.
  kPaninski,
  // Product of two Paninski marginals; a non-uniform independent joint.
  kProductPaninski,
  kBalancedPaninskiJoint,
  // Samples read from a file, one symbol (or pair) per line.
  kFile,
};

const char* InstanceKindName(InstanceKind kind);
absl::StatusOr<InstanceKind> ParseInstanceKind(const std::string& name);

struct InstanceSpec {
  InstanceKind kind = InstanceKind::kUniform;
  // Paninski signs in {-1, +1}, k/2 of them. Empty draws fresh signs from
  // the trial stream.
  std::vector<int> theta;
  std::string path;

  std::string Label() const;
  friend bool operator==(const InstanceSpec&, const InstanceSpec&) = default;
};

struct ExperimentConfig {
  TestKind test = TestKind::kRapporUniformity;
  int k = 64;
  double epsilon = 1.0;
  double gamma = 0.5;
  InstanceSpec null_instance;
  // Empty selects the default alternative of the test: random-sign
  // Paninski, or the balanced Paninski joint.
  std::vector<InstanceSpec> alternatives;
  // Strictly increasing. Empty selects the single calibrated size.
  std::vector<int64_t> n_grid;
  int trials = 100;
  double target_error = 1.0 / 3.0;
  uint64_t seed = 1;
  Calibration calibration;
  // Encode every user instead of drawing sufficient statistics.
  bool per_user = false;
  // Worker threads; 0 uses the hardware concurrency. Results do not depend
  // on it.
  int threads = 0;

  // Null instance first, then the resolved alternatives.
  std::vector<InstanceSpec> Instances() const;
  // The grid, or the calibrated size when the grid is empty.
  std::vector<int64_t> Grid() const;
  absl::Status Validate() const;
};

nlohmann::json ConfigToJson(const ExperimentConfig& c);
// Missing keys keep their defaults.
absl::StatusOr<ExperimentConfig> ConfigFromJson(const nlohmann::json& j);

// Index of an instance in ExperimentConfig::Instances(): 0 is the null.
// Trial `t` on instance `h` draws everything from
// MakeStream(seed, t, h), so every n shares the trial's randomness.
absl::StatusOr<Verdict> RunTrial(const ExperimentConfig& config, int64_t trial,
                                 int instance = 0, int64_t n = 0);

struct Rate {
  int64_t errors = 0;
  int64_t trials = 0;
  double rate = 0.0;
  double lo = 0.0;
  double hi = 1.0;

  friend bool operator==(const Rate&, const Rate&) = default;
};

// Wilson score interval at 95%.
Rate WilsonRate(int64_t errors, int64_t trials);

struct CurvePoint {
  int64_t n = 0;
  std::string alternative;
  Rate type1;
  Rate type2;

  friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

struct ExperimentReport {
  ExperimentConfig config;
  // Sorted by n, then by alternative order.
  std::vector<CurvePoint> points;
  // Smallest evaluated n where every rate is within target; 0 if none.
  int64_t minimal_n = 0;
  bool saturated = false;
  // DeriveSeed(seed, t) for every trial index t.
  std::vector<uint64_t> trial_seeds;
  double wall_clock_seconds = 0.0;
};

// Every grid point, every instance.
absl::StatusOr<ExperimentReport> ErrorRates(const ExperimentConfig& config);

// Binary search for the smallest grid point within target, assuming error
// rates fall with n. Evaluates only the visited points.
absl::StatusOr<ExperimentReport> SampleComplexityCurve(
    const ExperimentConfig& config);

nlohmann::json ReportToJson(const ExperimentReport& r);
absl::StatusOr<ExperimentReport> ReportFromJson(const nlohmann::json& j);

enum class ReportFormat { kCsv, kJson };
absl::StatusOr<ReportFormat> ParseReportFormat(const std::string& name);

// CSV: header plus one row per curve point. JSON: ReportToJson, indented.
std::string EmitReport(const ExperimentReport& r, ReportFormat format);

// Runs fn(0), ..., fn(count - 1) on up to `threads` workers (0 = hardware
// concurrency). Each index runs exactly once; callers store results by index.
void ParallelFor(int64_t count, int threads,
                 const std::function<void(int64_t)>& fn);

}  // namespace ldptest

#endif  // LDPTEST_EXPERIMENT_H_
