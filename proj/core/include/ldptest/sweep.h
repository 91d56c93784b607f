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

// Calibration sweeps that regenerate the shipped constants in Calibration.

#ifndef LDPTEST_SWEEP_H_
#define LDPTEST_SWEEP_H_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "ldptest/distribution.h"
#include "ldptest/experiment.h"
#include "ldptest/mechanisms.h"
#include "nlohmann/json.hpp"

namespace ldptest {

struct SweepResult {
  std::string constant;
  // Smallest swept value meeting the target; 0 when saturated.
  double value = 0.0;
  bool saturated = false;
  // (swept value, worst error or success rate) for every evaluated value.
  std::vector<std::pair<double, double>> points;
};

nlohmann::json SweepResultToJson(const SweepResult& r);

// Geometric grid lo, lo*r, ... <= hi with r = 2^(1/steps_per_doubling).
std::vector<double> GeometricGrid(double lo, double hi, int steps_per_doubling);

// Smallest constant C in `grid` whose size C * SampleRate meets the target
// error on every instance of `base`. base.n_grid is ignored.
absl::StatusOr<SweepResult> CalibrateSampleConstant(
    const ExperimentConfig& base, const std::vector<double>& grid);

// chi^2(T(p1 x p2), learned product) for one learned product.
absl::StatusOr<double> LearnedProductChi2(const JointDistribution& p,
                                          const LearnedProduct& q,
                                          const PrivacyBudget& budget);

// Fraction of `trials` runs at n1 users whose learned product reaches
// chi^2 <= LearnTargetChi2.
absl::StatusOr<Rate> LearnSuccessRate(const JointDistribution& p, int64_t n1,
                                      const PrivacyBudget& budget,
                                      double gamma, int trials, uint64_t seed,
                                      int threads = 0);

// Smallest c_learn in `grid` with success rate >= target_success.
absl::StatusOr<SweepResult> CalibrateLearnConstant(
    const JointDistribution& p, const PrivacyBudget& budget, double gamma,
    int trials, uint64_t seed, double target_success,
    const std::vector<double>& grid, int threads = 0);

// c_thr as a quantile (0.25, 0.5 or 0.75) of
// k |p(S1 x S2) - p1(S1) p2(S2)| / gamma over coin pairs, for the balanced
// Paninski joint. points holds (quantile, c_thr) and
// (c_thr, P(value >= c_thr)).
absl::StatusOr<SweepResult> CalibrateDependenceThreshold(int k, double gamma,
                                                         double quantile);

}  // namespace ldptest

#endif  // LDPTEST_SWEEP_H_
