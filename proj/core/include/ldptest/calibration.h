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

// Shipped constants for the end-to-end testers and the sample sizes they
// imply. Every value except the RAPPOR constant is empirical; the `calibrate`
// sweeps in sweep.h regenerate them.

#ifndef LDPTEST_CALIBRATION_H_
#define LDPTEST_CALIBRATION_H_

#include <cstdint>

#include "absl/status/statusor.h"
#include "ldptest/independence.h"
#include "ldptest/mechanisms.h"
#include "ldptest/uniformity.h"
#include "ldptest/verdict.h"
#include "nlohmann/json.hpp"

namespace ldptest {

// Defaults come from `ldptest calibrate` sweeps (k=64, gamma=0.5, eps=1 for
// uniformity; k=4, gamma=0.45, eps=1 for independence), rounded up from the
// smallest constant with both error rates <= 1/3.
struct Calibration {
  // n = c_rappor k^{3/2} / (alpha_R^2 gamma^2).
  double c_rappor = 23.0;
  // n = c_hr k^{3/2} / (alpha_H^2 gamma^2).
  double c_hr = 1.5;
  // n = c_raptor k / (alpha_H^2 gamma^2).
  double c_raptor = 1400.0;
  // n1 = c_learn k^3 / (alpha_H^4 gamma^2).
  double c_learn = 6.0;
  // n = c_hr_ind k^3 / (gamma^2 eps^4).
  double c_hr_ind = 300.0;
  // n = c_raptor_ind k^2 / (gamma^2 eps^2).
  double c_raptor_ind = 55000.0;
  // Fraction of users n1 / n that feed each learned marginal.
  double n1_fraction = 0.25;
  RaptorUniformityConfig raptor;
  RaptorIndependenceConfig raptor_ind;

  friend bool operator==(const Calibration& a, const Calibration& b);
};

nlohmann::json CalibrationToJson(const Calibration& c);
// Missing keys keep their defaults.
absl::StatusOr<Calibration> CalibrationFromJson(const nlohmann::json& j);

// k^{3/2} / (alpha^2 gamma^2) and friends: the rate each constant multiplies.
double SampleRate(TestKind test, int k, const PrivacyBudget& budget,
                  double gamma);
double LearnRate(int k, const PrivacyBudget& budget, double gamma);

// Rate times the matching constant, rounded up. RAPTOR sizes are rounded up
// to a multiple of the repetition count.
int64_t CalibratedSampleSize(TestKind test, int k,
                             const PrivacyBudget& budget, double gamma,
                             const Calibration& c);
int64_t CalibratedLearnSize(int k, const PrivacyBudget& budget, double gamma,
                            const Calibration& c);

}  // namespace ldptest

#endif  // LDPTEST_CALIBRATION_H_
