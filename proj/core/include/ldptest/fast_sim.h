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

// Sufficient-statistic simulators. Each draws, in one shot, exactly the
// counts a test reads from a privatized batch, with the same joint law as
// encoding every user separately. They make large-n Monte-Carlo runs cheap;
// the per-user encoders remain the reference path.

#ifndef LDPTEST_FAST_SIM_H_
#define LDPTEST_FAST_SIM_H_

#include <cstdint>

#include "absl/status/statusor.h"
#include "ldptest/distribution.h"
#include "ldptest/independence.h"
#include "ldptest/mechanisms.h"
#include "ldptest/random.h"
#include "ldptest/uniformity.h"
#include "ldptest/verdict.h"

namespace ldptest {

// Per-bit one counts of n RAPPOR reports of i.i.d. samples from p.
RapporCounts SimulateRapporCounts(const Distribution& p, int64_t n,
                                  const PrivacyBudget& budget, Rng& rng);

absl::StatusOr<Verdict> SimulateRapporUniformity(const Distribution& p,
                                                 int64_t n,
                                                 const PrivacyBudget& budget,
                                                 double gamma, Rng& rng);

absl::StatusOr<Verdict> SimulateHrUniformity(const Distribution& p, int64_t n,
                                             const PrivacyBudget& budget,
                                             double gamma, Rng& rng);

// Disjoint mini-batches of floor(n / T) users each.
absl::StatusOr<Verdict> SimulateRaptorUniformity(
    const Distribution& p, int64_t n, const PrivacyBudget& budget,
    double gamma, const RaptorUniformityConfig& config, Rng& rng);

// Learns the product reference from n1 user pairs.
absl::StatusOr<LearnedProduct> SimulateLearnProduct(const JointDistribution& p,
                                                    int64_t n1,
                                                    const PrivacyBudget& budget,
                                                    Rng& rng);

// n1 <= 0 selects n / 4.
absl::StatusOr<Verdict> SimulateHrIndependence(const JointDistribution& p,
                                               int64_t n,
                                               const PrivacyBudget& budget,
                                               double gamma, int64_t n1,
                                               Rng& rng);

absl::StatusOr<Verdict> SimulateRaptorIndependence(
    const JointDistribution& p, int64_t n, const PrivacyBudget& budget,
    double gamma, const RaptorIndependenceConfig& config, Rng& rng);

}  // namespace ldptest

#endif  // LDPTEST_FAST_SIM_H_
