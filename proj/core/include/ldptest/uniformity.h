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

// Uniformity testers over privatized data: the RAPPOR collision statistic,
// the Hadamard Response l2 test, and the public-coin RAPTOR test, plus the
// binary bias estimator they build on.

#ifndef LDPTEST_UNIFORMITY_H_
#define LDPTEST_UNIFORMITY_H_

#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "ldptest/batch.h"
#include "ldptest/mechanisms.h"
#include "ldptest/random.h"
#include "ldptest/verdict.h"

namespace ldptest {

// N_x = number of users whose bit x is set.
struct RapporCounts {
  std::vector<int64_t> ones;
  int64_t n = 0;
};

absl::StatusOr<RapporCounts> CountRappor(const PrivatizedBatch& batch);

// T = sum_x [(N_x - (n-1) lambda)^2 - N_x] + k (n-1) lambda^2 with
// lambda = alpha_R/k + beta_R. E[T] = n(n-1) alpha_R^2 ||p - u||^2.
absl::StatusOr<double> RapporStatistic(const RapporCounts& counts,
                                       const PrivacyBudget& budget);

// n(n-1) alpha_R^2 gamma^2 / k.
double RapporThreshold(int64_t n, int k, const PrivacyBudget& budget,
                       double gamma);

// Uniform iff T < n(n-1) alpha_R^2 gamma^2 / k.
absl::StatusOr<Verdict> RapporUniformityTest(const RapporCounts& counts,
                                             const PrivacyBudget& budget,
                                             double gamma);
absl::StatusOr<Verdict> RapporUniformityTest(const PrivatizedBatch& batch,
                                             double gamma);

// m = floor(0.9 min(len_a, len_b)).
int64_t PoissonizedSize(int64_t len_a, int64_t len_b);

// Z = sum_i [(N_i - M_i)^2 - N_i - M_i]; close iff Z < m^2 gamma_l2^2 / 2.
Verdict L2ClosenessFromCounts(std::span<const int64_t> counts_a,
                              std::span<const int64_t> counts_b, int64_t m,
                              double gamma_l2);

// Keeps the first min(Poisson(m), len) samples of each side, then applies
// L2ClosenessFromCounts.
absl::StatusOr<Verdict> L2ClosenessTest(std::span<const int> samples_a,
                                        std::span<const int> samples_b,
                                        int alphabet, double gamma_l2,
                                        Rng& rng);

// l2 gap between HR output pmfs of uniform and a gamma-far input:
// 2 alpha_H gamma / sqrt(k K).
double HrL2Gap(int k, const PrivacyBudget& budget, double gamma);

// Compares HR messages against as many synthetic draws from q*. Uniform iff
// the l2 test says close.
absl::StatusOr<Verdict> HrUniformityTest(const PrivatizedBatch& batch,
                                         double gamma, Rng& rng);

// (mean - 1/(e^eps+1)) (e^eps+1)/(e^eps-1). Unclamped.
double BiasEstimateFromCount(int64_t ones, int64_t n,
                             const PrivacyBudget& budget);
absl::StatusOr<double> BiasEstimate(std::span<const int32_t> bits,
                                    const PrivacyBudget& budget);

// 8 ((e^eps+1)/(e^eps-1))^2 ln(2/delta) / gamma_prime^2, rounded up.
int64_t HoeffdingSampleSize(const PrivacyBudget& budget, double gamma_prime,
                            double delta);

struct BiasTestOptions {
  // 0 keeps the single Hoeffding threshold. An odd count B > 0 splits the
  // bits into B equal batches, thresholds each, and takes a majority vote.
  int majority_batches = 0;
};

// Biased iff |rho_hat - 1/2| > gamma_prime / 2.
absl::StatusOr<Verdict> BiasTestFromCount(int64_t ones, int64_t n,
                                          const PrivacyBudget& budget,
                                          double gamma_prime, double delta);
absl::StatusOr<Verdict> BiasTest(std::span<const int32_t> bits,
                                 const PrivacyBudget& budget,
                                 double gamma_prime, double delta,
                                 const BiasTestOptions& options = {});

struct RaptorUniformityConfig {
  // Detection-probability constant; the worst-case analysis gives 1/477.
  double c = 0.05;
  int repetitions = 48;
  // Each user sends one bit per repetition at eps/T instead of joining one
  // disjoint mini-batch at full eps.
  bool parallel_bits = false;
  BiasTestOptions bias;
};

// delta = c / (2 (1 + c)).
double RaptorDelta(double c);
// gamma / sqrt(5 k).
double RaptorGammaPrime(int k, double gamma);
// 1 - (delta + c/4).
double RaptorTauThreshold(double c);

// Curator side on a RAPTOR batch. Uniform iff the fraction of unbiased
// mini-batches exceeds 1 - (delta + c/4).
absl::StatusOr<Verdict> RaptorUniformityTest(
    const PrivatizedBatch& batch, double gamma,
    const RaptorUniformityConfig& config = {});

// Full protocol on raw samples: coins, encoding, then the curator test.
// n must be divisible by the repetition count (disjoint mode).
absl::StatusOr<Verdict> RaptorUniformityTest(
    std::span<const int> samples, int k, const PrivacyBudget& budget,
    double gamma, const RaptorUniformityConfig& config, Rng& rng);

// Counts-level decision shared by both entry points: per repetition t,
// `ones[t]` of `m` bits at `budget`.
Verdict RaptorDecision(std::span<const int64_t> ones, int64_t m, int k,
                       const PrivacyBudget& budget, double gamma,
                       const RaptorUniformityConfig& config);

}  // namespace ldptest

#endif  // LDPTEST_UNIFORMITY_H_
