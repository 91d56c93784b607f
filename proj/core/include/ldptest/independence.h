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

// Independence testers over [k] x [k]: the private-coin Hadamard pipeline
// (learn the product of output marginals, then a chi-square closeness test)
// and the public-coin bivariate RAPTOR test.

#ifndef LDPTEST_INDEPENDENCE_H_
#define LDPTEST_INDEPENDENCE_H_

#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "ldptest/batch.h"
#include "ldptest/distribution.h"
#include "ldptest/mechanisms.h"
#include "ldptest/random.h"
#include "ldptest/verdict.h"
#include "nlohmann/json.hpp"

namespace ldptest {

struct PairSamples {
  // (Z1 of user 2i, Z2 of user 2i+1) for i < n1: draws from the product of
  // the two output marginals.
  std::vector<std::pair<int, int>> product;
  // Each remaining user's own (Z1, Z2).
  std::vector<std::pair<int, int>> joint;
};

// Requires an hr-pair batch with n >= 2 n1 + 1.
absl::StatusOr<PairSamples> PairTransformSamples(const PrivatizedBatch& batch,
                                                 int64_t n1);

// (count_z + 1) / (n + K) with n = sum of counts.
Distribution Add1Estimate(std::span<const int64_t> counts);

// Marginal floor used by LearnProduct. Its square keeps every cell of the
// product above 1/(50 K^2).
inline double MarginalFloor(int K) { return 1.0 / (7.0 * K); }

class LearnedProduct {
 public:
  // Raises every entry of each marginal to at least MarginalFloor(K) while
  // rescaling the rest to keep unit mass.
  static LearnedProduct FromMarginals(const Distribution& q1,
                                      const Distribution& q2);

  int output_size() const { return q1_.k(); }
  const Distribution& q1() const { return q1_; }
  const Distribution& q2() const { return q2_; }
  bool floor_applied() const { return floor_applied_; }
  double at(int z1, int z2) const { return q1_[z1] * q2_[z2]; }
  double MinCell() const;
  JointDistribution Joint() const;

 private:
  LearnedProduct(Distribution q1, Distribution q2, bool floored)
      : q1_(std::move(q1)), q2_(std::move(q2)), floor_applied_(floored) {}

  Distribution q1_;
  Distribution q2_;
  bool floor_applied_;
};

nlohmann::json LearnedProductToJson(const LearnedProduct& q);

// Add-1 estimates of both coordinate marginals, then flooring.
LearnedProduct LearnProductFromCounts(std::span<const int64_t> counts1,
                                      std::span<const int64_t> counts2);
absl::StatusOr<LearnedProduct> LearnProduct(
    std::span<const std::pair<int, int>> product_samples, int K);

// alpha_H^4 gamma^2 / k^2, the chi-square accuracy the learner targets.
double LearnTargetChi2(int k, const PrivacyBudget& budget, double gamma);
// 2 alpha_H^4 gamma^2 / k^2, the chi-square gap for the closeness test.
double IndependenceGammaPrimeSq(int k, const PrivacyBudget& budget,
                                double gamma);

// S = sum_z [(N_z - m q(z))^2 - N_z] / (m q(z)) over K^2 cells, row-major.
// Far iff S > m (3/4) gamma_prime_sq. Fails if q has a cell below
// 1/(50 K^2).
absl::StatusOr<Verdict> AdkChi2FromCounts(std::span<const int64_t> counts,
                                          int64_t m, const LearnedProduct& q,
                                          double gamma_prime_sq);
// Poissonizes to m = floor(0.9 len) samples first.
absl::StatusOr<Verdict> AdkChi2Test(
    std::span<const std::pair<int, int>> samples, const LearnedProduct& q,
    double gamma_prime_sq, Rng& rng);

// Pairing, learning on n1 product pairs, and the chi-square test on the
// held-out users. n1 <= 0 selects n/4.
absl::StatusOr<Verdict> HrIndependenceTest(const PrivatizedBatch& batch,
                                           double gamma, int64_t n1,
                                           Rng& rng);

// Unbiased estimates of p(S1 x S2), p1(S1), p2(S2).
struct BinaryIndependenceEstimate {
  double joint = 0.0;
  double first = 0.0;
  double second = 0.0;
};

// `ones` holds set-bit counts of the S1 bit, the S2 bit and the S1 x S2 bit
// over m users, each randomized at budget / 3.
BinaryIndependenceEstimate BinaryIndependenceFromCounts(
    const std::array<int64_t, 3>& ones, int64_t m,
    const PrivacyBudget& budget);
// Over every user of a raptor2 batch.
absl::StatusOr<BinaryIndependenceEstimate> EstimateBinaryIndependence(
    const PrivatizedBatch& batch);

struct RaptorIndependenceConfig {
  // A repetition flags dependence iff |p~ - p~1 p~2| > c_thr gamma / k.
  double c_thr = 1.0 / 3.0;
  // Not independent iff the flagged fraction exceeds tau.
  double tau = 0.05;
  int repetitions = 100;
};

Verdict RaptorIndependenceDecision(
    std::span<const std::array<int64_t, 3>> ones, int64_t m, int k,
    const PrivacyBudget& budget, double gamma,
    const RaptorIndependenceConfig& config);
absl::StatusOr<Verdict> RaptorIndependenceTest(
    const PrivatizedBatch& batch, double gamma,
    const RaptorIndependenceConfig& config = {});
absl::StatusOr<Verdict> RaptorIndependenceTest(
    std::span<const std::pair<int, int>> samples, int k,
    const PrivacyBudget& budget, double gamma,
    const RaptorIndependenceConfig& config, Rng& rng);

}  // namespace ldptest

#endif  // LDPTEST_INDEPENDENCE_H_
