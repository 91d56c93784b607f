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

#include <array>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "gtest/gtest.h"
#include "ldptest/batch.h"
#include "ldptest/distribution.h"
#include "ldptest/fast_sim.h"
#include "ldptest/hadamard.h"
#include "ldptest/independence.h"
#include "ldptest/mechanisms.h"
#include "ldptest/random.h"
#include "ldptest/sampling.h"
#include "test_util.h"

namespace ldptest {
namespace {

using ::ldptest::testing::Unwrap;

// Pearson statistic against expected counts and its chi-square tail via the
// Wilson-Hilferty approximation.
double ChiSquareUpperTail(std::span<const int64_t> counts,
                          std::span<const double> pmf) {
  double n = 0;
  for (int64_t c : counts) n += static_cast<double>(c);
  double x2 = 0.0;
  for (size_t i = 0; i < counts.size(); ++i) {
    const double e = n * pmf[i];
    x2 += (counts[i] - e) * (counts[i] - e) / e;
  }
  const double d = static_cast<double>(counts.size() - 1);
  const double z =
      (std::cbrt(x2 / d) - (1 - 2 / (9 * d))) / std::sqrt(2 / (9 * d));
  return 0.5 * std::erfc(z / std::sqrt(2.0));
}

TEST(PairTransformTest, IndexBookkeeping) {
  const std::vector<int32_t> msgs = {1, 2, 3, 4, 5, 6};
  const PrivatizedBatch batch =
      Unwrap(PrivatizedBatch::Create(MechanismKind::kHrPair, 4, 1.0, msgs));
  const PairSamples s = Unwrap(PairTransformSamples(batch, 1));
  ASSERT_EQ(s.product.size(), 1u);
  EXPECT_EQ(s.product[0], std::make_pair(1, 4));
  ASSERT_EQ(s.joint.size(), 1u);
  EXPECT_EQ(s.joint[0], std::make_pair(5, 6));
  EXPECT_FALSE(PairTransformSamples(batch, 2).ok());
}

TEST(PairTransformTest, ProductPairsFollowMarginalProduct) {
  const PrivacyBudget b = Unwrap(PrivacyBudget::Create(1.0));
  const int k = 4;
  const HadamardCode code = Unwrap(HadamardCode::Create(k));
  const JointDistribution p = Unwrap(BalancedPaninskiJoint(k, 0.45));
  const auto [p1, p2] = Marginals(p);
  const Distribution q1 = Unwrap(PushforwardHr(code, p1, b));
  const Distribution q2 = Unwrap(PushforwardHr(code, p2, b));
  const JointDistribution want = Unwrap(Product(q1, q2));
  const JointDistribution joint_want = Unwrap(PushforwardT(code, p, b));
  Rng rng(3);
  const int64_t n1 = 100000;
  const std::vector<std::pair<int, int>> xs = SampleJoint(p, 2 * n1 + n1, rng);
  const PairSamples s = Unwrap(
      PairTransformSamples(Unwrap(EncodePairBatch(k, b, xs, rng)), n1));
  const int K = code.output_size();
  std::vector<int64_t> prod(K * K, 0), held(K * K, 0);
  for (auto [a, c] : s.product) ++prod[a * K + c];
  for (auto [a, c] : s.joint) ++held[a * K + c];
  EXPECT_GT(ChiSquareUpperTail(prod, want.pmf()), 0.001);
  EXPECT_GT(ChiSquareUpperTail(held, joint_want.pmf()), 0.001);
}

TEST(Add1Test, SmallCases) {
  const std::array<int64_t, 3> c = {3, 1, 0};
  const Distribution q = Add1Estimate(c);
  EXPECT_NEAR(q[0], 4.0 / 7, 1e-15);
  EXPECT_NEAR(q[1], 2.0 / 7, 1e-15);
  EXPECT_NEAR(q[2], 1.0 / 7, 1e-15);
  const std::array<int64_t, 5> zero = {0, 0, 0, 0, 0};
  EXPECT_EQ(Add1Estimate(zero), Distribution::Uniform(5));
}

TEST(Add1Test, ChiSquareRate) {
  // n = 10 K / gamma^2 samples learn within chi-square gamma^2.
  const int K = 8;
  const double gamma = 0.2;
  const Distribution p =
      Unwrap(Distribution::Normalized({3, 1, 1, 2, 1, 1, 2, 5}));
  const int64_t n = static_cast<int64_t>(10 * K / (gamma * gamma));
  Rng rng(5);
  int good = 0;
  for (int t = 0; t < 500; ++t) {
    const Distribution q = Add1Estimate(SampleCounts(p.pmf(), n, rng));
    good += Unwrap(ChiSquareDivergence(p, q)) <= gamma * gamma;
  }
  EXPECT_GE(good, 450);
}

TEST(LearnedProductTest, FloorKeepsMassAndMinimum) {
  const int K = 8;
  std::vector<double> spiky(K, 1e-6);
  spiky[0] = 1.0 - 7e-6;
  const Distribution q1 = Unwrap(Distribution::Create(spiky));
  const LearnedProduct q =
      LearnedProduct::FromMarginals(q1, Distribution::Uniform(K));
  EXPECT_TRUE(q.floor_applied());
  double s = 0.0;
  for (double v : q.q1().pmf()) {
    s += v;
    EXPECT_GE(v, MarginalFloor(K) * (1 - 1e-12));
  }
  EXPECT_NEAR(s, 1.0, 1e-12);
  EXPECT_GE(q.MinCell(), 1.0 / (50.0 * K * K));
  const JointDistribution joint = q.Joint();
  double js = 0;
  for (double v : joint.pmf()) js += v;
  EXPECT_NEAR(js, 1.0, 1e-12);
}

TEST(LearnedProductTest, FloorInactiveForTrueOutputMarginals) {
  const PrivacyBudget b = Unwrap(PrivacyBudget::Create(1.0));
  const HadamardCode code = Unwrap(HadamardCode::Create(4));
  const int K = code.output_size();
  for (int x = 0; x < 4; ++x) {
    const Distribution q =
        Unwrap(PushforwardHr(code, Distribution::PointMass(4, x), b));
    for (double v : q.pmf()) {
      EXPECT_GE(v, (1 - b.alpha_hr()) / K - 1e-15);
      EXPECT_LE(v, (1 + b.alpha_hr()) / K + 1e-15);
      EXPECT_GE(v, 1.0 / (2 * K));
    }
    EXPECT_FALSE(LearnedProduct::FromMarginals(q, q).floor_applied());
  }
}

TEST(LearnedProductTest, LearnFromPairsMatchesCounts) {
  const std::vector<std::pair<int, int>> s = {{0, 1}, {0, 2}, {3, 1}};
  const LearnedProduct q = Unwrap(LearnProduct(s, 4));
  const std::array<int64_t, 4> c1 = {2, 0, 0, 1}, c2 = {0, 2, 1, 0};
  const LearnedProduct r = LearnProductFromCounts(c1, c2);
  EXPECT_EQ(q.q1(), r.q1());
  EXPECT_EQ(q.q2(), r.q2());
  const std::vector<std::pair<int, int>> bad = {{0, 5}};
  EXPECT_FALSE(LearnProduct(bad, 4).ok());
}

TEST(AdkChi2Test, UnbiasedWhenDrawnFromReference) {
  const int K = 4;
  const Distribution m1 = Unwrap(Distribution::Create({0.1, 0.2, 0.3, 0.4}));
  const LearnedProduct q = LearnedProduct::FromMarginals(m1, m1);
  const JointDistribution qj = q.Joint();
  Rng rng(6);
  const int trials = 3000;
  const int64_t m = 2000;
  double sum = 0, sum2 = 0;
  for (int t = 0; t < trials; ++t) {
    const std::vector<int64_t> c = SampleCounts(qj.pmf(), Poisson(rng, m), rng);
    const double s = Unwrap(AdkChi2FromCounts(c, m, q, 0.01)).statistic;
    sum += s;
    sum2 += s * s;
  }
  const double mean = sum / trials;
  EXPECT_NEAR(mean, 0.0, 3.5 * std::sqrt((sum2 / trials - mean * mean) /
                                         trials));
  (void)K;
}

TEST(AdkChi2Test, PointMassIsFar) {
  const int K = 4;
  const LearnedProduct q = LearnedProduct::FromMarginals(
      Distribution::Uniform(K), Distribution::Uniform(K));
  std::vector<int64_t> c(K * K, 0);
  const int64_t m = 1000;
  c[0] = m;
  const Verdict v = Unwrap(AdkChi2FromCounts(c, m, q, 0.01));
  const double qz = 1.0 / (K * K);
  const double want = ((m - m * qz) * (m - m * qz) - m) / (m * qz) +
                      (K * K - 1) * m * qz;
  EXPECT_NEAR(v.statistic, want, 1e-9);
  EXPECT_EQ(v.decision, Decision::kFar);
}

TEST(AdkChi2Test, ZeroGapRejectsAnyPositiveStatistic) {
  const LearnedProduct q = LearnedProduct::FromMarginals(
      Distribution::Uniform(2), Distribution::Uniform(2));
  const std::array<int64_t, 4> c = {3, 0, 0, 1};
  const Verdict v = Unwrap(AdkChi2FromCounts(c, 4, q, 0.0));
  EXPECT_GT(v.statistic, 0.0);
  EXPECT_EQ(v.decision, Decision::kFar);
  const std::array<int64_t, 3> wrong = {1, 2, 3};
  EXPECT_FALSE(AdkChi2FromCounts(wrong, 4, q, 0.0).ok());
}

TEST(HrIndependenceTest, ChiSquareDominatesScaledL2) {
  // Every cell of T(q) for a product q is at most ((1 + alpha_H) / K)^2,
  // attained at (0, 0). At eps = 1 this exceeds 2 / K^2.
  const PrivacyBudget b = Unwrap(PrivacyBudget::Create(1.0));
  const HadamardCode code = Unwrap(HadamardCode::Create(4));
  const double K = code.output_size();
  const double a = b.alpha_hr();
  const JointDistribution p = Unwrap(BalancedPaninskiJoint(4, 0.45));
  const auto [m1, m2] = Marginals(p);
  const JointDistribution q = Unwrap(Product(m1, m2));
  const JointDistribution tp = Unwrap(PushforwardT(code, p, b));
  const JointDistribution tq = Unwrap(PushforwardT(code, q, b));
  double chi2 = 0.0, max_cell = 0.0;
  for (size_t i = 0; i < tq.pmf().size(); ++i) {
    const double d = tp.pmf()[i] - tq.pmf()[i];
    chi2 += d * d / tq.pmf()[i];
    max_cell = std::max(max_cell, tq.pmf()[i]);
  }
  const double cap = (1 + a) * (1 + a) / (K * K);
  EXPECT_NEAR(max_cell, cap, 1e-15);
  EXPECT_GT(max_cell, 2 / (K * K));
  EXPECT_GE(chi2, 1 / cap * Unwrap(L2DistanceSq(tp, tq)));
  // TV(p, q) = gamma gives the chi-square gap 4 alpha^4 gamma^2 / ((1+a)^2 k^2).
  EXPECT_GE(chi2, 4 * std::pow(a, 4) * 0.45 * 0.45 / ((1 + a) * (1 + a) * 16));
}

TEST(HrIndependenceTest, PerUserPipelineSeparates) {
  const PrivacyBudget b = Unwrap(PrivacyBudget::Create(1.0));
  const int k = 4;
  const JointDistribution alt = Unwrap(BalancedPaninskiJoint(k, 0.45));
  const JointDistribution null = JointDistribution::Uniform(k);
  Rng rng(9);
  const int64_t n = 200000;
  int errors = 0;
  for (int t = 0; t < 10; ++t) {
    const Verdict vn = Unwrap(HrIndependenceTest(
        Unwrap(EncodePairBatch(k, b, SampleJoint(null, n, rng), rng)), 0.45,
        0, rng));
    const Verdict va = Unwrap(HrIndependenceTest(
        Unwrap(EncodePairBatch(k, b, SampleJoint(alt, n, rng), rng)), 0.45, 0,
        rng));
    errors += vn.decision != Decision::kIndependent;
    errors += va.decision != Decision::kNotIndependent;
  }
  EXPECT_LE(errors, 2);
}

TEST(BinaryEstimateTest, DeterministicInsideGivesOnes) {
  const PrivacyBudget b = Unwrap(PrivacyBudget::Create(90.0));
  const std::array<int64_t, 3> ones = {1000, 1000, 1000};
  const BinaryIndependenceEstimate e =
      BinaryIndependenceFromCounts(ones, 1000, b);
  EXPECT_NEAR(e.joint, 1.0, 1e-9);
  EXPECT_NEAR(e.first, 1.0, 1e-9);
  EXPECT_NEAR(e.second, 1.0, 1e-9);
}

TEST(BinaryEstimateTest, AccuracyAndProductBias) {
  const PrivacyBudget b = Unwrap(PrivacyBudget::Create(1.0));
  const PublicCoin s1 = Unwrap(PublicCoin::FromIndices(4, {0, 1}));
  const PublicCoin s2 = Unwrap(PublicCoin::FromIndices(4, {0, 2}));
  const Distribution p1 = Unwrap(Distribution::Create({0.4, 0.3, 0.2, 0.1}));
  const Distribution p2 = Unwrap(Distribution::Create({0.1, 0.2, 0.3, 0.4}));
  const JointDistribution p = Unwrap(Product(p1, p2));
  const double t1 = s1.Mass(p1), t2 = s2.Mass(p2);
  const double e3 = std::exp(1.0 / 3);
  const int64_t n = 20000;
  Rng rng(4);
  int inside = 0;
  double gap = 0.0;
  const int trials = 400;
  for (int t = 0; t < trials; ++t) {
    std::array<int64_t, 3> ones = {0, 0, 0};
    for (auto [a, c] : SampleJoint(p, n, rng)) {
      const auto bits = Raptor2Encode(a, c, s1, s2, b, rng);
      for (int j = 0; j < 3; ++j) ones[j] += bits[j];
    }
    const BinaryIndependenceEstimate e =
        BinaryIndependenceFromCounts(ones, n, b);
    const double tol = 4 * ((e3 + 1) / (e3 - 1)) / std::sqrt(n);
    inside += std::abs(e.first - t1) <= tol && std::abs(e.second - t2) <= tol &&
              std::abs(e.joint - t1 * t2) <= tol;
    gap += (e.joint - e.first * e.second) / trials;
  }
  EXPECT_GE(inside, 380);
  EXPECT_NEAR(gap, 0.0, 0.01);
}

TEST(RaptorIndependenceTest, ProductHasNoPerCoinGap) {
  const Distribution p1 = Unwrap(Distribution::Create({0.4, 0.3, 0.2, 0.1}));
  const JointDistribution p = Unwrap(Product(p1, p1));
  Rng rng(2);
  for (int t = 0; t < 50; ++t) {
    const PublicCoin s1 = Unwrap(PublicCoin::Draw(4, rng));
    const PublicCoin s2 = Unwrap(PublicCoin::Draw(4, rng));
    double joint = 0.0;
    for (int a : s1.indices()) {
      for (int c : s2.indices()) joint += p.at(a, c);
    }
    EXPECT_NEAR(joint, s1.Mass(p1) * s2.Mass(p1), 1e-15);
  }
}

TEST(RaptorIndependenceTest, PerUserPipelineSeparates) {
  const PrivacyBudget b = Unwrap(PrivacyBudget::Create(1.0));
  const int k = 4;
  RaptorIndependenceConfig cfg;
  cfg.repetitions = 20;
  const JointDistribution alt = Unwrap(BalancedPaninskiJoint(k, 0.45));
  const JointDistribution null = JointDistribution::Uniform(k);
  Rng rng(10);
  const int64_t n = 20 * 200000;
  int errors = 0;
  for (int t = 0; t < 3; ++t) {
    errors += Unwrap(RaptorIndependenceTest(SampleJoint(null, n, rng), k, b,
                                            0.45, cfg, rng))
                  .decision != Decision::kIndependent;
    errors += Unwrap(RaptorIndependenceTest(SampleJoint(alt, n, rng), k, b,
                                            0.45, cfg, rng))
                  .decision != Decision::kNotIndependent;
  }
  EXPECT_LE(errors, 1);
}

TEST(RaptorIndependenceTest, DecisionRule) {
  const PrivacyBudget b = Unwrap(PrivacyBudget::Create(90.0));
  RaptorIndependenceConfig cfg;
  cfg.tau = 0.25;
  const int64_t m = 1000;
  // Noise-free: p~ = 0.25 and p~1 = p~2 = 0.5 means no gap.
  std::vector<std::array<int64_t, 3>> ones(4, {500, 500, 250});
  EXPECT_EQ(RaptorIndependenceDecision(ones, m, 4, b, 0.45, cfg).decision,
            Decision::kIndependent);
  ones[0] = {500, 500, 500};
  ones[1] = {500, 500, 500};
  EXPECT_EQ(RaptorIndependenceDecision(ones, m, 4, b, 0.45, cfg).decision,
            Decision::kNotIndependent);
}

}  // namespace
}  // namespace ldptest
