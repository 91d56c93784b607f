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
#include <vector>

#include "gtest/gtest.h"
#include "ldptest/batch.h"
#include "ldptest/distribution.h"
#include "ldptest/fast_sim.h"
#include "ldptest/hadamard.h"
#include "ldptest/mechanisms.h"
#include "ldptest/random.h"
#include "ldptest/sampling.h"
#include "ldptest/uniformity.h"
#include "test_util.h"

namespace ldptest {
namespace {

using ::ldptest::testing::Unwrap;

Distribution RandomPaninski(int k, double gamma, Rng& rng) {
  std::vector<int> theta(k / 2);
  for (int& t : theta) t = Bernoulli(rng, 0.5) ? 1 : -1;
  return Unwrap(Paninski(k, gamma, theta));
}

RapporCounts EncodeRapporCounts(const Distribution& p, int64_t n,
                                const PrivacyBudget& b, Rng& rng) {
  const std::vector<int> xs = Sample(p, n, rng);
  return Unwrap(
      CountRappor(Unwrap(EncodeBatch(MechanismKind::kRappor, p.k(), b, xs,
                                     rng))));
}

TEST(RapporStatisticTest, UnbiasedUnderUniform) {
  const PrivacyBudget b = Unwrap(PrivacyBudget::Create(1.0));
  const int k = 8, n = 200, trials = 4000;
  Rng rng(1);
  double sum = 0.0;
  for (int t = 0; t < trials; ++t) {
    sum += Unwrap(RapporStatistic(
        EncodeRapporCounts(Distribution::Uniform(k), n, b, rng), b));
  }
  const double var_bound = 4.0 * k * n * n;
  EXPECT_LE(std::abs(sum / trials), 4 * std::sqrt(var_bound / trials));
}

TEST(RapporStatisticTest, MeanTracksDistance) {
  const PrivacyBudget b = Unwrap(PrivacyBudget::Create(1.0));
  const Distribution p = Unwrap(Distribution::Create({0.4, 0.3, 0.2, 0.1}));
  const int n = 300, trials = 4000;
  const double l2 = Unwrap(L2DistanceSq(p, Distribution::Uniform(4)));
  const double a = b.alpha_rappor();
  const double mean = n * (n - 1.0) * a * a * l2;
  Rng rng(2);
  double sum = 0.0;
  for (int t = 0; t < trials; ++t) {
    sum += Unwrap(RapporStatistic(SimulateRapporCounts(p, n, b, rng), b));
  }
  const double var_bound = 4.0 * 4 * n * n + 8.0 * n * mean;
  EXPECT_NEAR(sum / trials, mean, 4 * std::sqrt(var_bound / trials));
}

TEST(RapporUniformityTest, AllOnesIsNotUniform) {
  const PrivacyBudget b = Unwrap(PrivacyBudget::Create(1.0));
  RapporCounts c;
  c.n = 50;
  c.ones.assign(6, 50);
  const Verdict v = Unwrap(RapporUniformityTest(c, b, 0.5));
  EXPECT_EQ(v.decision, Decision::kNotUniform);
  EXPECT_GT(v.statistic, v.threshold);
}

TEST(RapporUniformityTest, MinimalBatchRuns) {
  const PrivacyBudget b = Unwrap(PrivacyBudget::Create(1.0));
  Rng rng(3);
  const std::vector<int> xs = {0, 1};
  const PrivatizedBatch batch =
      Unwrap(EncodeBatch(MechanismKind::kRappor, 4, b, xs, rng));
  EXPECT_TRUE(RapporUniformityTest(batch, 0.5).ok());
  const std::vector<int> one = {0};
  EXPECT_FALSE(RapporUniformityTest(
                   Unwrap(EncodeBatch(MechanismKind::kRappor, 4, b, one, rng)),
                   0.5)
                   .ok());
  EXPECT_FALSE(RapporUniformityTest(
                   Unwrap(EncodeBatch(MechanismKind::kHr, 4, b, xs, rng)), 0.5)
                   .ok());
}

TEST(RapporUniformityTest, PerUserAndFastPathAgreeInLaw) {
  const PrivacyBudget b = Unwrap(PrivacyBudget::Create(1.0));
  const Distribution p = Unwrap(Distribution::Create({0.4, 0.3, 0.2, 0.1}));
  Rng rng(4);
  const int trials = 3000;
  std::array<double, 4> slow = {0, 0, 0, 0}, fast = {0, 0, 0, 0};
  for (int t = 0; t < trials; ++t) {
    const RapporCounts a = EncodeRapporCounts(p, 100, b, rng);
    const RapporCounts c = SimulateRapporCounts(p, 100, b, rng);
    for (int x = 0; x < 4; ++x) {
      slow[x] += a.ones[x] / double(trials);
      fast[x] += c.ones[x] / double(trials);
    }
  }
  for (int x = 0; x < 4; ++x) {
    const double want = 100 * (b.alpha_rappor() * p[x] + b.beta_rappor());
    EXPECT_NEAR(slow[x], want, 0.5);
    EXPECT_NEAR(fast[x], want, 0.5);
  }
}

TEST(L2ClosenessTest, IdenticalDeterministicInputsAreClose) {
  Rng rng(1);
  const std::vector<int> zeros(1000, 0);
  const Verdict v = Unwrap(L2ClosenessTest(zeros, zeros, 4, 0.1, rng));
  EXPECT_EQ(v.decision, Decision::kClose);
  const std::array<int64_t, 2> a = {100, 0};
  const Verdict w = L2ClosenessFromCounts(a, a, 100, 0.1);
  EXPECT_DOUBLE_EQ(w.statistic, -200.0);
  EXPECT_EQ(w.decision, Decision::kClose);
}

TEST(L2ClosenessTest, UnbiasedWhenEqual) {
  const Distribution p = Unwrap(Distribution::Create({0.1, 0.2, 0.3, 0.4}));
  Rng rng(6);
  const int trials = 3000;
  const int n = 2000;
  double sum = 0.0, sum2 = 0.0;
  for (int t = 0; t < trials; ++t) {
    const std::vector<int> a = Sample(p, n, rng);
    const std::vector<int> b = Sample(p, n, rng);
    const double z = Unwrap(L2ClosenessTest(a, b, 4, 0.1, rng)).statistic;
    sum += z;
    sum2 += z * z;
  }
  const double mean = sum / trials;
  const double sd = std::sqrt((sum2 / trials - mean * mean) / trials);
  EXPECT_NEAR(mean, 0.0, 3.5 * sd);
}

TEST(L2ClosenessTest, DetectsSeparatedPair) {
  // |p_a - p_b|_2 = 2 * gamma_l2.
  const Distribution pa = Unwrap(Distribution::Create({0.3, 0.2, 0.25, 0.25}));
  const Distribution pb = Unwrap(Distribution::Create({0.2, 0.3, 0.25, 0.25}));
  const double gamma_l2 = std::sqrt(0.02) / 2;
  Rng rng(8);
  int accepts = 0;
  for (int t = 0; t < 200; ++t) {
    const std::vector<int> a = Sample(pa, 5000, rng);
    const std::vector<int> b = Sample(pb, 5000, rng);
    accepts += Unwrap(L2ClosenessTest(a, b, 4, gamma_l2, rng)).decision ==
               Decision::kClose;
  }
  EXPECT_LE(accepts, 20);
}

TEST(L2ClosenessTest, RejectsBadInput) {
  Rng rng(1);
  const std::vector<int> a = {0, 1}, bad = {0, 9}, empty;
  EXPECT_FALSE(L2ClosenessTest(a, empty, 4, 0.1, rng).ok());
  EXPECT_FALSE(L2ClosenessTest(a, bad, 4, 0.1, rng).ok());
  EXPECT_FALSE(L2ClosenessTest(a, a, 4, 0.0, rng).ok());
}

TEST(HrUniformityTest, SidesAreExchangeableUnderUniform) {
  // Under p = u both sides are draws from q*, so Z and its swap have the
  // same law; compare the mean and the rejection rate.
  const PrivacyBudget b = Unwrap(PrivacyBudget::Create(1.0));
  const HadamardCode code = Unwrap(HadamardCode::Create(8));
  const Distribution qs = QStar(code, b);
  Rng rng(12);
  double ab = 0.0, ba = 0.0;
  const int trials = 3000;
  for (int t = 0; t < trials; ++t) {
    const std::vector<int> x = Sample(qs, 500, rng);
    const std::vector<int> y = Sample(qs, 500, rng);
    Rng r1(t), r2(t);
    ab += Unwrap(L2ClosenessTest(x, y, qs.k(), 0.05, r1)).statistic;
    ba += Unwrap(L2ClosenessTest(y, x, qs.k(), 0.05, r2)).statistic;
  }
  EXPECT_NEAR(ab / trials, ba / trials, 20.0);
}

TEST(HrUniformityTest, SeparatesAtLargeN) {
  const PrivacyBudget b = Unwrap(PrivacyBudget::Create(1.0));
  Rng rng(13);
  const int k = 16;
  int errors = 0;
  for (int t = 0; t < 40; ++t) {
    const Distribution alt = RandomPaninski(k, 0.5, rng);
    const std::vector<int> xu = Sample(Distribution::Uniform(k), 40000, rng);
    const std::vector<int> xa = Sample(alt, 40000, rng);
    const Verdict vu = Unwrap(HrUniformityTest(
        Unwrap(EncodeBatch(MechanismKind::kHr, k, b, xu, rng)), 0.5, rng));
    const Verdict va = Unwrap(HrUniformityTest(
        Unwrap(EncodeBatch(MechanismKind::kHr, k, b, xa, rng)), 0.5, rng));
    errors += vu.decision != Decision::kUniform;
    errors += va.decision != Decision::kNotUniform;
  }
  EXPECT_LE(errors, 4);
}

TEST(HrUniformityTest, GapFormula) {
  const PrivacyBudget b = Unwrap(PrivacyBudget::Create(1.0));
  EXPECT_NEAR(HrL2Gap(64, b, 0.5),
              2 * b.alpha_hr() * 0.5 / std::sqrt(64.0 * 128.0), 1e-15);
}

TEST(BiasTest, EstimatorValues) {
  const PrivacyBudget b = Unwrap(PrivacyBudget::Create(std::log(3.0)));
  EXPECT_NEAR(BiasEstimateFromCount(50, 100, b), 0.5, 1e-15);
  EXPECT_NEAR(BiasEstimateFromCount(25, 100, b), 0.0, 1e-15);
  const std::vector<int32_t> ones(10, 1);
  const PrivacyBudget one = Unwrap(PrivacyBudget::Create(1.0));
  const Verdict v = Unwrap(BiasTest(ones, one, 0.1, 0.05));
  EXPECT_EQ(v.decision, Decision::kBiased);
  EXPECT_FALSE(BiasTest({}, one, 0.1, 0.05).ok());
  EXPECT_FALSE(BiasTest(ones, one, 0.1, 0.7).ok());
}

TEST(BiasTest, EstimatorAccuracy) {
  const PrivacyBudget b = Unwrap(PrivacyBudget::Create(1.0));
  const double e = std::exp(1.0);
  const double rho = 0.3;
  const double mean = rho * e / (e + 1) + (1 - rho) / (e + 1);
  const int n = 2000;
  Rng rng(3);
  int inside = 0;
  for (int t = 0; t < 1000; ++t) {
    const double est = BiasEstimateFromCount(Binomial(rng, n, mean), n, b);
    inside += std::abs(est - rho) <= 4 * ((e + 1) / (e - 1)) / std::sqrt(n);
  }
  EXPECT_GE(inside, 950);
}

TEST(BiasTest, HoeffdingSizeControlsBothErrors) {
  const PrivacyBudget b = Unwrap(PrivacyBudget::Create(1.0));
  const double gp = 0.1, delta = 0.1;
  const int64_t n = HoeffdingSampleSize(b, gp, delta);
  const double e = std::exp(1.0);
  auto mean_for = [&](double rho) {
    return rho * e / (e + 1) + (1 - rho) / (e + 1);
  };
  Rng rng(4);
  int false_bias = 0, missed = 0;
  for (int t = 0; t < 1000; ++t) {
    false_bias += Unwrap(BiasTestFromCount(Binomial(rng, n, mean_for(0.5)), n,
                                           b, gp, delta))
                      .decision == Decision::kBiased;
    missed += Unwrap(BiasTestFromCount(Binomial(rng, n, mean_for(0.5 + gp)),
                                       n, b, gp, delta))
                  .decision == Decision::kUnbiased;
  }
  EXPECT_LE(false_bias, 100);
  EXPECT_LE(missed, 100);
}

TEST(BiasTest, MajorityVoteNeedsOddBatches) {
  const PrivacyBudget b = Unwrap(PrivacyBudget::Create(1.0));
  const std::vector<int32_t> bits(100, 1);
  EXPECT_FALSE(BiasTest(bits, b, 0.1, 0.05, {.majority_batches = 2}).ok());
  EXPECT_EQ(Unwrap(BiasTest(bits, b, 0.1, 0.05, {.majority_batches = 5}))
                .decision,
            Decision::kBiased);
}

TEST(RaptorUniformityTest, ThresholdConstants) {
  EXPECT_NEAR(RaptorDelta(1.0 / 477), (1.0 / 477) / (2 * (1 + 1.0 / 477)),
              1e-15);
  EXPECT_NEAR(RaptorTauThreshold(0.2), 1 - (0.2 / 2.4 + 0.05), 1e-15);
  EXPECT_NEAR(RaptorGammaPrime(20, 0.5), 0.05, 1e-15);
}

TEST(RaptorUniformityTest, PerUserSeparatesAtLargeN) {
  const PrivacyBudget b = Unwrap(PrivacyBudget::Create(1.0));
  const int k = 8;
  RaptorUniformityConfig cfg;
  cfg.repetitions = 24;
  Rng rng(21);
  int errors = 0;
  for (int t = 0; t < 20; ++t) {
    const std::vector<int> xu =
        Sample(Distribution::Uniform(k), 24 * 60000, rng);
    const std::vector<int> xa = Sample(RandomPaninski(k, 0.5, rng), 24 * 60000,
                                       rng);
    errors += Unwrap(RaptorUniformityTest(xu, k, b, 0.5, cfg, rng)).decision !=
              Decision::kUniform;
    errors += Unwrap(RaptorUniformityTest(xa, k, b, 0.5, cfg, rng)).decision !=
              Decision::kNotUniform;
  }
  EXPECT_LE(errors, 3);
}

TEST(RaptorUniformityTest, ParallelBitsVariantRuns) {
  const PrivacyBudget b = Unwrap(PrivacyBudget::Create(1.0));
  RaptorUniformityConfig cfg;
  cfg.repetitions = 4;
  cfg.parallel_bits = true;
  Rng rng(2);
  const std::vector<int> xs = Sample(Distribution::Uniform(4), 1000, rng);
  const Verdict v = Unwrap(RaptorUniformityTest(xs, 4, b, 0.5, cfg, rng));
  EXPECT_EQ(v.n, 1000);
  cfg.repetitions = 0;
  EXPECT_FALSE(RaptorUniformityTest(xs, 4, b, 0.5, cfg, rng).ok());
}

TEST(RaptorUniformityTest, DecisionCountsUnbiasedRepetitions) {
  const PrivacyBudget b = Unwrap(PrivacyBudget::Create(1.0));
  RaptorUniformityConfig cfg;
  cfg.c = 0.2;
  const double e = std::exp(1.0);
  const int64_t m = 1000;
  // Exactly unbiased counts: mean of the bits is 1/2.
  std::vector<int64_t> ones(10, m / 2);
  EXPECT_EQ(RaptorDecision(ones, m, 16, b, 0.5, cfg).decision,
            Decision::kUniform);
  // A pure-noise count pushes rho to 0, far from 1/2.
  for (int i = 0; i < 3; ++i) ones[i] = static_cast<int64_t>(m / (e + 1));
  EXPECT_EQ(RaptorDecision(ones, m, 16, b, 0.5, cfg).decision,
            Decision::kNotUniform);
}

}  // namespace
}  // namespace ldptest
