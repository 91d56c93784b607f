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

#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "gtest/gtest.h"
#include "ldptest/distribution.h"
#include "ldptest/hadamard.h"
#include "ldptest/mechanisms.h"
#include "test_util.h"

namespace ldptest {
namespace {

using ::ldptest::testing::Unwrap;

// Sylvester construction, built without bit tricks.
std::vector<std::vector<int>> Sylvester(int K) {
  std::vector<std::vector<int>> h = {{1}};
  while (static_cast<int>(h.size()) < K) {
    const int m = static_cast<int>(h.size());
    std::vector<std::vector<int>> next(2 * m, std::vector<int>(2 * m));
    for (int r = 0; r < m; ++r) {
      for (int c = 0; c < m; ++c) {
        next[r][c] = h[r][c];
        next[r][c + m] = h[r][c];
        next[r + m][c] = h[r][c];
        next[r + m][c + m] = -h[r][c];
      }
    }
    h = std::move(next);
  }
  return h;
}

// Pushforward straight from the channel definition.
std::vector<double> NaivePushforward(const HadamardCode& code,
                                     const Distribution& p, double eps) {
  const int K = code.output_size();
  const auto h = Sylvester(K);
  const double e = std::exp(eps);
  std::vector<double> q(K, 0.0);
  for (int x = 0; x < code.k(); ++x) {
    for (int z = 0; z < K; ++z) {
      const bool in = h[code.row(x)][z] == 1;
      q[z] += p[x] * (2.0 / K) * (in ? e / (e + 1) : 1 / (e + 1));
    }
  }
  return q;
}

Distribution RandomPmf(int k, std::mt19937_64& rng) {
  std::exponential_distribution<double> ex(1.0);
  std::vector<double> w(k);
  for (double& v : w) v = ex(rng);
  return Unwrap(Distribution::Normalized(w));
}

TEST(HadamardTest, OutputSize) {
  EXPECT_EQ(HadamardOutputSize(1), 2);
  EXPECT_EQ(HadamardOutputSize(3), 4);
  EXPECT_EQ(HadamardOutputSize(4), 8);
  EXPECT_EQ(HadamardOutputSize(64), 128);
  EXPECT_EQ(HadamardOutputSize(100), 128);
}

TEST(HadamardTest, EntriesMatchSylvester) {
  for (int K : {2, 4, 8, 32, 128}) {
    const auto h = Sylvester(K);
    for (int r = 0; r < K; ++r) {
      for (int c = 0; c < K; ++c) {
        ASSERT_EQ(Unwrap(HadamardEntry(K, r, c)), h[r][c]);
      }
    }
  }
  EXPECT_EQ(Unwrap(HadamardEntry(4, 3, 3)), 1);
  EXPECT_FALSE(HadamardEntry(6, 0, 0).ok());
  EXPECT_FALSE(HadamardEntry(4, 4, 0).ok());
}

TEST(HadamardTest, FirstRowAllOnesAndRowsAgreeOnHalf) {
  const int K = 16;
  for (int c = 0; c < K; ++c) EXPECT_EQ(Unwrap(HadamardEntry(K, 0, c)), 1);
  for (int a = 1; a < K; ++a) {
    for (int b = a + 1; b < K; ++b) {
      int agree = 0;
      for (int c = 0; c < K; ++c) {
        agree += Unwrap(HadamardEntry(K, a, c)) ==
                 Unwrap(HadamardEntry(K, b, c));
      }
      EXPECT_EQ(agree, K / 2);
    }
  }
}

TEST(HadamardCodeTest, ExplicitInjectionCodeword) {
  const HadamardCode code =
      Unwrap(HadamardCode::CreateWithInjection(3, {1, 2, 3}));
  EXPECT_TRUE(code.Contains(0, 0));
  EXPECT_FALSE(code.Contains(1, 0));
  EXPECT_TRUE(code.Contains(2, 0));
  EXPECT_FALSE(code.Contains(3, 0));
  EXPECT_EQ(code.DzSize(0), 3);
  EXPECT_EQ(code.DzSize(1), 1);
  EXPECT_EQ(code.DzSize(2), 1);
  EXPECT_EQ(code.DzSize(3), 1);
}

TEST(HadamardCodeTest, RejectsBadInjection) {
  EXPECT_FALSE(HadamardCode::CreateWithInjection(3, {0, 1, 2}).ok());
  EXPECT_FALSE(HadamardCode::CreateWithInjection(3, {1, 1, 2}).ok());
  EXPECT_FALSE(HadamardCode::CreateWithInjection(3, {1, 2, 4}).ok());
  EXPECT_FALSE(HadamardCode::CreateWithInjection(3, {1, 2}).ok());
  EXPECT_FALSE(HadamardCode::Create(0).ok());
}

TEST(HadamardCodeTest, CodewordsHaveHalfTheOutputs) {
  for (int k : {1, 2, 3, 7, 10, 64, 100, 1000}) {
    const HadamardCode code = Unwrap(HadamardCode::Create(k));
    const int K = code.output_size();
    int64_t dz_total = 0;
    for (int z = 0; z < K; ++z) dz_total += code.DzSize(z);
    EXPECT_EQ(dz_total, static_cast<int64_t>(k) * K / 2) << k;
    EXPECT_EQ(code.DzSize(0), k);
    for (int x = 0; x < k; x += std::max(1, k / 10)) {
      int size = 0;
      for (int z = 0; z < K; ++z) size += code.Contains(z, x);
      EXPECT_EQ(size, K / 2) << k << " " << x;
      EXPECT_TRUE(code.Contains(0, x));
    }
  }
}

TEST(HadamardCodeTest, DefaultInjectionPairsRows) {
  const HadamardCode code = Unwrap(HadamardCode::Create(6));
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(code.row(2 * i) ^ code.row(2 * i + 1), 1);
    EXPECT_NE(code.row(2 * i), 0);
  }
}

TEST(QStarTest, SmallAlphabet) {
  const HadamardCode code =
      Unwrap(HadamardCode::CreateWithInjection(3, {1, 2, 3}));
  const PrivacyBudget b = Unwrap(PrivacyBudget::Create(1.0));
  const Distribution q = QStar(code, b);
  const double a = 0.46211715726000974;
  EXPECT_NEAR(q[0], (1 + a) / 4, 1e-15);
  for (int z = 1; z < 4; ++z) EXPECT_NEAR(q[z], 0.25 - a / 12, 1e-15);
}

TEST(QStarTest, SumsToOne) {
  const PrivacyBudget b = Unwrap(PrivacyBudget::Create(0.7));
  for (int k : {3, 10, 100}) {
    const Distribution q = QStar(Unwrap(HadamardCode::Create(k)), b);
    const double s = std::accumulate(q.pmf().begin(), q.pmf().end(), 0.0);
    EXPECT_NEAR(s, 1.0, 1e-12);
    EXPECT_NEAR(q[0], (1 + b.alpha_hr()) / q.k(), 1e-15);
  }
}

TEST(PushforwardTest, UniformGivesQStar) {
  const PrivacyBudget b = Unwrap(PrivacyBudget::Create(1.3));
  for (int k : {3, 8, 33}) {
    const HadamardCode code = Unwrap(HadamardCode::Create(k));
    const Distribution q =
        Unwrap(PushforwardHr(code, Distribution::Uniform(k), b));
    const Distribution qs = QStar(code, b);
    for (int z = 0; z < q.k(); ++z) EXPECT_NEAR(q[z], qs[z], 1e-15);
  }
}

TEST(PushforwardTest, MatchesChannelDefinition) {
  std::mt19937_64 rng(4);
  for (int k : {2, 5, 16, 40}) {
    const HadamardCode code = Unwrap(HadamardCode::Create(k));
    const Distribution p = RandomPmf(k, rng);
    const PrivacyBudget b = Unwrap(PrivacyBudget::Create(0.9));
    const Distribution q = Unwrap(PushforwardHr(code, p, b));
    const std::vector<double> ref = NaivePushforward(code, p, 0.9);
    for (int z = 0; z < q.k(); ++z) EXPECT_NEAR(q[z], ref[z], 1e-14);
  }
}

TEST(PushforwardTest, PointMassRow) {
  const HadamardCode code = Unwrap(HadamardCode::Create(5));
  const PrivacyBudget b = Unwrap(PrivacyBudget::Create(1.0));
  const Distribution q =
      Unwrap(PushforwardHr(code, Distribution::PointMass(5, 2), b));
  const int K = code.output_size();
  for (int z = 0; z < K; ++z) {
    const double want =
        (1 + (code.Contains(z, 2) ? 1 : -1) * b.alpha_hr()) / K;
    EXPECT_NEAR(q[z], want, 1e-15);
  }
}

TEST(PushforwardTest, ParsevalExample) {
  const HadamardCode code =
      Unwrap(HadamardCode::CreateWithInjection(3, {1, 2, 3}));
  const PrivacyBudget b = Unwrap(PrivacyBudget::Create(1.0));
  const Distribution p = Unwrap(Distribution::Create({0.5, 0.25, 0.25}));
  const double lhs =
      Unwrap(L2DistanceSq(Unwrap(PushforwardHr(code, p, b)), QStar(code, b)));
  const double rhs = b.alpha_hr() * b.alpha_hr() / 4 *
                     Unwrap(L2DistanceSq(p, Distribution::Uniform(3)));
  EXPECT_NEAR(lhs, 0.0022245027816049, 1e-15);
  EXPECT_NEAR(lhs, rhs, 1e-15);
}

TEST(PushforwardTest, ParsevalRandom) {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> kd(2, 64);
  std::uniform_real_distribution<double> ed(0.1, 2.0);
  for (int t = 0; t < 50; ++t) {
    const int k = kd(rng);
    const HadamardCode code = Unwrap(HadamardCode::Create(k));
    const PrivacyBudget b = Unwrap(PrivacyBudget::Create(ed(rng)));
    const Distribution p = RandomPmf(k, rng);
    const double lhs = Unwrap(
        L2DistanceSq(Unwrap(PushforwardHr(code, p, b)), QStar(code, b)));
    const double rhs = b.alpha_hr() * b.alpha_hr() / code.output_size() *
                       Unwrap(L2DistanceSq(p, Distribution::Uniform(k)));
    EXPECT_NEAR(lhs, rhs, 1e-12);
  }
}

TEST(PushforwardTTest, UniformJointGivesQStarSquared) {
  const HadamardCode code = Unwrap(HadamardCode::Create(4));
  const PrivacyBudget b = Unwrap(PrivacyBudget::Create(1.0));
  const JointDistribution t =
      Unwrap(PushforwardT(code, JointDistribution::Uniform(4), b));
  const Distribution qs = QStar(code, b);
  for (int a = 0; a < t.k(); ++a) {
    for (int c = 0; c < t.k(); ++c) {
      EXPECT_NEAR(t.at(a, c), qs[a] * qs[c], 1e-15);
    }
  }
}

TEST(PushforwardTTest, FactorsOnProducts) {
  std::mt19937_64 rng(12);
  const HadamardCode code = Unwrap(HadamardCode::Create(4));
  const PrivacyBudget b = Unwrap(PrivacyBudget::Create(0.6));
  for (int t = 0; t < 10; ++t) {
    const Distribution p1 = RandomPmf(4, rng);
    const Distribution p2 = RandomPmf(4, rng);
    const JointDistribution tp =
        Unwrap(PushforwardT(code, Unwrap(Product(p1, p2)), b));
    const Distribution q1 = Unwrap(PushforwardHr(code, p1, b));
    const Distribution q2 = Unwrap(PushforwardHr(code, p2, b));
    for (int a = 0; a < tp.k(); ++a) {
      for (int c = 0; c < tp.k(); ++c) {
        EXPECT_NEAR(tp.at(a, c), q1[a] * q2[c], 1e-12);
      }
    }
  }
}

TEST(PushforwardTTest, ThreeTermIdentity) {
  std::mt19937_64 rng(13);
  const HadamardCode code = Unwrap(HadamardCode::Create(4));
  const PrivacyBudget b = Unwrap(PrivacyBudget::Create(0.7));
  const double a = b.alpha_hr();
  const double K = code.output_size();
  for (int t = 0; t < 20; ++t) {
    const Distribution wp = RandomPmf(16, rng);
    const Distribution wq = RandomPmf(16, rng);
    const JointDistribution p = Unwrap(JointDistribution::Create(
        4, std::vector<double>(wp.pmf().begin(), wp.pmf().end())));
    const JointDistribution q = Unwrap(JointDistribution::Create(
        4, std::vector<double>(wq.pmf().begin(), wq.pmf().end())));
    const double lhs = Unwrap(L2DistanceSq(Unwrap(PushforwardT(code, p, b)),
                                           Unwrap(PushforwardT(code, q, b))));
    const auto [p1, p2] = Marginals(p);
    const auto [q1, q2] = Marginals(q);
    const double rhs =
        std::pow(a, 4) / (K * K) * Unwrap(L2DistanceSq(p, q)) +
        a * a / (K * K) *
            (Unwrap(L2DistanceSq(p1, q1)) + Unwrap(L2DistanceSq(p2, q2)));
    EXPECT_NEAR(lhs, rhs, 1e-14);
  }
}

TEST(FwhtTest, SmallVectors) {
  EXPECT_EQ(Unwrap(Fwht({1, 0, 0, 0})), (std::vector<double>{1, 1, 1, 1}));
  EXPECT_EQ(Unwrap(Fwht(std::vector<double>(8, 1.0))),
            (std::vector<double>{8, 0, 0, 0, 0, 0, 0, 0}));
  EXPECT_FALSE(Fwht({1, 2, 3}).ok());
}

TEST(FwhtTest, MatchesNaiveAndParseval) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> nd;
  const int K = 256;
  const auto h = Sylvester(K);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> v(K);
    for (double& x : v) x = nd(rng);
    const std::vector<double> w = Unwrap(Fwht(v));
    double nv = 0, nw = 0;
    for (int i = 0; i < K; ++i) {
      nv += v[i] * v[i];
      nw += w[i] * w[i];
    }
    EXPECT_NEAR(nw, K * nv, 1e-10 * K * nv);
    if (t < 5) {
      for (int r = 0; r < K; ++r) {
        double s = 0;
        for (int c = 0; c < K; ++c) s += h[r][c] * v[c];
        EXPECT_NEAR(w[r], s, 1e-10);
      }
    }
    const std::vector<double> back = Unwrap(Fwht(w));
    for (int i = 0; i < K; ++i) EXPECT_NEAR(back[i] / K, v[i], 1e-12);
  }
}

}  // namespace
}  // namespace ldptest
