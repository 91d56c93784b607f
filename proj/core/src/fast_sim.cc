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

#include "ldptest/fast_sim.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "ldptest/hadamard.h"
#include "ldptest/sampling.h"

namespace ldptest {
namespace {

absl::Status CheckSize(int64_t n, int64_t minimum) {
  if (n < minimum) {
    return absl::InvalidArgumentError("too few users for this test");
  }
  return absl::OkStatus();
}

// Counts of the first min(Poi(m), n) of n i.i.d. draws from q.
std::vector<int64_t> PoissonizedDraw(const Distribution& q, int64_t n,
                                     int64_t m, Rng& rng) {
  const int64_t keep =
      std::min<int64_t>(Poisson(rng, static_cast<double>(m)), n);
  return SampleCounts(q.pmf(), keep, rng);
}

}  // namespace

RapporCounts SimulateRapporCounts(const Distribution& p, int64_t n,
                                  const PrivacyBudget& budget, Rng& rng) {
  const double beta = budget.beta_rappor();
  const std::vector<int64_t> inputs = SampleCounts(p.pmf(), n, rng);
  RapporCounts counts;
  counts.n = n;
  counts.ones.resize(p.k());
  for (int x = 0; x < p.k(); ++x) {
    counts.ones[x] = Binomial(rng, inputs[x], 1.0 - beta) +
                     Binomial(rng, n - inputs[x], beta);
  }
  return counts;
}

absl::StatusOr<Verdict> SimulateRapporUniformity(const Distribution& p,
                                                 int64_t n,
                                                 const PrivacyBudget& budget,
                                                 double gamma, Rng& rng) {
  if (absl::Status s = CheckSize(n, 2); !s.ok()) return s;
  return RapporUniformityTest(SimulateRapporCounts(p, n, budget, rng), budget,
                              gamma);
}

absl::StatusOr<Verdict> SimulateHrUniformity(const Distribution& p, int64_t n,
                                             const PrivacyBudget& budget,
                                             double gamma, Rng& rng) {
  if (absl::Status s = CheckSize(n, 1); !s.ok()) return s;
  absl::StatusOr<HadamardCode> code = HadamardCode::Create(p.k());
  if (!code.ok()) return code.status();
  absl::StatusOr<Distribution> q = PushforwardHr(*code, p, budget);
  if (!q.ok()) return q.status();
  const int64_t m = PoissonizedSize(n, n);
  const std::vector<int64_t> a = PoissonizedDraw(*q, n, m, rng);
  const std::vector<int64_t> b =
      PoissonizedDraw(QStar(*code, budget), n, m, rng);
  Verdict v = L2ClosenessFromCounts(a, b, m, HrL2Gap(p.k(), budget, gamma));
  v.test = "hr-uniformity";
  v.decision =
      v.decision == Decision::kClose ? Decision::kUniform : Decision::kNotUniform;
  v.n = n;
  v.k = p.k();
  v.epsilon = budget.epsilon();
  v.gamma = gamma;
  return v;
}

absl::StatusOr<Verdict> SimulateRaptorUniformity(
    const Distribution& p, int64_t n, const PrivacyBudget& budget,
    double gamma, const RaptorUniformityConfig& config, Rng& rng) {
  if (config.repetitions < 1) {
    return absl::InvalidArgumentError("repetitions must be >= 1");
  }
  if (config.parallel_bits || config.bias.majority_batches > 0) {
    return absl::UnimplementedError(
        "fast path covers the disjoint single-threshold variant only");
  }
  const int64_t m = n / config.repetitions;
  if (absl::Status s = CheckSize(m, 1); !s.ok()) return s;
  const double low = 1.0 / (std::exp(budget.epsilon()) + 1.0);
  std::vector<int64_t> ones(config.repetitions);
  for (int t = 0; t < config.repetitions; ++t) {
    absl::StatusOr<PublicCoin> coin = PublicCoin::Draw(p.k(), rng);
    if (!coin.ok()) return coin.status();
    const double mass = std::clamp(coin->Mass(p), 0.0, 1.0);
    ones[t] = Binomial(rng, m, low + budget.alpha_hr() * mass);
  }
  return RaptorDecision(ones, m, p.k(), budget, gamma, config);
}

absl::StatusOr<LearnedProduct> SimulateLearnProduct(const JointDistribution& p,
                                                    int64_t n1,
                                                    const PrivacyBudget& budget,
                                                    Rng& rng) {
  absl::StatusOr<HadamardCode> code = HadamardCode::Create(p.k());
  if (!code.ok()) return code.status();
  const auto [p1, p2] = Marginals(p);
  absl::StatusOr<Distribution> q1 = PushforwardHr(*code, p1, budget);
  if (!q1.ok()) return q1.status();
  absl::StatusOr<Distribution> q2 = PushforwardHr(*code, p2, budget);
  if (!q2.ok()) return q2.status();
  const std::vector<int64_t> c1 = SampleCounts(q1->pmf(), n1, rng);
  const std::vector<int64_t> c2 = SampleCounts(q2->pmf(), n1, rng);
  return LearnProductFromCounts(c1, c2);
}

absl::StatusOr<Verdict> SimulateHrIndependence(const JointDistribution& p,
                                               int64_t n,
                                               const PrivacyBudget& budget,
                                               double gamma, int64_t n1,
                                               Rng& rng) {
  if (n1 <= 0) n1 = n / 4;
  if (n < 2 * n1 + 1) {
    return absl::InvalidArgumentError("need n >= 2 n1 + 1 users");
  }
  absl::StatusOr<LearnedProduct> q = SimulateLearnProduct(p, n1, budget, rng);
  if (!q.ok()) return q.status();
  absl::StatusOr<HadamardCode> code = HadamardCode::Create(p.k());
  if (!code.ok()) return code.status();
  absl::StatusOr<JointDistribution> t = PushforwardT(*code, p, budget);
  if (!t.ok()) return t.status();
  const int64_t n2 = n - 2 * n1;
  const int64_t m = PoissonizedSize(n2, n2);
  if (absl::Status s = CheckSize(m, 1); !s.ok()) return s;
  const int64_t keep =
      std::min<int64_t>(Poisson(rng, static_cast<double>(m)), n2);
  const std::vector<int64_t> counts = SampleCounts(t->pmf(), keep, rng);
  absl::StatusOr<Verdict> adk = AdkChi2FromCounts(
      counts, m, *q, IndependenceGammaPrimeSq(p.k(), budget, gamma));
  if (!adk.ok()) return adk.status();
  Verdict v = *adk;
  v.test = "hr-independence";
  v.decision = adk->decision == Decision::kFar ? Decision::kNotIndependent
                                               : Decision::kIndependent;
  v.n = n;
  v.k = p.k();
  v.epsilon = budget.epsilon();
  v.gamma = gamma;
  return v;
}

absl::StatusOr<Verdict> SimulateRaptorIndependence(
    const JointDistribution& p, int64_t n, const PrivacyBudget& budget,
    double gamma, const RaptorIndependenceConfig& config, Rng& rng) {
  if (config.repetitions < 1) {
    return absl::InvalidArgumentError("repetitions must be >= 1");
  }
  const int64_t m = n / config.repetitions;
  if (absl::Status s = CheckSize(m, 1); !s.ok()) return s;
  const int k = p.k();
  const double flip = budget.Split(3).flip_probability();
  std::vector<std::array<int64_t, 3>> ones(config.repetitions);
  for (int t = 0; t < config.repetitions; ++t) {
    absl::StatusOr<PublicCoin> s1 = PublicCoin::Draw(k, rng);
    if (!s1.ok()) return s1.status();
    absl::StatusOr<PublicCoin> s2 = PublicCoin::Draw(k, rng);
    if (!s2.ok()) return s2.status();
    // Truth classes indexed 2 * b1 + b2.
    std::array<double, 4> cls = {0.0, 0.0, 0.0, 0.0};
    for (int x1 = 0; x1 < k; ++x1) {
      const int b1 = s1->Contains(x1) ? 1 : 0;
      for (int x2 = 0; x2 < k; ++x2) {
        cls[2 * b1 + (s2->Contains(x2) ? 1 : 0)] += p.at(x1, x2);
      }
    }
    const std::vector<int64_t> c = SampleCounts(cls, m, rng);
    const std::array<int64_t, 3> truth = {c[2] + c[3], c[1] + c[3], c[3]};
    for (int j = 0; j < 3; ++j) {
      ones[t][j] = Binomial(rng, truth[j], 1.0 - flip) +
                   Binomial(rng, m - truth[j], flip);
    }
  }
  return RaptorIndependenceDecision(ones, m, k, budget, gamma, config);
}

}  // namespace ldptest
