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

#include "ldptest/independence.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "ldptest/hadamard.h"
#include "ldptest/uniformity.h"

namespace ldptest {
namespace {

// Water-filling: entries below `floor` are raised to it and the others share
// the remaining mass in proportion to their weight.
std::pair<Distribution, bool> ApplyFloor(const Distribution& q, double floor) {
  const int K = q.k();
  std::vector<bool> pinned(K, false);
  bool any = false;
  std::vector<double> out(q.pmf().begin(), q.pmf().end());
  for (bool changed = true; changed;) {
    changed = false;
    double free_mass = 0.0;
    int pinned_count = 0;
    for (int z = 0; z < K; ++z) {
      if (pinned[z]) {
        ++pinned_count;
      } else {
        free_mass += q[z];
      }
    }
    const double scale = (1.0 - pinned_count * floor) / free_mass;
    for (int z = 0; z < K; ++z) {
      out[z] = pinned[z] ? floor : q[z] * scale;
      if (!pinned[z] && out[z] < floor) {
        pinned[z] = true;
        changed = true;
        any = true;
      }
    }
  }
  return {*Distribution::Normalized(std::move(out)), any};
}

absl::Status RequireKind(const PrivatizedBatch& batch, MechanismKind kind) {
  if (batch.kind() != kind) {
    return absl::InvalidArgumentError(
        absl::StrCat("expected a ", MechanismName(kind), " batch, got ",
                     MechanismName(batch.kind())));
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<PairSamples> PairTransformSamples(const PrivatizedBatch& batch,
                                                 int64_t n1) {
  if (absl::Status s = RequireKind(batch, MechanismKind::kHrPair); !s.ok()) {
    return s;
  }
  const int64_t n = batch.size();
  if (n1 < 0 || n < 2 * n1 + 1) {
    return absl::InvalidArgumentError(absl::StrCat(
        "need n >= 2 n1 + 1 users; n = ", n, ", n1 = ", n1));
  }
  PairSamples out;
  out.product.reserve(n1);
  for (int64_t i = 0; i < n1; ++i) {
    out.product.emplace_back(batch.message(2 * i)[0],
                             batch.message(2 * i + 1)[1]);
  }
  out.joint.reserve(n - 2 * n1);
  for (int64_t i = 2 * n1; i < n; ++i) {
    out.joint.emplace_back(batch.message(i)[0], batch.message(i)[1]);
  }
  return out;
}

Distribution Add1Estimate(std::span<const int64_t> counts) {
  const int K = static_cast<int>(counts.size());
  int64_t n = 0;
  for (int64_t c : counts) n += c;
  std::vector<double> q(K);
  for (int z = 0; z < K; ++z) {
    q[z] = static_cast<double>(counts[z] + 1) / static_cast<double>(n + K);
  }
  return *Distribution::Normalized(std::move(q));
}

LearnedProduct LearnedProduct::FromMarginals(const Distribution& q1,
                                             const Distribution& q2) {
  const double floor = MarginalFloor(q1.k());
  auto [f1, a1] = ApplyFloor(q1, floor);
  auto [f2, a2] = ApplyFloor(q2, floor);
  return LearnedProduct(std::move(f1), std::move(f2), a1 || a2);
}

double LearnedProduct::MinCell() const {
  const auto p1 = q1_.pmf();
  const auto p2 = q2_.pmf();
  return *std::min_element(p1.begin(), p1.end()) *
         *std::min_element(p2.begin(), p2.end());
}

JointDistribution LearnedProduct::Joint() const { return *Product(q1_, q2_); }

nlohmann::json LearnedProductToJson(const LearnedProduct& q) {
  return {
      {"q1", std::vector<double>(q.q1().pmf().begin(), q.q1().pmf().end())},
      {"q2", std::vector<double>(q.q2().pmf().begin(), q.q2().pmf().end())},
      {"floor_applied", q.floor_applied()},
  };
}

LearnedProduct LearnProductFromCounts(std::span<const int64_t> counts1,
                                      std::span<const int64_t> counts2) {
  return LearnedProduct::FromMarginals(Add1Estimate(counts1),
                                       Add1Estimate(counts2));
}

absl::StatusOr<LearnedProduct> LearnProduct(
    std::span<const std::pair<int, int>> product_samples, int K) {
  if (K < 1) return absl::InvalidArgumentError("alphabet must be positive");
  std::vector<int64_t> c1(K, 0);
  std::vector<int64_t> c2(K, 0);
  for (const auto& [z1, z2] : product_samples) {
    if (z1 < 0 || z1 >= K || z2 < 0 || z2 >= K) {
      return absl::OutOfRangeError(
          absl::StrCat("pair (", z1, ", ", z2, ") outside [", K, "]^2"));
    }
    ++c1[z1];
    ++c2[z2];
  }
  return LearnProductFromCounts(c1, c2);
}

double LearnTargetChi2(int k, const PrivacyBudget& budget, double gamma) {
  const double a2 = budget.alpha_hr() * budget.alpha_hr();
  return a2 * a2 * gamma * gamma / (static_cast<double>(k) * k);
}

double IndependenceGammaPrimeSq(int k, const PrivacyBudget& budget,
                                double gamma) {
  return 2.0 * LearnTargetChi2(k, budget, gamma);
}

absl::StatusOr<Verdict> AdkChi2FromCounts(std::span<const int64_t> counts,
                                          int64_t m, const LearnedProduct& q,
                                          double gamma_prime_sq) {
  const int K = q.output_size();
  if (counts.size() != static_cast<size_t>(K) * K) {
    return absl::InvalidArgumentError(
        absl::StrCat("expected ", K * K, " cell counts, got ", counts.size()));
  }
  const double min_allowed = 1.0 / (50.0 * K * K);
  if (q.MinCell() < min_allowed * (1.0 - 1e-12)) {
    return absl::FailedPreconditionError(
        absl::StrCat("reference cell mass ", q.MinCell(), " below 1/(50K^2)"));
  }
  if (m < 1) return absl::InvalidArgumentError("need at least one sample");
  double s = 0.0;
  for (int z1 = 0; z1 < K; ++z1) {
    for (int z2 = 0; z2 < K; ++z2) {
      const double expected = static_cast<double>(m) * q.at(z1, z2);
      const double observed =
          static_cast<double>(counts[static_cast<size_t>(z1) * K + z2]);
      s += ((observed - expected) * (observed - expected) - observed) /
           expected;
    }
  }
  Verdict v;
  v.test = "adk-chi2";
  v.statistic = s;
  v.threshold = static_cast<double>(m) * 0.75 * gamma_prime_sq;
  v.decision = s > v.threshold ? Decision::kFar : Decision::kClose;
  v.n = m;
  v.k = K;
  return v;
}

absl::StatusOr<Verdict> AdkChi2Test(
    std::span<const std::pair<int, int>> samples, const LearnedProduct& q,
    double gamma_prime_sq, Rng& rng) {
  if (samples.empty()) return absl::InvalidArgumentError("no test samples");
  const int K = q.output_size();
  const int64_t m = PoissonizedSize(samples.size(), samples.size());
  const int64_t keep = std::min<int64_t>(
      Poisson(rng, static_cast<double>(m)), samples.size());
  std::vector<int64_t> counts(static_cast<size_t>(K) * K, 0);
  for (int64_t i = 0; i < keep; ++i) {
    const auto [z1, z2] = samples[i];
    if (z1 < 0 || z1 >= K || z2 < 0 || z2 >= K) {
      return absl::OutOfRangeError("sample outside the reference alphabet");
    }
    ++counts[static_cast<size_t>(z1) * K + z2];
  }
  return AdkChi2FromCounts(counts, m, q, gamma_prime_sq);
}

absl::StatusOr<Verdict> HrIndependenceTest(const PrivatizedBatch& batch,
                                           double gamma, int64_t n1,
                                           Rng& rng) {
  if (n1 <= 0) n1 = batch.size() / 4;
  absl::StatusOr<PairSamples> pairs = PairTransformSamples(batch, n1);
  if (!pairs.ok()) return pairs.status();
  const PrivacyBudget budget = *PrivacyBudget::Create(batch.epsilon());
  const int K = HadamardOutputSize(batch.k());
  absl::StatusOr<LearnedProduct> q = LearnProduct(pairs->product, K);
  if (!q.ok()) return q.status();
  absl::StatusOr<Verdict> adk = AdkChi2Test(
      pairs->joint, *q, IndependenceGammaPrimeSq(batch.k(), budget, gamma),
      rng);
  if (!adk.ok()) return adk.status();
  Verdict v = *adk;
  v.test = "hr-independence";
  v.decision = adk->decision == Decision::kFar ? Decision::kNotIndependent
                                               : Decision::kIndependent;
  v.n = batch.size();
  v.k = batch.k();
  v.epsilon = batch.epsilon();
  v.gamma = gamma;
  return v;
}

BinaryIndependenceEstimate BinaryIndependenceFromCounts(
    const std::array<int64_t, 3>& ones, int64_t m,
    const PrivacyBudget& budget) {
  const PrivacyBudget per_bit = budget.Split(3);
  return {BiasEstimateFromCount(ones[2], m, per_bit),
          BiasEstimateFromCount(ones[0], m, per_bit),
          BiasEstimateFromCount(ones[1], m, per_bit)};
}

absl::StatusOr<BinaryIndependenceEstimate> EstimateBinaryIndependence(
    const PrivatizedBatch& batch) {
  if (absl::Status s = RequireKind(batch, MechanismKind::kRaptorBivariate);
      !s.ok()) {
    return s;
  }
  if (batch.size() < 1) return absl::InvalidArgumentError("empty batch");
  std::array<int64_t, 3> ones = {0, 0, 0};
  for (int64_t i = 0; i < batch.size(); ++i) {
    for (int j = 0; j < 3; ++j) ones[j] += batch.message(i)[j];
  }
  return BinaryIndependenceFromCounts(ones, batch.size(),
                                      *PrivacyBudget::Create(batch.epsilon()));
}

Verdict RaptorIndependenceDecision(
    std::span<const std::array<int64_t, 3>> ones, int64_t m, int k,
    const PrivacyBudget& budget, double gamma,
    const RaptorIndependenceConfig& config) {
  const double cut = config.c_thr * gamma / k;
  int dependent = 0;
  for (const auto& rep : ones) {
    const BinaryIndependenceEstimate e =
        BinaryIndependenceFromCounts(rep, m, budget);
    dependent += std::abs(e.joint - e.first * e.second) > cut ? 1 : 0;
  }
  Verdict v;
  v.test = "raptor-independence";
  v.statistic = static_cast<double>(dependent) / ones.size();
  v.threshold = config.tau;
  v.decision = v.statistic > v.threshold ? Decision::kNotIndependent
                                         : Decision::kIndependent;
  v.n = m * static_cast<int64_t>(ones.size());
  v.k = k;
  v.epsilon = budget.epsilon();
  v.gamma = gamma;
  return v;
}

absl::StatusOr<Verdict> RaptorIndependenceTest(
    const PrivatizedBatch& batch, double gamma,
    const RaptorIndependenceConfig& config) {
  if (absl::Status s = RequireKind(batch, MechanismKind::kRaptorBivariate);
      !s.ok()) {
    return s;
  }
  const int reps = batch.repetitions();
  const int64_t m = batch.repetition_size();
  if (reps < 1 || m < 1) {
    return absl::InvalidArgumentError("batch has no repetitions");
  }
  std::vector<std::array<int64_t, 3>> ones(reps, {0, 0, 0});
  for (int t = 0; t < reps; ++t) {
    for (int64_t i = t * m; i < (t + 1) * m; ++i) {
      for (int j = 0; j < 3; ++j) ones[t][j] += batch.message(i)[j];
    }
  }
  return RaptorIndependenceDecision(ones, m, batch.k(),
                                    *PrivacyBudget::Create(batch.epsilon()),
                                    gamma, config);
}

absl::StatusOr<Verdict> RaptorIndependenceTest(
    std::span<const std::pair<int, int>> samples, int k,
    const PrivacyBudget& budget, double gamma,
    const RaptorIndependenceConfig& config, Rng& rng) {
  absl::StatusOr<PrivatizedBatch> batch =
      EncodeRaptor2Batch(k, budget, samples, config.repetitions, rng);
  if (!batch.ok()) return batch.status();
  return RaptorIndependenceTest(*batch, gamma, config);
}

}  // namespace ldptest
