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

#include "ldptest/uniformity.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "ldptest/hadamard.h"
#include "ldptest/sampling.h"

namespace ldptest {
namespace {

absl::Status RequireKind(const PrivatizedBatch& batch, MechanismKind kind) {
  if (batch.kind() != kind) {
    return absl::InvalidArgumentError(
        absl::StrCat("expected a ", MechanismName(kind), " batch, got ",
                     MechanismName(batch.kind())));
  }
  return absl::OkStatus();
}

// Keeps the first min(Poisson(m), len) symbols.
std::vector<int64_t> PoissonizedCounts(std::span<const int> samples,
                                       int alphabet, int64_t m, Rng& rng) {
  const int64_t keep =
      std::min<int64_t>(Poisson(rng, static_cast<double>(m)),
                        static_cast<int64_t>(samples.size()));
  std::vector<int64_t> counts(alphabet, 0);
  for (int64_t i = 0; i < keep; ++i) ++counts[samples[i]];
  return counts;
}

Verdict RaptorVerdict(int unbiased, int repetitions, int64_t m, int k,
                      const PrivacyBudget& budget, double gamma,
                      const RaptorUniformityConfig& config) {
  Verdict v;
  v.test = "raptor-uniformity";
  v.statistic = static_cast<double>(unbiased) / repetitions;
  v.threshold = RaptorTauThreshold(config.c);
  v.decision =
      v.statistic > v.threshold ? Decision::kUniform : Decision::kNotUniform;
  v.n = m * repetitions;
  v.k = k;
  v.epsilon = budget.epsilon();
  v.gamma = gamma;
  v.insufficient_samples =
      m < HoeffdingSampleSize(budget, RaptorGammaPrime(k, gamma),
                              RaptorDelta(config.c));
  return v;
}

}  // namespace

absl::StatusOr<RapporCounts> CountRappor(const PrivatizedBatch& batch) {
  if (absl::Status s = RequireKind(batch, MechanismKind::kRappor); !s.ok()) {
    return s;
  }
  RapporCounts counts;
  counts.n = batch.size();
  counts.ones.assign(batch.k(), 0);
  for (int64_t i = 0; i < batch.size(); ++i) {
    std::span<const int32_t> bits = batch.message(i);
    for (int x = 0; x < batch.k(); ++x) counts.ones[x] += bits[x];
  }
  return counts;
}

absl::StatusOr<double> RapporStatistic(const RapporCounts& counts,
                                       const PrivacyBudget& budget) {
  if (counts.n < 2) {
    return absl::InvalidArgumentError("statistic needs at least 2 users");
  }
  const int k = static_cast<int>(counts.ones.size());
  if (k < 1) return absl::InvalidArgumentError("empty count vector");
  const double lambda = budget.alpha_rappor() / k + budget.beta_rappor();
  const double shift = (counts.n - 1) * lambda;
  double t = 0.0;
  for (int64_t nx : counts.ones) {
    const double d = static_cast<double>(nx) - shift;
    t += d * d - static_cast<double>(nx);
  }
  return t + k * (counts.n - 1) * lambda * lambda;
}

double RapporThreshold(int64_t n, int k, const PrivacyBudget& budget,
                       double gamma) {
  const double a = budget.alpha_rappor();
  return static_cast<double>(n) * (n - 1) * a * a * gamma * gamma / k;
}

absl::StatusOr<Verdict> RapporUniformityTest(const RapporCounts& counts,
                                             const PrivacyBudget& budget,
                                             double gamma) {
  absl::StatusOr<double> t = RapporStatistic(counts, budget);
  if (!t.ok()) return t.status();
  const int k = static_cast<int>(counts.ones.size());
  Verdict v;
  v.test = "rappor-uniformity";
  v.statistic = *t;
  v.threshold = RapporThreshold(counts.n, k, budget, gamma);
  v.decision =
      v.statistic < v.threshold ? Decision::kUniform : Decision::kNotUniform;
  v.n = counts.n;
  v.k = k;
  v.epsilon = budget.epsilon();
  v.gamma = gamma;
  return v;
}

absl::StatusOr<Verdict> RapporUniformityTest(const PrivatizedBatch& batch,
                                             double gamma) {
  absl::StatusOr<RapporCounts> counts = CountRappor(batch);
  if (!counts.ok()) return counts.status();
  return RapporUniformityTest(*counts, *PrivacyBudget::Create(batch.epsilon()),
                              gamma);
}

int64_t PoissonizedSize(int64_t len_a, int64_t len_b) {
  return static_cast<int64_t>(std::floor(0.9 * std::min(len_a, len_b)));
}

Verdict L2ClosenessFromCounts(std::span<const int64_t> counts_a,
                              std::span<const int64_t> counts_b, int64_t m,
                              double gamma_l2) {
  double z = 0.0;
  for (size_t i = 0; i < counts_a.size(); ++i) {
    const double a = static_cast<double>(counts_a[i]);
    const double b = static_cast<double>(counts_b[i]);
    z += (a - b) * (a - b) - a - b;
  }
  Verdict v;
  v.test = "l2-closeness";
  v.statistic = z;
  v.threshold = static_cast<double>(m) * m * gamma_l2 * gamma_l2 / 2.0;
  v.decision = z < v.threshold ? Decision::kClose : Decision::kFar;
  v.n = m;
  v.k = static_cast<int>(counts_a.size());
  return v;
}

absl::StatusOr<Verdict> L2ClosenessTest(std::span<const int> samples_a,
                                        std::span<const int> samples_b,
                                        int alphabet, double gamma_l2,
                                        Rng& rng) {
  if (samples_a.empty() || samples_b.empty()) {
    return absl::InvalidArgumentError("closeness test needs two nonempty inputs");
  }
  if (!(gamma_l2 > 0.0)) {
    return absl::InvalidArgumentError("gamma_l2 must be > 0");
  }
  for (std::span<const int> s : {samples_a, samples_b}) {
    for (int x : s) {
      if (x < 0 || x >= alphabet) {
        return absl::OutOfRangeError(
            absl::StrCat("symbol ", x, " outside [0, ", alphabet, ")"));
      }
    }
  }
  const int64_t m = PoissonizedSize(samples_a.size(), samples_b.size());
  const std::vector<int64_t> a = PoissonizedCounts(samples_a, alphabet, m, rng);
  const std::vector<int64_t> b = PoissonizedCounts(samples_b, alphabet, m, rng);
  return L2ClosenessFromCounts(a, b, m, gamma_l2);
}

double HrL2Gap(int k, const PrivacyBudget& budget, double gamma) {
  const double K = HadamardOutputSize(k);
  return 2.0 * budget.alpha_hr() * gamma / std::sqrt(k * K);
}

absl::StatusOr<Verdict> HrUniformityTest(const PrivatizedBatch& batch,
                                         double gamma, Rng& rng) {
  if (absl::Status s = RequireKind(batch, MechanismKind::kHr); !s.ok()) {
    return s;
  }
  const PrivacyBudget budget = *PrivacyBudget::Create(batch.epsilon());
  absl::StatusOr<HadamardCode> code = HadamardCode::Create(batch.k());
  if (!code.ok()) return code.status();
  const std::vector<int> synthetic =
      Sample(QStar(*code, budget), batch.size(), rng);
  const std::span<const int32_t> msgs = batch.messages();
  absl::StatusOr<Verdict> l2 = L2ClosenessTest(
      std::span<const int>(msgs.data(), msgs.size()), synthetic,
      code->output_size(), HrL2Gap(batch.k(), budget, gamma), rng);
  if (!l2.ok()) return l2.status();
  Verdict v = *l2;
  v.test = "hr-uniformity";
  v.decision = l2->decision == Decision::kClose ? Decision::kUniform
                                                : Decision::kNotUniform;
  v.n = batch.size();
  v.k = batch.k();
  v.epsilon = batch.epsilon();
  v.gamma = gamma;
  return v;
}

double BiasEstimateFromCount(int64_t ones, int64_t n,
                             const PrivacyBudget& budget) {
  const double e = std::exp(budget.epsilon());
  const double mean = static_cast<double>(ones) / n;
  return (mean - 1.0 / (e + 1.0)) * (e + 1.0) / (e - 1.0);
}

absl::StatusOr<double> BiasEstimate(std::span<const int32_t> bits,
                                    const PrivacyBudget& budget) {
  if (bits.empty()) return absl::InvalidArgumentError("no bits to estimate");
  int64_t ones = 0;
  for (int32_t b : bits) ones += b != 0 ? 1 : 0;
  return BiasEstimateFromCount(ones, static_cast<int64_t>(bits.size()),
                               budget);
}

int64_t HoeffdingSampleSize(const PrivacyBudget& budget, double gamma_prime,
                            double delta) {
  const double e = std::exp(budget.epsilon());
  const double r = (e + 1.0) / (e - 1.0);
  return static_cast<int64_t>(
      std::ceil(8.0 * r * r * std::log(2.0 / delta) /
                (gamma_prime * gamma_prime)));
}

absl::StatusOr<Verdict> BiasTestFromCount(int64_t ones, int64_t n,
                                          const PrivacyBudget& budget,
                                          double gamma_prime, double delta) {
  if (n < 1) return absl::InvalidArgumentError("no bits to test");
  if (!(delta > 0.0 && delta < 0.5)) {
    return absl::InvalidArgumentError("delta must lie in (0, 1/2)");
  }
  Verdict v;
  v.test = "bias";
  v.statistic = std::abs(BiasEstimateFromCount(ones, n, budget) - 0.5);
  v.threshold = gamma_prime / 2.0;
  v.decision =
      v.statistic > v.threshold ? Decision::kBiased : Decision::kUnbiased;
  v.n = n;
  v.k = 2;
  v.epsilon = budget.epsilon();
  v.gamma = gamma_prime;
  v.insufficient_samples = n < HoeffdingSampleSize(budget, gamma_prime, delta);
  return v;
}

absl::StatusOr<Verdict> BiasTest(std::span<const int32_t> bits,
                                 const PrivacyBudget& budget,
                                 double gamma_prime, double delta,
                                 const BiasTestOptions& options) {
  if (bits.empty()) return absl::InvalidArgumentError("no bits to test");
  const int batches = options.majority_batches;
  if (batches == 0) {
    int64_t ones = 0;
    for (int32_t b : bits) ones += b != 0 ? 1 : 0;
    return BiasTestFromCount(ones, static_cast<int64_t>(bits.size()), budget,
                             gamma_prime, delta);
  }
  if (batches < 0 || batches % 2 == 0) {
    return absl::InvalidArgumentError("majority batch count must be odd");
  }
  const int64_t size = static_cast<int64_t>(bits.size()) / batches;
  if (size < 1) {
    return absl::InvalidArgumentError("fewer bits than majority batches");
  }
  int biased = 0;
  for (int b = 0; b < batches; ++b) {
    int64_t ones = 0;
    for (int64_t i = b * size; i < (b + 1) * size; ++i) ones += bits[i] ? 1 : 0;
    absl::StatusOr<Verdict> sub =
        BiasTestFromCount(ones, size, budget, gamma_prime, delta);
    if (!sub.ok()) return sub.status();
    biased += sub->decision == Decision::kBiased ? 1 : 0;
  }
  Verdict v;
  v.test = "bias-majority";
  v.statistic = static_cast<double>(biased) / batches;
  v.threshold = 0.5;
  v.decision =
      v.statistic > v.threshold ? Decision::kBiased : Decision::kUnbiased;
  v.n = size * batches;
  v.k = 2;
  v.epsilon = budget.epsilon();
  v.gamma = gamma_prime;
  return v;
}

double RaptorDelta(double c) { return c / (2.0 * (1.0 + c)); }

double RaptorGammaPrime(int k, double gamma) {
  return gamma / std::sqrt(5.0 * k);
}

double RaptorTauThreshold(double c) {
  return 1.0 - (RaptorDelta(c) + c / 4.0);
}

Verdict RaptorDecision(std::span<const int64_t> ones, int64_t m, int k,
                       const PrivacyBudget& budget, double gamma,
                       const RaptorUniformityConfig& config) {
  const double half_gap = RaptorGammaPrime(k, gamma) / 2.0;
  int unbiased = 0;
  for (int64_t count : ones) {
    const double rho = BiasEstimateFromCount(count, m, budget);
    unbiased += std::abs(rho - 0.5) > half_gap ? 0 : 1;
  }
  return RaptorVerdict(unbiased, static_cast<int>(ones.size()), m, k, budget,
                       gamma, config);
}

absl::StatusOr<Verdict> RaptorUniformityTest(
    const PrivatizedBatch& batch, double gamma,
    const RaptorUniformityConfig& config) {
  if (absl::Status s = RequireKind(batch, MechanismKind::kRaptor); !s.ok()) {
    return s;
  }
  const PrivacyBudget budget = *PrivacyBudget::Create(batch.epsilon());
  const int reps = batch.repetitions();
  const int64_t m = batch.repetition_size();
  if (reps < 1 || m < 1) {
    return absl::InvalidArgumentError("batch has no repetitions");
  }
  const std::span<const int32_t> bits = batch.messages();
  if (config.bias.majority_batches > 0) {
    int unbiased = 0;
    for (int t = 0; t < reps; ++t) {
      absl::StatusOr<Verdict> sub =
          BiasTest(bits.subspan(t * m, m), budget,
                   RaptorGammaPrime(batch.k(), gamma), RaptorDelta(config.c),
                   config.bias);
      if (!sub.ok()) return sub.status();
      unbiased += sub->decision == Decision::kUnbiased ? 1 : 0;
    }
    return RaptorVerdict(unbiased, reps, m, batch.k(), budget, gamma, config);
  }
  std::vector<int64_t> ones(reps, 0);
  for (int t = 0; t < reps; ++t) {
    for (int64_t i = t * m; i < (t + 1) * m; ++i) ones[t] += bits[i];
  }
  return RaptorDecision(ones, m, batch.k(), budget, gamma, config);
}

absl::StatusOr<Verdict> RaptorUniformityTest(
    std::span<const int> samples, int k, const PrivacyBudget& budget,
    double gamma, const RaptorUniformityConfig& config, Rng& rng) {
  const int reps = config.repetitions;
  if (reps < 1) return absl::InvalidArgumentError("repetitions must be >= 1");
  if (!config.parallel_bits) {
    absl::StatusOr<PrivatizedBatch> batch =
        EncodeRaptorBatch(k, budget, samples, reps, rng);
    if (!batch.ok()) return batch.status();
    return RaptorUniformityTest(*batch, gamma, config);
  }
  if (samples.empty()) return absl::InvalidArgumentError("no samples");
  const PrivacyBudget per_bit = budget.Split(reps);
  std::vector<int64_t> ones(reps, 0);
  for (int t = 0; t < reps; ++t) {
    absl::StatusOr<PublicCoin> coin = PublicCoin::Draw(k, rng);
    if (!coin.ok()) return coin.status();
    for (int x : samples) {
      if (x < 0 || x >= k) {
        return absl::OutOfRangeError(
            absl::StrCat("sample ", x, " outside [0, ", k, ")"));
      }
      ones[t] += RaptorEncode(x, *coin, per_bit, rng);
    }
  }
  Verdict v = RaptorDecision(ones, static_cast<int64_t>(samples.size()), k,
                             per_bit, gamma, config);
  v.test = "raptor-uniformity-parallel";
  v.n = static_cast<int64_t>(samples.size());
  v.epsilon = budget.epsilon();
  return v;
}

}  // namespace ldptest
