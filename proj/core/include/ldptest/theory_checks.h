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

// Brute-force oracles for the moment identities and concentration bounds
// behind the testers: random half-size subset perturbations, the RAPPOR
// collision statistic, and the lower-bound matrices of RAPPOR and HR.

#ifndef LDPTEST_THEORY_CHECKS_H_
#define LDPTEST_THEORY_CHECKS_H_

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "ldptest/distribution.h"
#include "ldptest/mechanisms.h"
#include "ldptest/random.h"
#include "nlohmann/json.hpp"

namespace ldptest {

struct ClaimCheck {
  std::string name;
  double observed = 0.0;
  // Expected value or bound, depending on the claim.
  double reference = 0.0;
  bool passed = false;
};

struct MomentReport {
  std::string name;
  // False when the outcome space was sampled instead of enumerated.
  bool exact = true;
  int64_t outcomes = 0;
  double e_z2 = 0.0;
  double e_z4 = 0.0;
  double predicted_e_z2 = 0.0;
  // (threshold t, P(|Z| > t)).
  std::vector<std::pair<double, double>> exceedance;
  // (q, smallest v with P(|Z| <= v) >= q).
  std::vector<std::pair<double, double>> abs_quantiles;
  // Mass of Z^2 / |delta|^2 inside the two-sided band around its mean.
  // Reported only; the band can be empty at small k.
  double band_fraction = -1.0;
  std::vector<ClaimCheck> claims;

  bool AllPassed() const;
};

nlohmann::json MomentReportToJson(const MomentReport& r);

// Distribution of Z = sum_i delta_i X_i with X uniform over weight-k/2
// binary vectors. Enumerates every subset for k <= 16; otherwise samples
// `mc_draws` subsets from `rng` (required then). Checks
//   E[Z^2] = k/(4(k-1)) ||delta||^2,
//   E[Z^4] <= 19 (1/2) ||delta||^4,
// and, at alpha = 1/477, that Z^2/||delta||^2 falls in
//   [c - sqrt(38 alpha/(1-2 alpha) * 1/2), c/(1-2 alpha)], c = k/(4(k-1)),
// with probability >= alpha.
absl::StatusOr<MomentReport> SubsetZMoments(
    std::span<const double> delta, std::span<const double> thresholds = {},
    Rng* rng = nullptr, int64_t mc_draws = 1'000'000);

// P(|p(S) - 1/2| > gamma/sqrt(5k)) over uniform half-size subsets, checked
// against 1/477. Exact for k <= 16.
absl::StatusOr<MomentReport> SubsetExceedance(const Distribution& p,
                                              double gamma);

// Z = sum_ij delta_ij X_i Y_j with X, Y independent uniform weight-k/2
// vectors; delta must have zero row and column sums. Enumerates all subset
// pairs for k <= 8, else samples. Checks
//   E[Z^2] = (k/(4(k-1)))^2 ||delta||_F^2
// and the bracket ||delta||_F^2/16 <= E[Z^2] <= ||delta||_F^2/4.
absl::StatusOr<MomentReport> JointZMoments(
    int k, std::span<const double> delta,
    std::span<const double> thresholds = {}, Rng* rng = nullptr,
    int64_t mc_draws = 1'000'000);

// Distribution of k |p(S1 x S2) - p1(S1) p2(S2)| / gamma for `p` under
// uniform subset pairs. Quantiles at 0.25, 0.5, 0.75; exceedance at
// `thresholds`.
absl::StatusOr<MomentReport> JointPerturbationProfile(
    const JointDistribution& p, double gamma,
    std::span<const double> thresholds = {}, Rng* rng = nullptr,
    int64_t mc_draws = 200'000);

// Exact moments of the RAPPOR statistic for n users drawn from p, by
// enumerating all (2^k)^n message tuples (at most 2^24). Checks E[T], the
// variance bound 4kn^2 + 8nE[T], the cross moments E[N_x N_y],
// E[N_x^2 N_y], E[N_x^2 N_y^2], Cov(f(N_x), f(N_y)) in closed and assembled
// form, and Var f(N_x), with f(N) = (N - (n-1)lambda)^2 - N + (n-1)lambda^2.
absl::StatusOr<MomentReport> RapporTMomentCheck(int n,
                                                const PrivacyBudget& budget,
                                                const Distribution& p);

struct LbMatrix {
  MechanismKind mechanism = MechanismKind::kRappor;
  int k = 0;
  double epsilon = 0.0;
  // (k/2) x (k/2), row-major.
  int size = 0;
  std::vector<double> h;
  std::vector<ClaimCheck> claims;

  double at(int i, int j) const { return h[i * size + j]; }
  bool AllPassed() const;
};

nlohmann::json LbMatrixToJson(const LbMatrix& m);

// H(i, j) = k sum_z (W(z|2i) - W(z|2i+1)) (W(z|2j) - W(z|2j+1)) / sum_x W(z|x)
// from the explicit channel. RAPPOR needs even k <= 10, HR even k <= 256.
// Checks symmetry, vanishing off-diagonals, and the diagonal bound
// (e^{2 eps} - 1)^2 / e^eps for RAPPOR or the constant 2 alpha_H^2 for HR.
absl::StatusOr<LbMatrix> ComputeLbMatrix(MechanismKind mechanism, int k,
                                         const PrivacyBudget& budget);

struct SuiteSection {
  std::string name;
  int cases = 0;
  int failures = 0;
  double seconds = 0.0;
  // Failing claims, capped at a handful per section.
  nlohmann::json failed = nlohmann::json::array();
};

struct SuiteReport {
  std::vector<SuiteSection> sections;
  bool AllPassed() const;
};

nlohmann::json SuiteReportToJson(const SuiteReport& r);

// Every check above over randomized and exhaustive cases: the HR Parseval
// identity (200 cases, k <= 64), the pair-transform identity (100 cases,
// k = 4), RAPPOR statistic moments (k <= 3, n <= 3), subset moments (50
// zero-sum perturbations, k <= 12), Paninski exceedance (k = 10), joint
// moments (k in {4, 6, 8}), and lower-bound matrices.
absl::StatusOr<SuiteReport> RunAppendixSuite(uint64_t seed);

}  // namespace ldptest

#endif  // LDPTEST_THEORY_CHECKS_H_
