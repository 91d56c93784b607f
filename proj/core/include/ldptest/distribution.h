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

// Exact probability mass functions over [k] and [k] x [k], the distances
// between them, and the hard-instance families used by the testers.

#ifndef LDPTEST_DISTRIBUTION_H_
#define LDPTEST_DISTRIBUTION_H_

#include <span>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"

namespace ldptest {

// Tolerance on the total mass of a validated pmf.
inline constexpr double kMassTolerance = 1e-12;

// A pmf over [k] = {0, ..., k-1}. Immutable once built.
class Distribution {
 public:
  // Fails unless every entry is finite and >= 0 and the entries sum to 1
  // within kMassTolerance.
  static absl::StatusOr<Distribution> Create(std::vector<double> pmf);
  // Rescales nonnegative finite weights with positive total to unit mass.
  static absl::StatusOr<Distribution> Normalized(std::vector<double> weights);
  static Distribution Uniform(int k);
  static Distribution PointMass(int k, int symbol);

  int k() const { return static_cast<int>(pmf_.size()); }
  double operator[](int x) const { return pmf_[x]; }
  std::span<const double> pmf() const { return pmf_; }

  friend bool operator==(const Distribution&, const Distribution&) = default;

 private:
  explicit Distribution(std::vector<double> pmf) : pmf_(std::move(pmf)) {}

  std::vector<double> pmf_;
};

// A pmf over [k] x [k], stored row-major: entry (x1, x2) lives at x1 * k + x2.
class JointDistribution {
 public:
  static absl::StatusOr<JointDistribution> Create(int k,
                                                  std::vector<double> pmf);
  static absl::StatusOr<JointDistribution> Normalized(
      int k, std::vector<double> weights);
  static JointDistribution Uniform(int k);

  int k() const { return k_; }
  double at(int x1, int x2) const { return pmf_[x1 * k_ + x2]; }
  std::span<const double> pmf() const { return pmf_; }

  friend bool operator==(const JointDistribution&,
                         const JointDistribution&) = default;

 private:
  JointDistribution(int k, std::vector<double> pmf)
      : k_(k), pmf_(std::move(pmf)) {}

  int k_;
  std::vector<double> pmf_;
};

// Paninski perturbation of uniform: pairs (2i, 2i+1) receive
// (1 + 2 theta_i gamma)/k and (1 - 2 theta_i gamma)/k. `theta` holds k/2
// signs in {-1, +1}; k must be even and gamma in [0, 1/2].
absl::StatusOr<Distribution> Paninski(int k, double gamma,
                                      std::span<const int> theta);

// Joint perturbation of the uniform pmf on [k] x [k] whose row and column
// sums stay exactly 1/k. Column pairs (2j, 2j+1) get +/- 2 gamma / k^2 with
// sign +1 on the first k/2 rows of the even column and -1 on the rest.
// TV to the product of its marginals is exactly gamma.
absl::StatusOr<JointDistribution> BalancedPaninskiJoint(int k, double gamma);

absl::StatusOr<double> TvDistance(const Distribution& p,
                                  const Distribution& q);
absl::StatusOr<double> L2DistanceSq(const Distribution& p,
                                    const Distribution& q);
// Sum (p - q)^2 / q. Requires q > 0 everywhere.
absl::StatusOr<double> ChiSquareDivergence(const Distribution& p,
                                           const Distribution& q);

absl::StatusOr<double> TvDistance(const JointDistribution& p,
                                  const JointDistribution& q);
absl::StatusOr<double> L2DistanceSq(const JointDistribution& p,
                                    const JointDistribution& q);

// Row sums and column sums.
std::pair<Distribution, Distribution> Marginals(const JointDistribution& j);

absl::StatusOr<JointDistribution> Product(const Distribution& p1,
                                          const Distribution& p2);

// TV(j, marginal1 x marginal2).
double TvToOwnProduct(const JointDistribution& j);

// Squared l2 norm of p.
double SquaredNorm(std::span<const double> v);

}  // namespace ldptest

#endif  // LDPTEST_DISTRIBUTION_H_
