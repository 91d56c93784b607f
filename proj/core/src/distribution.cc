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

#include "ldptest/distribution.h"

#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"

namespace ldptest {
namespace {

absl::Status ValidatePmf(std::span<const double> pmf) {
  if (pmf.empty()) {
    return absl::InvalidArgumentError("pmf must have at least one entry");
  }
  double total = 0.0;
  for (size_t i = 0; i < pmf.size(); ++i) {
    if (!std::isfinite(pmf[i]) || pmf[i] < 0.0) {
      return absl::InvalidArgumentError(
          absl::StrCat("pmf entry ", i, " is negative or not finite"));
    }
    total += pmf[i];
  }
  if (std::abs(total - 1.0) > kMassTolerance) {
    return absl::InvalidArgumentError(
        absl::StrCat("pmf sums to ", total, ", expected 1"));
  }
  return absl::OkStatus();
}

absl::Status SameSize(size_t a, size_t b) {
  if (a != b) {
    return absl::InvalidArgumentError(
        absl::StrCat("alphabet size mismatch: ", a, " vs ", b));
  }
  return absl::OkStatus();
}

absl::Status Rescale(std::vector<double>& weights) {
  double total = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) {
      return absl::InvalidArgumentError("weights must be finite and >= 0");
    }
    total += w;
  }
  if (!(total > 0.0)) {
    return absl::InvalidArgumentError("weights must have positive total");
  }
  for (double& w : weights) w /= total;
  return absl::OkStatus();
}

double HalfL1(std::span<const double> p, std::span<const double> q) {
  double sum = 0.0;
  for (size_t i = 0; i < p.size(); ++i) sum += std::abs(p[i] - q[i]);
  return 0.5 * sum;
}

double L2Sq(std::span<const double> p, std::span<const double> q) {
  double sum = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    const double d = p[i] - q[i];
    sum += d * d;
  }
  return sum;
}

}  // namespace

absl::StatusOr<Distribution> Distribution::Create(std::vector<double> pmf) {
  if (absl::Status s = ValidatePmf(pmf); !s.ok()) return s;
  return Distribution(std::move(pmf));
}

absl::StatusOr<Distribution> Distribution::Normalized(
    std::vector<double> weights) {
  if (weights.empty()) {
    return absl::InvalidArgumentError("pmf must have at least one entry");
  }
  if (absl::Status s = Rescale(weights); !s.ok()) return s;
  return Distribution(std::move(weights));
}

Distribution Distribution::Uniform(int k) {
  return Distribution(std::vector<double>(k, 1.0 / k));
}

Distribution Distribution::PointMass(int k, int symbol) {
  std::vector<double> pmf(k, 0.0);
  pmf[symbol] = 1.0;
  return Distribution(std::move(pmf));
}

absl::StatusOr<JointDistribution> JointDistribution::Create(
    int k, std::vector<double> pmf) {
  if (k < 1 || pmf.size() != static_cast<size_t>(k) * k) {
    return absl::InvalidArgumentError(
        absl::StrCat("joint pmf needs k*k entries for k=", k, ", got ",
                     pmf.size()));
  }
  if (absl::Status s = ValidatePmf(pmf); !s.ok()) return s;
  return JointDistribution(k, std::move(pmf));
}

absl::StatusOr<JointDistribution> JointDistribution::Normalized(
    int k, std::vector<double> weights) {
  if (k < 1 || weights.size() != static_cast<size_t>(k) * k) {
    return absl::InvalidArgumentError(
        absl::StrCat("joint pmf needs k*k entries for k=", k));
  }
  if (absl::Status s = Rescale(weights); !s.ok()) return s;
  return JointDistribution(k, std::move(weights));
}

JointDistribution JointDistribution::Uniform(int k) {
  return JointDistribution(
      k, std::vector<double>(static_cast<size_t>(k) * k, 1.0 / (k * k)));
}

absl::StatusOr<Distribution> Paninski(int k, double gamma,
                                      std::span<const int> theta) {
  if (k < 2 || k % 2 != 0) {
    return absl::InvalidArgumentError("alphabet must be even");
  }
  if (!(gamma >= 0.0 && gamma <= 0.5)) {
    return absl::InvalidArgumentError("gamma must lie in [0, 1/2]");
  }
  if (theta.size() != static_cast<size_t>(k / 2)) {
    return absl::InvalidArgumentError(
        absl::StrCat("expected ", k / 2, " signs, got ", theta.size()));
  }
  std::vector<double> pmf(k);
  for (int i = 0; i < k / 2; ++i) {
    if (theta[i] != 1 && theta[i] != -1) {
      return absl::InvalidArgumentError("signs must be -1 or +1");
    }
    pmf[2 * i] = (1.0 + 2.0 * theta[i] * gamma) / k;
    pmf[2 * i + 1] = (1.0 - 2.0 * theta[i] * gamma) / k;
  }
  return Distribution::Create(std::move(pmf));
}

absl::StatusOr<JointDistribution> BalancedPaninskiJoint(int k, double gamma) {
  if (k < 2 || k % 2 != 0) {
    return absl::InvalidArgumentError("alphabet must be even");
  }
  if (!(gamma >= 0.0 && gamma <= 0.5)) {
    return absl::InvalidArgumentError("gamma must lie in [0, 1/2]");
  }
  const double base = 1.0 / (static_cast<double>(k) * k);
  std::vector<double> pmf(static_cast<size_t>(k) * k);
  for (int row = 0; row < k; ++row) {
    const double sign = row < k / 2 ? 1.0 : -1.0;
    for (int pair = 0; pair < k / 2; ++pair) {
      pmf[row * k + 2 * pair] = base * (1.0 + 2.0 * sign * gamma);
      pmf[row * k + 2 * pair + 1] = base * (1.0 - 2.0 * sign * gamma);
    }
  }
  return JointDistribution::Create(k, std::move(pmf));
}

absl::StatusOr<double> TvDistance(const Distribution& p,
                                  const Distribution& q) {
  if (absl::Status s = SameSize(p.k(), q.k()); !s.ok()) return s;
  return HalfL1(p.pmf(), q.pmf());
}

absl::StatusOr<double> L2DistanceSq(const Distribution& p,
                                    const Distribution& q) {
  if (absl::Status s = SameSize(p.k(), q.k()); !s.ok()) return s;
  return L2Sq(p.pmf(), q.pmf());
}

absl::StatusOr<double> ChiSquareDivergence(const Distribution& p,
                                           const Distribution& q) {
  if (absl::Status s = SameSize(p.k(), q.k()); !s.ok()) return s;
  double sum = 0.0;
  for (int i = 0; i < p.k(); ++i) {
    if (q[i] <= 0.0) {
      return absl::InvalidArgumentError(
          absl::StrCat("chi-square reference has zero mass at ", i));
    }
    const double d = p[i] - q[i];
    sum += d * d / q[i];
  }
  return sum;
}

absl::StatusOr<double> TvDistance(const JointDistribution& p,
                                  const JointDistribution& q) {
  if (absl::Status s = SameSize(p.k(), q.k()); !s.ok()) return s;
  return HalfL1(p.pmf(), q.pmf());
}

absl::StatusOr<double> L2DistanceSq(const JointDistribution& p,
                                    const JointDistribution& q) {
  if (absl::Status s = SameSize(p.k(), q.k()); !s.ok()) return s;
  return L2Sq(p.pmf(), q.pmf());
}

std::pair<Distribution, Distribution> Marginals(const JointDistribution& j) {
  const int k = j.k();
  std::vector<double> rows(k, 0.0);
  std::vector<double> cols(k, 0.0);
  for (int x1 = 0; x1 < k; ++x1) {
    for (int x2 = 0; x2 < k; ++x2) {
      rows[x1] += j.at(x1, x2);
      cols[x2] += j.at(x1, x2);
    }
  }
  return {*Distribution::Normalized(std::move(rows)),
          *Distribution::Normalized(std::move(cols))};
}

absl::StatusOr<JointDistribution> Product(const Distribution& p1,
                                          const Distribution& p2) {
  if (absl::Status s = SameSize(p1.k(), p2.k()); !s.ok()) return s;
  const int k = p1.k();
  std::vector<double> pmf(static_cast<size_t>(k) * k);
  for (int x1 = 0; x1 < k; ++x1) {
    for (int x2 = 0; x2 < k; ++x2) pmf[x1 * k + x2] = p1[x1] * p2[x2];
  }
  return JointDistribution::Normalized(k, std::move(pmf));
}

double TvToOwnProduct(const JointDistribution& j) {
  auto [p1, p2] = Marginals(j);
  return *TvDistance(j, *Product(p1, p2));
}

double SquaredNorm(std::span<const double> v) {
  double sum = 0.0;
  for (double x : v) sum += x * x;
  return sum;
}

}  // namespace ldptest
