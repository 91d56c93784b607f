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

#include "ldptest/hadamard.h"

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "ldptest/mechanisms.h"

namespace ldptest {

int HadamardOutputSize(int k) {
  int K = 1;
  while (K < k + 1) K <<= 1;
  return K;
}

absl::StatusOr<int> HadamardEntry(int K, int r, int c) {
  if (!IsPowerOfTwo(K)) {
    return absl::InvalidArgumentError(
        absl::StrCat("Hadamard order ", K, " is not a power of two"));
  }
  if (r < 0 || r >= K || c < 0 || c >= K) {
    return absl::OutOfRangeError(
        absl::StrCat("index (", r, ", ", c, ") outside H_", K));
  }
  return (__builtin_popcount(static_cast<unsigned>(r & c)) & 1) ? -1 : 1;
}

HadamardCode::HadamardCode(int k, int K, std::vector<int> phi)
    : k_(k), K_(K), phi_(std::move(phi)), dz_(K, 0) {
  for (int z = 0; z < K_; ++z) {
    for (int x = 0; x < k_; ++x) dz_[z] += Contains(z, x) ? 1 : 0;
  }
}

absl::StatusOr<HadamardCode> HadamardCode::Create(int k) {
  if (k < 1) return absl::InvalidArgumentError("alphabet must be positive");
  const int K = HadamardOutputSize(k);
  const int shift = k + 2 <= K ? 2 : 1;
  std::vector<int> phi(k);
  for (int x = 0; x < k; ++x) phi[x] = x + shift;
  return HadamardCode(k, K, std::move(phi));
}

absl::StatusOr<HadamardCode> HadamardCode::CreateWithInjection(
    int k, std::vector<int> phi) {
  if (k < 1) return absl::InvalidArgumentError("alphabet must be positive");
  if (phi.size() != static_cast<size_t>(k)) {
    return absl::InvalidArgumentError(
        absl::StrCat("injection needs ", k, " rows, got ", phi.size()));
  }
  const int K = HadamardOutputSize(k);
  std::vector<bool> used(K, false);
  for (int r : phi) {
    if (r < 1 || r >= K) {
      return absl::InvalidArgumentError(
          absl::StrCat("row ", r, " outside [1, ", K, ")"));
    }
    if (used[r]) {
      return absl::InvalidArgumentError(
          absl::StrCat("row ", r, " used twice; injection required"));
    }
    used[r] = true;
  }
  return HadamardCode(k, K, std::move(phi));
}

absl::StatusOr<bool> HadamardCode::Membership(int z, int x) const {
  if (z < 0 || z >= K_) {
    return absl::OutOfRangeError(
        absl::StrCat("output ", z, " outside [0, ", K_, ")"));
  }
  if (x < 0 || x >= k_) {
    return absl::OutOfRangeError(
        absl::StrCat("input ", x, " outside [0, ", k_, ")"));
  }
  return Contains(z, x);
}

Distribution QStar(const HadamardCode& code, const PrivacyBudget& budget) {
  const int K = code.output_size();
  const double alpha = budget.alpha_hr();
  std::vector<double> q(K);
  for (int z = 0; z < K; ++z) {
    q[z] = 1.0 / K +
           (alpha / K) * (2.0 * code.DzSize(z) / code.k() - 1.0);
  }
  return *Distribution::Normalized(std::move(q));
}

absl::StatusOr<Distribution> PushforwardHr(const HadamardCode& code,
                                           const Distribution& p,
                                           const PrivacyBudget& budget) {
  if (p.k() != code.k()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "pmf has ", p.k(), " symbols, code expects ", code.k()));
  }
  const int K = code.output_size();
  // fwht(v)[z] = sum_x p(x) H[phi(x)][z] = 2 p(D_z) - 1.
  std::vector<double> v(K, 0.0);
  for (int x = 0; x < p.k(); ++x) v[code.row(x)] += p[x];
  FwhtInPlace(v);
  const double alpha = budget.alpha_hr();
  for (double& s : v) s = (1.0 + alpha * s) / K;
  return Distribution::Normalized(std::move(v));
}

absl::StatusOr<JointDistribution> PushforwardT(const HadamardCode& code,
                                               const JointDistribution& p,
                                               const PrivacyBudget& budget) {
  if (p.k() != code.k()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "joint pmf has ", p.k(), " symbols, code expects ", code.k()));
  }
  const int k = p.k();
  const int K = code.output_size();
  // b = H A H with A[phi(x1)][phi(x2)] = p(x1, x2).
  std::vector<double> b(static_cast<size_t>(K) * K, 0.0);
  for (int x1 = 0; x1 < k; ++x1) {
    for (int x2 = 0; x2 < k; ++x2) {
      b[static_cast<size_t>(code.row(x1)) * K + code.row(x2)] += p.at(x1, x2);
    }
  }
  for (int r = 0; r < K; ++r) {
    FwhtInPlace(std::span<double>(b).subspan(static_cast<size_t>(r) * K, K));
  }
  std::vector<double> column(K);
  for (int c = 0; c < K; ++c) {
    for (int r = 0; r < K; ++r) column[r] = b[static_cast<size_t>(r) * K + c];
    FwhtInPlace(column);
    for (int r = 0; r < K; ++r) b[static_cast<size_t>(r) * K + c] = column[r];
  }
  const double alpha = budget.alpha_hr();
  std::vector<double> t(static_cast<size_t>(K) * K);
  for (int z1 = 0; z1 < K; ++z1) {
    for (int z2 = 0; z2 < K; ++z2) {
      t[static_cast<size_t>(z1) * K + z2] =
          (1.0 + alpha * b[static_cast<size_t>(z1) * K] +
           alpha * b[z2] +
           alpha * alpha * b[static_cast<size_t>(z1) * K + z2]) /
          (static_cast<double>(K) * K);
    }
  }
  return JointDistribution::Normalized(K, std::move(t));
}

void FwhtInPlace(std::span<double> v) {
  const size_t n = v.size();
  for (size_t h = 1; h < n; h <<= 1) {
    for (size_t i = 0; i < n; i += 2 * h) {
      for (size_t j = i; j < i + h; ++j) {
        const double a = v[j];
        const double b = v[j + h];
        v[j] = a + b;
        v[j + h] = a - b;
      }
    }
  }
}

absl::StatusOr<std::vector<double>> Fwht(std::vector<double> v) {
  if (!IsPowerOfTwo(static_cast<int64_t>(v.size()))) {
    return absl::InvalidArgumentError(
        absl::StrCat("length ", v.size(), " is not a power of two"));
  }
  FwhtInPlace(v);
  return v;
}

}  // namespace ldptest
