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

// Sylvester Hadamard matrices by parity arithmetic, the Hadamard Response
// code sets C_x, and exact output distributions of the HR channel.

#ifndef LDPTEST_HADAMARD_H_
#define LDPTEST_HADAMARD_H_

#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "ldptest/distribution.h"

namespace ldptest {

class PrivacyBudget;

// Smallest power of two strictly greater than k.
int HadamardOutputSize(int k);

// (-1)^popcount(r & c). K must be a power of two and 0 <= r, c < K.
absl::StatusOr<int> HadamardEntry(int K, int r, int c);

inline bool IsPowerOfTwo(int64_t v) { return v > 0 && (v & (v - 1)) == 0; }

// An HR code over inputs [k]: output size K = 2^ceil(log2(k+1)) and an
// injection phi from [k] into the nonzero rows of H_K. C_x is the set of
// columns z with H_K[phi(x)][z] = +1.
class HadamardCode {
 public:
  // Default injection: phi(x) = x + 2 when k + 2 <= K, else phi(x) = x + 1.
  // The first choice sends each pair (2i, 2i+1) to rows that differ only in
  // the lowest bit.
  static absl::StatusOr<HadamardCode> Create(int k);
  // Any injection into [1, K).
  static absl::StatusOr<HadamardCode> CreateWithInjection(
      int k, std::vector<int> phi);

  int k() const { return k_; }
  int output_size() const { return K_; }
  int row(int x) const { return phi_[x]; }
  std::span<const int> injection() const { return phi_; }

  // z in C_x, unchecked.
  bool Contains(int z, int x) const {
    return (__builtin_popcount(static_cast<unsigned>(z & phi_[x])) & 1) == 0;
  }
  // z in C_x with range checks.
  absl::StatusOr<bool> Membership(int z, int x) const;

  // |D_z| = #{x : z in C_x}, precomputed at construction.
  int DzSize(int z) const { return dz_[z]; }

 private:
  HadamardCode(int k, int K, std::vector<int> phi);

  int k_;
  int K_;
  std::vector<int> phi_;
  std::vector<int> dz_;
};

// HR output pmf under uniform input:
//   q*(z) = 1/K + (alpha_H/K)(2|D_z|/k - 1).
Distribution QStar(const HadamardCode& code, const PrivacyBudget& budget);

// Exact HR output pmf under inputs drawn from p:
//   q(z) = 1/K + (alpha_H/K)(2 p(D_z) - 1).
absl::StatusOr<Distribution> PushforwardHr(const HadamardCode& code,
                                           const Distribution& p,
                                           const PrivacyBudget& budget);

// Exact pmf over [K] x [K] of (HR(X1), HR(X2)) with independent channel
// randomness per coordinate and (X1, X2) ~ p.
absl::StatusOr<JointDistribution> PushforwardT(const HadamardCode& code,
                                               const JointDistribution& p,
                                               const PrivacyBudget& budget);

// Unnormalized Walsh-Hadamard transform; applying it twice scales by K.
absl::StatusOr<std::vector<double>> Fwht(std::vector<double> v);
// In-place variant. v.size() must be a power of two.
void FwhtInPlace(std::span<double> v);

}  // namespace ldptest

#endif  // LDPTEST_HADAMARD_H_
