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

// User-side LDP randomizers, their explicit channel matrices, and a
// likelihood-ratio auditor.

#ifndef LDPTEST_MECHANISMS_H_
#define LDPTEST_MECHANISMS_H_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "ldptest/distribution.h"
#include "ldptest/hadamard.h"
#include "ldptest/random.h"

namespace ldptest {

class PrivacyBudget {
 public:
  // epsilon must be finite and > 0.
  static absl::StatusOr<PrivacyBudget> Create(double epsilon);

  double epsilon() const { return epsilon_; }
  // (e^{eps/2} - 1)/(e^{eps/2} + 1).
  double alpha_rappor() const { return alpha_rappor_; }
  // 1/(e^{eps/2} + 1), the per-bit RAPPOR flip probability.
  double beta_rappor() const { return beta_rappor_; }
  // (e^eps - 1)/(e^eps + 1).
  double alpha_hr() const { return alpha_hr_; }
  // 1/(e^eps + 1), the binary randomized-response flip probability.
  double flip_probability() const { return flip_; }

  // The same budget divided evenly over `parts` messages.
  PrivacyBudget Split(int parts) const;

 private:
  explicit PrivacyBudget(double epsilon);

  double epsilon_;
  double alpha_rappor_;
  double beta_rappor_;
  double alpha_hr_;
  double flip_;
};

enum class MechanismKind {
  kRr,
  kRappor,
  kHr,
  kHrPair,
  kRaptor,
  kRaptorBivariate,
};

const char* MechanismName(MechanismKind kind);
absl::StatusOr<MechanismKind> ParseMechanism(std::string_view name);

// A uniformly random half-size subset S of [k] shared by users and curator.
class PublicCoin {
 public:
  // Fails unless k is even and `indices` are k/2 distinct members of [k].
  static absl::StatusOr<PublicCoin> FromIndices(int k,
                                                std::vector<int> indices);
  // Partial Fisher-Yates shuffle of [k]; keeps the first k/2. k must be even.
  static absl::StatusOr<PublicCoin> Draw(int k, Rng& rng);

  int k() const { return static_cast<int>(member_.size()); }
  bool Contains(int x) const { return member_[x] != 0; }
  // Sorted members.
  std::span<const int> indices() const { return indices_; }
  // p(S).
  double Mass(const Distribution& p) const;

  friend bool operator==(const PublicCoin&, const PublicCoin&) = default;

 private:
  PublicCoin(std::vector<uint8_t> member, std::vector<int> indices)
      : member_(std::move(member)), indices_(std::move(indices)) {}

  std::vector<uint8_t> member_;
  std::vector<int> indices_;
};

// k-ary randomized response: keeps x w.p. e^eps/(e^eps + k - 1), else a
// uniform other symbol.
int RrEncode(int k, const PrivacyBudget& budget, int x, Rng& rng);

// One-hot(x) with each bit flipped independently w.p. beta_R. Writes k bits.
void RapporEncode(const PrivacyBudget& budget, int x, std::span<uint8_t> out,
                  Rng& rng);
std::vector<uint8_t> RapporEncode(int k, const PrivacyBudget& budget, int x,
                                  Rng& rng);

// Uniform over C_x w.p. e^eps/(e^eps + 1), else uniform over its complement.
// O(log K): random bits, then one bit of phi(x) fixes the parity.
int HrEncode(const HadamardCode& code, const PrivacyBudget& budget, int x,
             Rng& rng);

// Binary randomized response of 1{x in S}.
int RaptorEncode(int x, const PublicCoin& coin, const PrivacyBudget& budget,
                 Rng& rng);

// Three bits, each randomized at eps/3: 1{x1 in S1}, 1{x2 in S2},
// 1{(x1, x2) in S1 x S2}.
std::array<uint8_t, 3> Raptor2Encode(int x1, int x2, const PublicCoin& s1,
                                     const PublicCoin& s2,
                                     const PrivacyBudget& budget, Rng& rng);

// Row-stochastic W(z | x), rows indexed by input.
class ChannelMatrix {
 public:
  // Fails unless every entry is finite and >= 0 and rows sum to 1 +- 1e-12.
  static absl::StatusOr<ChannelMatrix> Create(int inputs, int outputs,
                                              std::vector<double> entries);

  int inputs() const { return inputs_; }
  int outputs() const { return outputs_; }
  double at(int x, int z) const {
    return w_[static_cast<size_t>(x) * outputs_ + z];
  }
  std::span<const double> Row(int x) const {
    return std::span<const double>(w_).subspan(
        static_cast<size_t>(x) * outputs_, outputs_);
  }

 private:
  ChannelMatrix(int inputs, int outputs, std::vector<double> w)
      : inputs_(inputs), outputs_(outputs), w_(std::move(w)) {}

  int inputs_;
  int outputs_;
  std::vector<double> w_;
};

ChannelMatrix RrChannel(int k, const PrivacyBudget& budget);
// Outputs are k-bit masks, bit i holding coordinate i. Refuses k > 16.
absl::StatusOr<ChannelMatrix> RapporChannel(int k,
                                            const PrivacyBudget& budget);
ChannelMatrix HrChannel(const HadamardCode& code, const PrivacyBudget& budget);
ChannelMatrix RaptorChannel(const PublicCoin& coin,
                            const PrivacyBudget& budget);
// Inputs are the four truth classes (b1, b2) -> index 2*b1 + b2; outputs are
// 3-bit masks (bit j = message bit j).
ChannelMatrix RaptorBivariateChannel(const PrivacyBudget& budget);

// Dispatch by kind. RAPTOR uses a fixed coin {0, ..., k/2 - 1}; HR-pair
// audits one coordinate.
absl::StatusOr<ChannelMatrix> BuildChannel(MechanismKind kind, int k,
                                           const PrivacyBudget& budget);

// max over z and input pairs of W(z|x') / W(z|x), with 0/0 = 1 and c/0 = +inf.
double AuditLdp(const ChannelMatrix& w);

// Whether `ratio` is within e^eps (1 + 1e-9).
bool AuditPasses(double ratio, const PrivacyBudget& budget);

// RAPPOR audit for any k: the squared ratio of the single-bit flip channel at
// eps/2, since two one-hot encodings differ in exactly two bits.
double RapporPerBitAudit(const PrivacyBudget& budget);

}  // namespace ldptest

#endif  // LDPTEST_MECHANISMS_H_
