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

// Draws from discrete distributions: Vose alias tables for i.i.d. symbols and
// conditional-binomial multinomial counts.

#ifndef LDPTEST_SAMPLING_H_
#define LDPTEST_SAMPLING_H_

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "ldptest/distribution.h"
#include "ldptest/random.h"

namespace ldptest {

// O(k) build, O(1) draw. Immutable after construction.
class AliasTable {
 public:
  // Weights need not be normalized but must be finite, >= 0, with positive
  // total.
  static absl::StatusOr<AliasTable> Create(std::span<const double> weights);
  explicit AliasTable(const Distribution& p);

  int size() const { return static_cast<int>(prob_.size()); }
  int Sample(Rng& rng) const;

 private:
  AliasTable() = default;
  void Build(std::span<const double> weights, double total);

  std::vector<double> prob_;
  std::vector<int> alias_;
};

// n i.i.d. symbols from p.
std::vector<int> Sample(const Distribution& p, int64_t n, Rng& rng);

// n i.i.d. pairs from a joint pmf.
std::vector<std::pair<int, int>> SampleJoint(const JointDistribution& p,
                                             int64_t n, Rng& rng);

// Multinomial(n, pmf) symbol counts, drawn as a chain of conditional
// binomials. Cost is O(len(pmf)) regardless of n.
std::vector<int64_t> SampleCounts(std::span<const double> pmf, int64_t n,
                                  Rng& rng);

// Histogram of symbols in [0, alphabet). Symbols outside the range are
// rejected.
absl::StatusOr<std::vector<int64_t>> CountSymbols(std::span<const int> symbols,
                                                  int alphabet);

}  // namespace ldptest

#endif  // LDPTEST_SAMPLING_H_
