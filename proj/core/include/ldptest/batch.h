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

// The curator-side view of a privatized dataset: one fixed-width integer
// message per user plus any public coins.

#ifndef LDPTEST_BATCH_H_
#define LDPTEST_BATCH_H_

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "ldptest/mechanisms.h"
#include "ldptest/random.h"
#include "nlohmann/json.hpp"

namespace ldptest {

// Integers per message: 1 for rr/hr/raptor, k for rappor, 2 for hr-pair,
// 3 for raptor2.
int MessageWidth(MechanismKind kind, int k);

class PrivatizedBatch {
 public:
  // `repetition_size` splits users into consecutive mini-batches, each with
  // its own coin (raptor) or coin pair (raptor2, stored S1 then S2). Zero
  // means a single mini-batch holding every user. Public-coin-free kinds
  // take no coins.
  static absl::StatusOr<PrivatizedBatch> Create(
      MechanismKind kind, int k, double epsilon, std::vector<int32_t> messages,
      std::vector<PublicCoin> coins = {}, int64_t repetition_size = 0);

  MechanismKind kind() const { return kind_; }
  int k() const { return k_; }
  double epsilon() const { return epsilon_; }
  int width() const { return width_; }
  int64_t size() const {
    return static_cast<int64_t>(messages_.size()) / width_;
  }
  std::span<const int32_t> message(int64_t user) const {
    return std::span<const int32_t>(messages_).subspan(user * width_, width_);
  }
  std::span<const int32_t> messages() const { return messages_; }
  const std::vector<PublicCoin>& coins() const { return coins_; }
  int64_t repetition_size() const { return repetition_size_; }
  int repetitions() const;

  friend bool operator==(const PrivatizedBatch&,
                         const PrivatizedBatch&) = default;

 private:
  PrivatizedBatch() = default;

  MechanismKind kind_ = MechanismKind::kRr;
  int k_ = 0;
  double epsilon_ = 0.0;
  int width_ = 1;
  std::vector<int32_t> messages_;
  std::vector<PublicCoin> coins_;
  int64_t repetition_size_ = 0;
};

// Private-coin encoding of raw symbols (rr, rappor, hr).
absl::StatusOr<PrivatizedBatch> EncodeBatch(MechanismKind kind, int k,
                                            const PrivacyBudget& budget,
                                            std::span<const int> samples,
                                            Rng& rng);

// HR applied to each coordinate of each pair.
absl::StatusOr<PrivatizedBatch> EncodePairBatch(
    int k, const PrivacyBudget& budget,
    std::span<const std::pair<int, int>> samples, Rng& rng);

// RAPTOR over `repetitions` disjoint mini-batches with a fresh coin each.
absl::StatusOr<PrivatizedBatch> EncodeRaptorBatch(
    int k, const PrivacyBudget& budget, std::span<const int> samples,
    int repetitions, Rng& rng);

// Bivariate RAPTOR over disjoint mini-batches with a fresh (S1, S2) each.
absl::StatusOr<PrivatizedBatch> EncodeRaptor2Batch(
    int k, const PrivacyBudget& budget,
    std::span<const std::pair<int, int>> samples, int repetitions, Rng& rng);

// {"mechanism", "k", "epsilon", "repetition_size", "coins": [[sorted]],
//  "messages": [[ints]]}.
nlohmann::json BatchToJson(const PrivatizedBatch& batch);
absl::StatusOr<PrivatizedBatch> BatchFromJson(const nlohmann::json& j);

}  // namespace ldptest

#endif  // LDPTEST_BATCH_H_
