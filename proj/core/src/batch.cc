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

#include "ldptest/batch.h"

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"

namespace ldptest {
namespace {

bool UsesCoins(MechanismKind kind) {
  return kind == MechanismKind::kRaptor ||
         kind == MechanismKind::kRaptorBivariate;
}

absl::Status CheckMessages(MechanismKind kind, int k,
                           std::span<const int32_t> messages) {
  int32_t bound = 2;
  switch (kind) {
    case MechanismKind::kRr:
      bound = k;
      break;
    case MechanismKind::kHr:
    case MechanismKind::kHrPair:
      bound = HadamardOutputSize(k);
      break;
    case MechanismKind::kRappor:
    case MechanismKind::kRaptor:
    case MechanismKind::kRaptorBivariate:
      bound = 2;
      break;
  }
  for (size_t i = 0; i < messages.size(); ++i) {
    if (messages[i] < 0 || messages[i] >= bound) {
      return absl::OutOfRangeError(
          absl::StrCat("message value ", messages[i], " at position ", i,
                       " outside [0, ", bound, ")"));
    }
  }
  return absl::OkStatus();
}

}  // namespace

int MessageWidth(MechanismKind kind, int k) {
  switch (kind) {
    case MechanismKind::kRappor:
      return k;
    case MechanismKind::kHrPair:
      return 2;
    case MechanismKind::kRaptorBivariate:
      return 3;
    default:
      return 1;
  }
}

int PrivatizedBatch::repetitions() const {
  if (!UsesCoins(kind_)) return 1;
  return kind_ == MechanismKind::kRaptor
             ? static_cast<int>(coins_.size())
             : static_cast<int>(coins_.size() / 2);
}

absl::StatusOr<PrivatizedBatch> PrivatizedBatch::Create(
    MechanismKind kind, int k, double epsilon, std::vector<int32_t> messages,
    std::vector<PublicCoin> coins, int64_t repetition_size) {
  if (k < 1) return absl::InvalidArgumentError("alphabet must be positive");
  if (absl::StatusOr<PrivacyBudget> b = PrivacyBudget::Create(epsilon);
      !b.ok()) {
    return b.status();
  }
  const int width = MessageWidth(kind, k);
  if (messages.size() % width != 0) {
    return absl::InvalidArgumentError(absl::StrCat(
        "message stream length ", messages.size(), " not a multiple of ",
        width));
  }
  if (absl::Status s = CheckMessages(kind, k, messages); !s.ok()) return s;
  const int64_t n = static_cast<int64_t>(messages.size()) / width;
  if (repetition_size < 0) {
    return absl::InvalidArgumentError("repetition size must be >= 0");
  }
  if (!UsesCoins(kind)) {
    if (!coins.empty()) {
      return absl::InvalidArgumentError(
          absl::StrCat(MechanismName(kind), " takes no public coins"));
    }
    repetition_size = 0;
  } else {
    if (repetition_size == 0) repetition_size = n;
    const int64_t reps = repetition_size > 0 ? n / repetition_size : 0;
    if (repetition_size > 0 && n % repetition_size != 0) {
      return absl::InvalidArgumentError(absl::StrCat(
          "user count ", n, " not divisible by repetition size ",
          repetition_size));
    }
    const int64_t per_rep = kind == MechanismKind::kRaptor ? 1 : 2;
    if (static_cast<int64_t>(coins.size()) != reps * per_rep) {
      return absl::InvalidArgumentError(
          absl::StrCat("expected ", reps * per_rep, " coins, got ",
                       coins.size()));
    }
    for (const PublicCoin& c : coins) {
      if (c.k() != k) {
        return absl::InvalidArgumentError("coin alphabet differs from k");
      }
    }
  }
  PrivatizedBatch batch;
  batch.kind_ = kind;
  batch.k_ = k;
  batch.epsilon_ = epsilon;
  batch.width_ = width;
  batch.messages_ = std::move(messages);
  batch.coins_ = std::move(coins);
  batch.repetition_size_ = repetition_size;
  return batch;
}

absl::StatusOr<PrivatizedBatch> EncodeBatch(MechanismKind kind, int k,
                                            const PrivacyBudget& budget,
                                            std::span<const int> samples,
                                            Rng& rng) {
  for (int x : samples) {
    if (x < 0 || x >= k) {
      return absl::OutOfRangeError(
          absl::StrCat("sample ", x, " outside [0, ", k, ")"));
    }
  }
  std::vector<int32_t> messages;
  switch (kind) {
    case MechanismKind::kRr:
      messages.reserve(samples.size());
      for (int x : samples) messages.push_back(RrEncode(k, budget, x, rng));
      break;
    case MechanismKind::kRappor: {
      messages.resize(samples.size() * k);
      std::vector<uint8_t> bits(k);
      for (size_t i = 0; i < samples.size(); ++i) {
        RapporEncode(budget, samples[i], bits, rng);
        for (int j = 0; j < k; ++j) messages[i * k + j] = bits[j];
      }
      break;
    }
    case MechanismKind::kHr: {
      absl::StatusOr<HadamardCode> code = HadamardCode::Create(k);
      if (!code.ok()) return code.status();
      messages.reserve(samples.size());
      for (int x : samples) messages.push_back(HrEncode(*code, budget, x, rng));
      break;
    }
    default:
      return absl::InvalidArgumentError(absl::StrCat(
          MechanismName(kind), " is not a private-coin univariate mechanism"));
  }
  return PrivatizedBatch::Create(kind, k, budget.epsilon(),
                                 std::move(messages));
}

absl::StatusOr<PrivatizedBatch> EncodePairBatch(
    int k, const PrivacyBudget& budget,
    std::span<const std::pair<int, int>> samples, Rng& rng) {
  absl::StatusOr<HadamardCode> code = HadamardCode::Create(k);
  if (!code.ok()) return code.status();
  std::vector<int32_t> messages;
  messages.reserve(2 * samples.size());
  for (const auto& [x1, x2] : samples) {
    if (x1 < 0 || x1 >= k || x2 < 0 || x2 >= k) {
      return absl::OutOfRangeError("pair sample outside [k] x [k]");
    }
    messages.push_back(HrEncode(*code, budget, x1, rng));
    messages.push_back(HrEncode(*code, budget, x2, rng));
  }
  return PrivatizedBatch::Create(MechanismKind::kHrPair, k, budget.epsilon(),
                                 std::move(messages));
}

absl::StatusOr<PrivatizedBatch> EncodeRaptorBatch(
    int k, const PrivacyBudget& budget, std::span<const int> samples,
    int repetitions, Rng& rng) {
  if (repetitions < 1 || samples.size() % repetitions != 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("n = ", samples.size(), " not divisible by T = ",
                     repetitions));
  }
  const size_t m = samples.size() / repetitions;
  std::vector<PublicCoin> coins;
  std::vector<int32_t> messages(samples.size());
  for (int t = 0; t < repetitions; ++t) {
    absl::StatusOr<PublicCoin> coin = PublicCoin::Draw(k, rng);
    if (!coin.ok()) return coin.status();
    for (size_t i = t * m; i < (t + 1) * m; ++i) {
      if (samples[i] < 0 || samples[i] >= k) {
        return absl::OutOfRangeError(
            absl::StrCat("sample ", samples[i], " outside [0, ", k, ")"));
      }
      messages[i] = RaptorEncode(samples[i], *coin, budget, rng);
    }
    coins.push_back(*std::move(coin));
  }
  return PrivatizedBatch::Create(MechanismKind::kRaptor, k, budget.epsilon(),
                                 std::move(messages), std::move(coins),
                                 static_cast<int64_t>(m));
}

absl::StatusOr<PrivatizedBatch> EncodeRaptor2Batch(
    int k, const PrivacyBudget& budget,
    std::span<const std::pair<int, int>> samples, int repetitions, Rng& rng) {
  if (repetitions < 1 || samples.size() % repetitions != 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("n = ", samples.size(), " not divisible by T = ",
                     repetitions));
  }
  const size_t m = samples.size() / repetitions;
  std::vector<PublicCoin> coins;
  std::vector<int32_t> messages(3 * samples.size());
  for (int t = 0; t < repetitions; ++t) {
    absl::StatusOr<PublicCoin> s1 = PublicCoin::Draw(k, rng);
    if (!s1.ok()) return s1.status();
    absl::StatusOr<PublicCoin> s2 = PublicCoin::Draw(k, rng);
    if (!s2.ok()) return s2.status();
    for (size_t i = t * m; i < (t + 1) * m; ++i) {
      const auto [x1, x2] = samples[i];
      if (x1 < 0 || x1 >= k || x2 < 0 || x2 >= k) {
        return absl::OutOfRangeError("pair sample outside [k] x [k]");
      }
      const std::array<uint8_t, 3> bits =
          Raptor2Encode(x1, x2, *s1, *s2, budget, rng);
      for (int j = 0; j < 3; ++j) messages[3 * i + j] = bits[j];
    }
    coins.push_back(*std::move(s1));
    coins.push_back(*std::move(s2));
  }
  return PrivatizedBatch::Create(MechanismKind::kRaptorBivariate, k,
                                 budget.epsilon(), std::move(messages),
                                 std::move(coins), static_cast<int64_t>(m));
}

nlohmann::json BatchToJson(const PrivatizedBatch& batch) {
  nlohmann::json j;
  j["mechanism"] = std::string(MechanismName(batch.kind()));
  j["k"] = batch.k();
  j["epsilon"] = batch.epsilon();
  j["repetition_size"] = batch.repetition_size();
  j["coins"] = nlohmann::json::array();
  for (const PublicCoin& c : batch.coins()) {
    j["coins"].push_back(std::vector<int>(c.indices().begin(),
                                          c.indices().end()));
  }
  nlohmann::json messages = nlohmann::json::array();
  for (int64_t i = 0; i < batch.size(); ++i) {
    std::span<const int32_t> m = batch.message(i);
    messages.push_back(std::vector<int32_t>(m.begin(), m.end()));
  }
  j["messages"] = std::move(messages);
  return j;
}

absl::StatusOr<PrivatizedBatch> BatchFromJson(const nlohmann::json& j) {
  try {
    absl::StatusOr<MechanismKind> kind =
        ParseMechanism(j.at("mechanism").get<std::string>());
    if (!kind.ok()) return kind.status();
    const int k = j.at("k").get<int>();
    const double epsilon = j.at("epsilon").get<double>();
    const int64_t repetition_size = j.value("repetition_size", int64_t{0});
    std::vector<PublicCoin> coins;
    if (j.contains("coins")) {
      for (const auto& c : j.at("coins")) {
        absl::StatusOr<PublicCoin> coin =
            PublicCoin::FromIndices(k, c.get<std::vector<int>>());
        if (!coin.ok()) return coin.status();
        coins.push_back(*std::move(coin));
      }
    }
    const int width = MessageWidth(*kind, k);
    std::vector<int32_t> flat;
    for (const auto& m : j.at("messages")) {
      std::vector<int32_t> msg = m.is_array()
                                     ? m.get<std::vector<int32_t>>()
                                     : std::vector<int32_t>{m.get<int32_t>()};
      if (static_cast<int>(msg.size()) != width) {
        return absl::InvalidArgumentError(absl::StrCat(
            "message of width ", msg.size(), ", expected ", width));
      }
      flat.insert(flat.end(), msg.begin(), msg.end());
    }
    return PrivatizedBatch::Create(*kind, k, epsilon, std::move(flat),
                                   std::move(coins), repetition_size);
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed batch JSON: ", e.what()));
  }
}

}  // namespace ldptest
