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

#include "ldptest/mechanisms.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"

namespace ldptest {
namespace {

constexpr int kMaxRapporChannelK = 16;

}  // namespace

PrivacyBudget::PrivacyBudget(double epsilon) : epsilon_(epsilon) {
  const double half = std::exp(epsilon / 2.0);
  const double full = std::exp(epsilon);
  alpha_rappor_ = (half - 1.0) / (half + 1.0);
  beta_rappor_ = 1.0 / (half + 1.0);
  alpha_hr_ = (full - 1.0) / (full + 1.0);
  flip_ = 1.0 / (full + 1.0);
}

absl::StatusOr<PrivacyBudget> PrivacyBudget::Create(double epsilon) {
  if (!std::isfinite(epsilon) || epsilon <= 0.0) {
    return absl::InvalidArgumentError(
        absl::StrCat("epsilon must be finite and > 0, got ", epsilon));
  }
  return PrivacyBudget(epsilon);
}

PrivacyBudget PrivacyBudget::Split(int parts) const {
  return PrivacyBudget(epsilon_ / parts);
}

const char* MechanismName(MechanismKind kind) {
  switch (kind) {
    case MechanismKind::kRr:
      return "rr";
    case MechanismKind::kRappor:
      return "rappor";
    case MechanismKind::kHr:
      return "hr";
    case MechanismKind::kHrPair:
      return "hr-pair";
    case MechanismKind::kRaptor:
      return "raptor";
    case MechanismKind::kRaptorBivariate:
      return "raptor2";
  }
  return "unknown";
}

absl::StatusOr<MechanismKind> ParseMechanism(std::string_view name) {
  for (MechanismKind kind :
       {MechanismKind::kRr, MechanismKind::kRappor, MechanismKind::kHr,
        MechanismKind::kHrPair, MechanismKind::kRaptor,
        MechanismKind::kRaptorBivariate}) {
    if (name == MechanismName(kind)) return kind;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown mechanism '", std::string(name),
                   "'; expected rr, rappor, hr, hr-pair, raptor or raptor2"));
}

absl::StatusOr<PublicCoin> PublicCoin::FromIndices(int k,
                                                   std::vector<int> indices) {
  if (k < 2 || k % 2 != 0) {
    return absl::InvalidArgumentError("alphabet must be even");
  }
  if (indices.size() != static_cast<size_t>(k / 2)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "subset must have exactly ", k / 2, " members, got ", indices.size()));
  }
  std::vector<uint8_t> member(k, 0);
  for (int x : indices) {
    if (x < 0 || x >= k) {
      return absl::OutOfRangeError(
          absl::StrCat("subset member ", x, " outside [0, ", k, ")"));
    }
    if (member[x]) {
      return absl::InvalidArgumentError(
          absl::StrCat("subset member ", x, " repeated"));
    }
    member[x] = 1;
  }
  std::sort(indices.begin(), indices.end());
  return PublicCoin(std::move(member), std::move(indices));
}

absl::StatusOr<PublicCoin> PublicCoin::Draw(int k, Rng& rng) {
  if (k < 2 || k % 2 != 0) {
    return absl::InvalidArgumentError("alphabet must be even");
  }
  std::vector<int> perm(k);
  for (int i = 0; i < k; ++i) perm[i] = i;
  for (int i = 0; i < k / 2; ++i) {
    const int j = i + static_cast<int>(UniformIndex(rng, k - i));
    std::swap(perm[i], perm[j]);
  }
  perm.resize(k / 2);
  std::vector<uint8_t> member(k, 0);
  for (int x : perm) member[x] = 1;
  std::sort(perm.begin(), perm.end());
  return PublicCoin(std::move(member), std::move(perm));
}

double PublicCoin::Mass(const Distribution& p) const {
  double mass = 0.0;
  for (int x : indices_) mass += p[x];
  return mass;
}

int RrEncode(int k, const PrivacyBudget& budget, int x, Rng& rng) {
  if (k == 1) return 0;
  const double e = std::exp(budget.epsilon());
  if (UniformUnit(rng) < e / (e + k - 1)) return x;
  int y = static_cast<int>(UniformIndex(rng, k - 1));
  return y >= x ? y + 1 : y;
}

void RapporEncode(const PrivacyBudget& budget, int x, std::span<uint8_t> out,
                  Rng& rng) {
  const double beta = budget.beta_rappor();
  for (size_t i = 0; i < out.size(); ++i) {
    const uint8_t bit = static_cast<int>(i) == x ? 1 : 0;
    out[i] = bit ^ (UniformUnit(rng) < beta ? 1 : 0);
  }
}

std::vector<uint8_t> RapporEncode(int k, const PrivacyBudget& budget, int x,
                                  Rng& rng) {
  std::vector<uint8_t> out(k);
  RapporEncode(budget, x, out, rng);
  return out;
}

int HrEncode(const HadamardCode& code, const PrivacyBudget& budget, int x,
             Rng& rng) {
  const int K = code.output_size();
  const int row = code.row(x);
  int z = static_cast<int>(rng() & static_cast<uint64_t>(K - 1));
  const bool want_inside = UniformUnit(rng) >= budget.flip_probability();
  if (code.Contains(z, x) != want_inside) z ^= row & -row;
  return z;
}

int RaptorEncode(int x, const PublicCoin& coin, const PrivacyBudget& budget,
                 Rng& rng) {
  const int truth = coin.Contains(x) ? 1 : 0;
  return truth ^ (UniformUnit(rng) < budget.flip_probability() ? 1 : 0);
}

std::array<uint8_t, 3> Raptor2Encode(int x1, int x2, const PublicCoin& s1,
                                     const PublicCoin& s2,
                                     const PrivacyBudget& budget, Rng& rng) {
  const double flip = budget.Split(3).flip_probability();
  const uint8_t b1 = s1.Contains(x1) ? 1 : 0;
  const uint8_t b2 = s2.Contains(x2) ? 1 : 0;
  const std::array<uint8_t, 3> truth = {b1, b2,
                                        static_cast<uint8_t>(b1 & b2)};
  std::array<uint8_t, 3> out;
  for (int j = 0; j < 3; ++j) {
    out[j] = truth[j] ^ (UniformUnit(rng) < flip ? 1 : 0);
  }
  return out;
}

absl::StatusOr<ChannelMatrix> ChannelMatrix::Create(
    int inputs, int outputs, std::vector<double> entries) {
  if (inputs < 1 || outputs < 1 ||
      entries.size() != static_cast<size_t>(inputs) * outputs) {
    return absl::InvalidArgumentError(
        absl::StrCat("channel needs ", inputs, "x", outputs, " entries"));
  }
  for (int x = 0; x < inputs; ++x) {
    double total = 0.0;
    for (int z = 0; z < outputs; ++z) {
      const double w = entries[static_cast<size_t>(x) * outputs + z];
      if (!std::isfinite(w) || w < 0.0) {
        return absl::InvalidArgumentError(
            absl::StrCat("channel entry (", x, ", ", z, ") invalid"));
      }
      total += w;
    }
    if (std::abs(total - 1.0) > kMassTolerance) {
      return absl::InvalidArgumentError(
          absl::StrCat("channel row ", x, " sums to ", total));
    }
  }
  return ChannelMatrix(inputs, outputs, std::move(entries));
}

ChannelMatrix RrChannel(int k, const PrivacyBudget& budget) {
  const double e = std::exp(budget.epsilon());
  std::vector<double> w(static_cast<size_t>(k) * k, 1.0 / (e + k - 1));
  for (int x = 0; x < k; ++x) w[static_cast<size_t>(x) * k + x] = e / (e + k - 1);
  return *ChannelMatrix::Create(k, k, std::move(w));
}

absl::StatusOr<ChannelMatrix> RapporChannel(int k,
                                            const PrivacyBudget& budget) {
  if (k > kMaxRapporChannelK) {
    return absl::InvalidArgumentError(
        "output space too large; use per-bit audit");
  }
  if (k < 1) return absl::InvalidArgumentError("alphabet must be positive");
  const int outputs = 1 << k;
  const double beta = budget.beta_rappor();
  std::vector<double> flips(k + 1);
  for (int d = 0; d <= k; ++d) {
    flips[d] = std::pow(beta, d) * std::pow(1.0 - beta, k - d);
  }
  std::vector<double> w(static_cast<size_t>(k) * outputs);
  for (int x = 0; x < k; ++x) {
    for (int z = 0; z < outputs; ++z) {
      w[static_cast<size_t>(x) * outputs + z] =
          flips[__builtin_popcount(static_cast<unsigned>(z ^ (1 << x)))];
    }
  }
  return ChannelMatrix::Create(k, outputs, std::move(w));
}

ChannelMatrix HrChannel(const HadamardCode& code, const PrivacyBudget& budget) {
  const int k = code.k();
  const int K = code.output_size();
  const double inside = 2.0 * (1.0 - budget.flip_probability()) / K;
  const double outside = 2.0 * budget.flip_probability() / K;
  std::vector<double> w(static_cast<size_t>(k) * K);
  for (int x = 0; x < k; ++x) {
    for (int z = 0; z < K; ++z) {
      w[static_cast<size_t>(x) * K + z] = code.Contains(z, x) ? inside : outside;
    }
  }
  return *ChannelMatrix::Create(k, K, std::move(w));
}

ChannelMatrix RaptorChannel(const PublicCoin& coin,
                            const PrivacyBudget& budget) {
  const int k = coin.k();
  const double f = budget.flip_probability();
  std::vector<double> w(static_cast<size_t>(k) * 2);
  for (int x = 0; x < k; ++x) {
    const bool in = coin.Contains(x);
    w[2 * x] = in ? f : 1.0 - f;
    w[2 * x + 1] = in ? 1.0 - f : f;
  }
  return *ChannelMatrix::Create(k, 2, std::move(w));
}

ChannelMatrix RaptorBivariateChannel(const PrivacyBudget& budget) {
  const double f = budget.Split(3).flip_probability();
  std::vector<double> w(4 * 8);
  for (int c = 0; c < 4; ++c) {
    const int b1 = c >> 1;
    const int b2 = c & 1;
    const int truth = b1 | (b2 << 1) | ((b1 & b2) << 2);
    for (int o = 0; o < 8; ++o) {
      double prob = 1.0;
      for (int j = 0; j < 3; ++j) {
        prob *= (((o ^ truth) >> j) & 1) ? f : 1.0 - f;
      }
      w[c * 8 + o] = prob;
    }
  }
  return *ChannelMatrix::Create(4, 8, std::move(w));
}

absl::StatusOr<ChannelMatrix> BuildChannel(MechanismKind kind, int k,
                                           const PrivacyBudget& budget) {
  if (k < 1) return absl::InvalidArgumentError("alphabet must be positive");
  switch (kind) {
    case MechanismKind::kRr:
      return RrChannel(k, budget);
    case MechanismKind::kRappor:
      return RapporChannel(k, budget);
    case MechanismKind::kHr:
    case MechanismKind::kHrPair: {
      absl::StatusOr<HadamardCode> code = HadamardCode::Create(k);
      if (!code.ok()) return code.status();
      return HrChannel(*code, budget);
    }
    case MechanismKind::kRaptor: {
      std::vector<int> first_half(k / 2);
      for (int i = 0; i < k / 2; ++i) first_half[i] = i;
      absl::StatusOr<PublicCoin> coin =
          PublicCoin::FromIndices(k, std::move(first_half));
      if (!coin.ok()) return coin.status();
      return RaptorChannel(*coin, budget);
    }
    case MechanismKind::kRaptorBivariate:
      return RaptorBivariateChannel(budget);
  }
  return absl::InvalidArgumentError("unknown mechanism");
}

double AuditLdp(const ChannelMatrix& w) {
  double worst = 1.0;
  for (int z = 0; z < w.outputs(); ++z) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (int x = 0; x < w.inputs(); ++x) {
      lo = std::min(lo, w.at(x, z));
      hi = std::max(hi, w.at(x, z));
    }
    if (hi == 0.0) continue;
    if (lo == 0.0) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, hi / lo);
  }
  return worst;
}

bool AuditPasses(double ratio, const PrivacyBudget& budget) {
  return ratio <= std::exp(budget.epsilon()) * (1.0 + 1e-9);
}

double RapporPerBitAudit(const PrivacyBudget& budget) {
  const double beta = budget.beta_rappor();
  const ChannelMatrix bit =
      *ChannelMatrix::Create(2, 2, {1.0 - beta, beta, beta, 1.0 - beta});
  const double r = AuditLdp(bit);
  return r * r;
}

}  // namespace ldptest
