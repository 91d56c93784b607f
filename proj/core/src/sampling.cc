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

#include "ldptest/sampling.h"

#include <cmath>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"

namespace ldptest {

absl::StatusOr<AliasTable> AliasTable::Create(std::span<const double> weights) {
  if (weights.empty()) {
    return absl::InvalidArgumentError("alias table needs at least one weight");
  }
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
  AliasTable table;
  table.Build(weights, total);
  return table;
}

AliasTable::AliasTable(const Distribution& p) { Build(p.pmf(), 1.0); }

void AliasTable::Build(std::span<const double> weights, double total) {
  const int k = static_cast<int>(weights.size());
  prob_.assign(k, 1.0);
  alias_.resize(k);
  std::vector<double> scaled(k);
  std::vector<int> small;
  std::vector<int> large;
  for (int i = 0; i < k; ++i) {
    alias_[i] = i;
    scaled[i] = weights[i] * k / total;
    (scaled[i] < 1.0 ? small : large).push_back(i);
  }
  while (!small.empty() && !large.empty()) {
    const int s = small.back();
    small.pop_back();
    const int l = large.back();
    prob_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  // Leftovers carry mass 1 up to rounding.
  for (int i : small) prob_[i] = 1.0;
  for (int i : large) prob_[i] = 1.0;
}

int AliasTable::Sample(Rng& rng) const {
  const int i = static_cast<int>(UniformIndex(rng, prob_.size()));
  return UniformUnit(rng) < prob_[i] ? i : alias_[i];
}

std::vector<int> Sample(const Distribution& p, int64_t n, Rng& rng) {
  std::vector<int> out;
  if (n <= 0) return out;
  const AliasTable table(p);
  out.resize(n);
  for (int& x : out) x = table.Sample(rng);
  return out;
}

std::vector<std::pair<int, int>> SampleJoint(const JointDistribution& p,
                                             int64_t n, Rng& rng) {
  std::vector<std::pair<int, int>> out;
  if (n <= 0) return out;
  const AliasTable table(*Distribution::Normalized(
      std::vector<double>(p.pmf().begin(), p.pmf().end())));
  const int k = p.k();
  out.resize(n);
  for (auto& pair : out) {
    const int cell = table.Sample(rng);
    pair = {cell / k, cell % k};
  }
  return out;
}

std::vector<int64_t> SampleCounts(std::span<const double> pmf, int64_t n,
                                  Rng& rng) {
  std::vector<int64_t> counts(pmf.size(), 0);
  int64_t remaining = n;
  double mass_left = 1.0;
  for (size_t i = 0; i < pmf.size() && remaining > 0; ++i) {
    if (i + 1 == pmf.size()) {
      counts[i] = remaining;
      break;
    }
    const double q = mass_left > 0.0 ? pmf[i] / mass_left : 1.0;
    counts[i] = Binomial(rng, remaining, q);
    remaining -= counts[i];
    mass_left -= pmf[i];
  }
  return counts;
}

absl::StatusOr<std::vector<int64_t>> CountSymbols(std::span<const int> symbols,
                                                  int alphabet) {
  std::vector<int64_t> counts(alphabet, 0);
  for (int s : symbols) {
    if (s < 0 || s >= alphabet) {
      return absl::OutOfRangeError(
          absl::StrCat("symbol ", s, " outside [0, ", alphabet, ")"));
    }
    ++counts[s];
  }
  return counts;
}

}  // namespace ldptest
