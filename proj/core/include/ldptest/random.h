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

#ifndef LDPTEST_RANDOM_H_
#define LDPTEST_RANDOM_H_

#include <cstdint>
#include <random>

namespace ldptest {

// Every randomized routine in the library takes a caller-owned stream of this
// type. Nothing in the library seeds its own generator.
using Rng = std::mt19937_64;

// SplitMix64 finalizer. Bijective on 64-bit words with full avalanche.
uint64_t Mix64(uint64_t x);

// Seed for the stream of (trial, repetition) under a base seed:
//   Mix64(Mix64(Mix64(base) ^ trial + c1) ^ repetition + c2)
// with c1, c2 the golden-ratio and Weyl increments of SplitMix64. Only
// within-build reproducibility is promised; the std::*_distribution adaptors
// used below are implementation-defined.
uint64_t DeriveSeed(uint64_t base_seed, uint64_t trial_index,
                    uint64_t repetition_index = 0);

inline Rng MakeStream(uint64_t base_seed, uint64_t trial_index,
                      uint64_t repetition_index = 0) {
  return Rng(DeriveSeed(base_seed, trial_index, repetition_index));
}

// Uniform double in [0, 1).
double UniformUnit(Rng& rng);

// Uniform integer in [0, bound). `bound` must be positive.
uint64_t UniformIndex(Rng& rng, uint64_t bound);

bool Bernoulli(Rng& rng, double p);

// Binomial(n, p) with the degenerate cases p <= 0, p >= 1 and n <= 0 handled
// without touching the stream.
int64_t Binomial(Rng& rng, int64_t n, double p);

int64_t Poisson(Rng& rng, double mean);

}  // namespace ldptest

#endif  // LDPTEST_RANDOM_H_
