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

#ifndef LDPTEST_VERDICT_H_
#define LDPTEST_VERDICT_H_

#include <cstdint>
#include <string>

#include "absl/status/statusor.h"
#include "nlohmann/json.hpp"

namespace ldptest {

enum class Decision {
  kUniform,
  kNotUniform,
  kUnbiased,
  kBiased,
  kClose,
  kFar,
  kIndependent,
  kNotIndependent,
};

const char* DecisionName(Decision d);
absl::StatusOr<Decision> ParseDecision(const std::string& name);

// True for the "alternative" outcomes: not_uniform, biased, far,
// not_independent.
bool IsRejection(Decision d);

// The five end-to-end testers.
enum class TestKind {
  kRapporUniformity,
  kHrUniformity,
  kRaptorUniformity,
  kHrIndependence,
  kRaptorIndependence,
};

// "rappor-uniformity", "hr-uniformity", "raptor-uniformity",
// "hr-independence", "raptor-independence".
const char* TestKindName(TestKind t);
absl::StatusOr<TestKind> ParseTestKind(const std::string& name);
bool IsIndependenceTest(TestKind t);

// Outcome of one test. `statistic` and `threshold` are those of the final
// comparison; the comparison that produced `decision` is documented per test.
struct Verdict {
  std::string test;
  Decision decision = Decision::kUniform;
  double statistic = 0.0;
  double threshold = 0.0;
  int64_t n = 0;
  int k = 0;
  double epsilon = 0.0;
  double gamma = 0.0;
  uint64_t seed = 0;
  // Set by the bias test when n is below its Hoeffding sample size.
  bool insufficient_samples = false;

  friend bool operator==(const Verdict&, const Verdict&) = default;
};

// {test, decision, statistic, threshold, n, k, epsilon, gamma, seed} plus
// insufficient_samples when set.
nlohmann::json VerdictToJson(const Verdict& v);
absl::StatusOr<Verdict> VerdictFromJson(const nlohmann::json& j);

}  // namespace ldptest

#endif  // LDPTEST_VERDICT_H_
