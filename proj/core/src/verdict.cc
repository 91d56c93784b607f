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

#include "ldptest/verdict.h"

#include <string>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"

namespace ldptest {
namespace {

constexpr Decision kAllDecisions[] = {
    Decision::kUniform,     Decision::kNotUniform, Decision::kUnbiased,
    Decision::kBiased,      Decision::kClose,      Decision::kFar,
    Decision::kIndependent, Decision::kNotIndependent,
};

}  // namespace

const char* DecisionName(Decision d) {
  switch (d) {
    case Decision::kUniform:
      return "uniform";
    case Decision::kNotUniform:
      return "not_uniform";
    case Decision::kUnbiased:
      return "unbiased";
    case Decision::kBiased:
      return "biased";
    case Decision::kClose:
      return "close";
    case Decision::kFar:
      return "far";
    case Decision::kIndependent:
      return "independent";
    case Decision::kNotIndependent:
      return "not_independent";
  }
  return "unknown";
}

absl::StatusOr<Decision> ParseDecision(const std::string& name) {
  for (Decision d : kAllDecisions) {
    if (name == DecisionName(d)) return d;
  }
  return absl::InvalidArgumentError(absl::StrCat("unknown decision ", name));
}

bool IsRejection(Decision d) {
  return d == Decision::kNotUniform || d == Decision::kBiased ||
         d == Decision::kFar || d == Decision::kNotIndependent;
}

const char* TestKindName(TestKind t) {
  switch (t) {
    case TestKind::kRapporUniformity:
      return "rappor-uniformity";
    case TestKind::kHrUniformity:
      return "hr-uniformity";
    case TestKind::kRaptorUniformity:
      return "raptor-uniformity";
    case TestKind::kHrIndependence:
      return "hr-independence";
    case TestKind::kRaptorIndependence:
      return "raptor-independence";
  }
  return "unknown";
}

absl::StatusOr<TestKind> ParseTestKind(const std::string& name) {
  for (TestKind t :
       {TestKind::kRapporUniformity, TestKind::kHrUniformity,
        TestKind::kRaptorUniformity, TestKind::kHrIndependence,
        TestKind::kRaptorIndependence}) {
    if (name == TestKindName(t)) return t;
  }
  return absl::InvalidArgumentError(absl::StrCat("unknown test ", name));
}

bool IsIndependenceTest(TestKind t) {
  return t == TestKind::kHrIndependence || t == TestKind::kRaptorIndependence;
}

nlohmann::json VerdictToJson(const Verdict& v) {
  nlohmann::json j = {
      {"test", v.test},           {"decision", DecisionName(v.decision)},
      {"statistic", v.statistic}, {"threshold", v.threshold},
      {"n", v.n},                 {"k", v.k},
      {"epsilon", v.epsilon},     {"gamma", v.gamma},
      {"seed", v.seed},
  };
  if (v.insufficient_samples) j["insufficient_samples"] = true;
  return j;
}

absl::StatusOr<Verdict> VerdictFromJson(const nlohmann::json& j) {
  try {
    Verdict v;
    v.test = j.at("test").get<std::string>();
    absl::StatusOr<Decision> d =
        ParseDecision(j.at("decision").get<std::string>());
    if (!d.ok()) return d.status();
    v.decision = *d;
    v.statistic = j.at("statistic").get<double>();
    v.threshold = j.at("threshold").get<double>();
    v.n = j.at("n").get<int64_t>();
    v.k = j.at("k").get<int>();
    v.epsilon = j.at("epsilon").get<double>();
    v.gamma = j.at("gamma").get<double>();
    v.seed = j.at("seed").get<uint64_t>();
    v.insufficient_samples = j.value("insufficient_samples", false);
    return v;
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed verdict JSON: ", e.what()));
  }
}

}  // namespace ldptest
