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

// File and JSON ingestion: pmfs as JSON arrays, samples as newline-delimited
// decimal integers (0-indexed symbols). Pair samples hold two integers per
// line separated by whitespace or a comma.

#ifndef LDPTEST_IO_H_
#define LDPTEST_IO_H_

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "ldptest/distribution.h"
#include "nlohmann/json.hpp"

namespace ldptest {

nlohmann::json DistributionToJson(const Distribution& p);
absl::StatusOr<Distribution> DistributionFromJson(const nlohmann::json& j);

// Nested row arrays. Reading also accepts a flat row-major array of k^2
// entries.
nlohmann::json JointToJson(const JointDistribution& p);
absl::StatusOr<JointDistribution> JointFromJson(const nlohmann::json& j);

absl::StatusOr<std::vector<int>> ParseSamples(const std::string& text);
absl::StatusOr<std::vector<std::pair<int, int>>> ParsePairSamples(
    const std::string& text);
std::string FormatSamples(std::span<const int> samples);
std::string FormatPairSamples(std::span<const std::pair<int, int>> samples);

absl::StatusOr<std::string> ReadFile(const std::string& path);
absl::Status WriteFile(const std::string& path, const std::string& contents);
absl::StatusOr<nlohmann::json> ReadJsonFile(const std::string& path);

absl::StatusOr<std::vector<int>> ReadSamples(const std::string& path);
absl::StatusOr<std::vector<std::pair<int, int>>> ReadPairSamples(
    const std::string& path);

}  // namespace ldptest

#endif  // LDPTEST_IO_H_
