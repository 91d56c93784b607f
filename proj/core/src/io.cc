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

#include "ldptest/io.h"

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"

namespace ldptest {
namespace {

absl::StatusOr<std::vector<double>> NumberArray(const nlohmann::json& j) {
  if (!j.is_array()) return absl::InvalidArgumentError("expected a JSON array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const nlohmann::json& v : j) {
    if (!v.is_number()) {
      return absl::InvalidArgumentError("pmf entries must be numbers");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

// Splits on whitespace and commas, skipping blanks and '#' comments.
std::vector<std::string> Fields(std::string_view line) {
  if (const size_t hash = line.find('#'); hash != std::string_view::npos) {
    line = line.substr(0, hash);
  }
  std::vector<std::string> out;
  for (absl::string_view f :
       absl::StrSplit(absl::string_view(line.data(), line.size()),
                      absl::ByAnyChar(" \t\r,"), absl::SkipEmpty())) {
    out.emplace_back(f);
  }
  return out;
}

absl::StatusOr<int> Symbol(const std::string& field, int line_no) {
  int v = 0;
  if (!absl::SimpleAtoi(field, &v) || v < 0) {
    return absl::InvalidArgumentError(absl::StrCat(
        "line ", line_no, ": '", field, "' is not a nonnegative integer"));
  }
  return v;
}

}  // namespace

nlohmann::json DistributionToJson(const Distribution& p) {
  return nlohmann::json(std::vector<double>(p.pmf().begin(), p.pmf().end()));
}

absl::StatusOr<Distribution> DistributionFromJson(const nlohmann::json& j) {
  absl::StatusOr<std::vector<double>> v = NumberArray(j);
  if (!v.ok()) return v.status();
  return Distribution::Create(*std::move(v));
}

nlohmann::json JointToJson(const JointDistribution& p) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < p.k(); ++i) {
    std::vector<double> row(p.k());
    for (int j = 0; j < p.k(); ++j) row[j] = p.at(i, j);
    rows.push_back(row);
  }
  return rows;
}

absl::StatusOr<JointDistribution> JointFromJson(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) {
    return absl::InvalidArgumentError("expected a nonempty JSON array");
  }
  std::vector<double> flat;
  int k = 0;
  if (j.front().is_array()) {
    k = static_cast<int>(j.size());
    for (const nlohmann::json& row : j) {
      absl::StatusOr<std::vector<double>> r = NumberArray(row);
      if (!r.ok()) return r.status();
      if (r->size() != static_cast<size_t>(k)) {
        return absl::InvalidArgumentError("joint pmf must be square");
      }
      flat.insert(flat.end(), r->begin(), r->end());
    }
  } else {
    absl::StatusOr<std::vector<double>> r = NumberArray(j);
    if (!r.ok()) return r.status();
    k = static_cast<int>(std::lround(std::sqrt(r->size())));
    if (static_cast<size_t>(k) * k != r->size()) {
      return absl::InvalidArgumentError("flat joint pmf needs k^2 entries");
    }
    flat = *std::move(r);
  }
  return JointDistribution::Create(k, std::move(flat));
}

absl::StatusOr<std::vector<int>> ParseSamples(const std::string& text) {
  std::vector<int> out;
  std::istringstream in(text);
  std::string line;
  for (int line_no = 1; std::getline(in, line); ++line_no) {
    const std::vector<std::string> f = Fields(line);
    if (f.empty()) continue;
    if (f.size() != 1) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line_no, ": expected one symbol"));
    }
    absl::StatusOr<int> v = Symbol(f[0], line_no);
    if (!v.ok()) return v.status();
    out.push_back(*v);
  }
  return out;
}

absl::StatusOr<std::vector<std::pair<int, int>>> ParsePairSamples(
    const std::string& text) {
  std::vector<std::pair<int, int>> out;
  std::istringstream in(text);
  std::string line;
  for (int line_no = 1; std::getline(in, line); ++line_no) {
    const std::vector<std::string> f = Fields(line);
    if (f.empty()) continue;
    if (f.size() != 2) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line_no, ": expected two symbols"));
    }
    absl::StatusOr<int> a = Symbol(f[0], line_no);
    if (!a.ok()) return a.status();
    absl::StatusOr<int> b = Symbol(f[1], line_no);
    if (!b.ok()) return b.status();
    out.emplace_back(*a, *b);
  }
  return out;
}

std::string FormatSamples(std::span<const int> samples) {
  std::string out;
  for (int x : samples) absl::StrAppend(&out, x, "\n");
  return out;
}

std::string FormatPairSamples(std::span<const std::pair<int, int>> samples) {
  std::string out;
  for (const auto& [a, b] : samples) absl::StrAppend(&out, a, " ", b, "\n");
  return out;
}

absl::StatusOr<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) return absl::DataLossError(absl::StrCat("read failed: ", path));
  return buf.str();
}

absl::Status WriteFile(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    return absl::PermissionDeniedError(absl::StrCat("cannot write ", path));
  }
  out << contents;
  out.close();
  if (!out) return absl::DataLossError(absl::StrCat("write failed: ", path));
  return absl::OkStatus();
}

absl::StatusOr<nlohmann::json> ReadJsonFile(const std::string& path) {
  absl::StatusOr<std::string> text = ReadFile(path);
  if (!text.ok()) return text.status();
  nlohmann::json j = nlohmann::json::parse(*text, nullptr, false);
  if (j.is_discarded()) {
    return absl::InvalidArgumentError(absl::StrCat(path, " is not valid JSON"));
  }
  return j;
}

absl::StatusOr<std::vector<int>> ReadSamples(const std::string& path) {
  absl::StatusOr<std::string> text = ReadFile(path);
  if (!text.ok()) return text.status();
  return ParseSamples(*text);
}

absl::StatusOr<std::vector<std::pair<int, int>>> ReadPairSamples(
    const std::string& path) {
  absl::StatusOr<std::string> text = ReadFile(path);
  if (!text.ok()) return text.status();
  return ParsePairSamples(*text);
}

}  // namespace ldptest
