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

#ifndef LDPTEST_TOOLS_COMMANDS_H_
#define LDPTEST_TOOLS_COMMANDS_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "absl/status/status.h"

namespace ldptest::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitBadInput = 2;

// Union of every subcommand's flags; unset optionals keep config values.
struct Flags {
  std::vector<int> k;
  std::vector<double> epsilon;
  std::optional<double> gamma;
  std::string mechanism;
  std::string test;
  std::vector<int64_t> n;
  std::optional<int> trials;
  std::optional<uint64_t> seed;
  std::optional<double> target;
  std::string out;
  std::string format = "json";
  std::string config;
  std::string input;
  std::string alternative;
  bool per_user = false;
  int threads = 0;
  int64_t n1 = 0;
  // calibrate
  std::string constant;
  double lo = 0.0;
  double hi = 0.0;
  int steps = 4;
  double quantile = 0.25;
};

// Maps a library status to an exit code: malformed input gives 2,
// anything else 1.
int ExitCodeFor(const absl::Status& status);

int RunAudit(const Flags& flags, std::ostream& out, std::ostream& err);
int RunTest(const Flags& flags, std::ostream& out, std::ostream& err);
int RunSimulate(const Flags& flags, std::ostream& out, std::ostream& err);
int RunCurve(const Flags& flags, std::ostream& out, std::ostream& err);
int RunCalibrate(const Flags& flags, std::ostream& out, std::ostream& err);
int RunVerifyAppendix(const Flags& flags, std::ostream& out, std::ostream& err);

}  // namespace ldptest::cli

#endif  // LDPTEST_TOOLS_COMMANDS_H_
