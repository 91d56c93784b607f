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

#include "ldptest/calibration.h"

#include <cmath>
#include <cstdint>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"

namespace ldptest {

bool operator==(const Calibration& a, const Calibration& b) {
  return a.c_rappor == b.c_rappor && a.c_hr == b.c_hr &&
         a.c_raptor == b.c_raptor && a.c_learn == b.c_learn &&
         a.c_hr_ind == b.c_hr_ind && a.c_raptor_ind == b.c_raptor_ind &&
         a.n1_fraction == b.n1_fraction && a.raptor.c == b.raptor.c &&
         a.raptor.repetitions == b.raptor.repetitions &&
         a.raptor.parallel_bits == b.raptor.parallel_bits &&
         a.raptor.bias.majority_batches == b.raptor.bias.majority_batches &&
         a.raptor_ind.c_thr == b.raptor_ind.c_thr &&
         a.raptor_ind.tau == b.raptor_ind.tau &&
         a.raptor_ind.repetitions == b.raptor_ind.repetitions;
}

nlohmann::json CalibrationToJson(const Calibration& c) {
  return {{"c_rappor", c.c_rappor},
          {"c_hr", c.c_hr},
          {"c_raptor", c.c_raptor},
          {"c_learn", c.c_learn},
          {"c_hr_ind", c.c_hr_ind},
          {"c_raptor_ind", c.c_raptor_ind},
          {"n1_fraction", c.n1_fraction},
          {"raptor",
           {{"c", c.raptor.c},
            {"repetitions", c.raptor.repetitions},
            {"parallel_bits", c.raptor.parallel_bits},
            {"majority_batches", c.raptor.bias.majority_batches}}},
          {"raptor_ind",
           {{"c_thr", c.raptor_ind.c_thr},
            {"tau", c.raptor_ind.tau},
            {"repetitions", c.raptor_ind.repetitions}}}};
}

absl::StatusOr<Calibration> CalibrationFromJson(const nlohmann::json& j) {
  if (!j.is_object()) {
    return absl::InvalidArgumentError("calibration must be a JSON object");
  }
  Calibration c;
  try {
    c.c_rappor = j.value("c_rappor", c.c_rappor);
    c.c_hr = j.value("c_hr", c.c_hr);
    c.c_raptor = j.value("c_raptor", c.c_raptor);
    c.c_learn = j.value("c_learn", c.c_learn);
    c.c_hr_ind = j.value("c_hr_ind", c.c_hr_ind);
    c.c_raptor_ind = j.value("c_raptor_ind", c.c_raptor_ind);
    c.n1_fraction = j.value("n1_fraction", c.n1_fraction);
    if (j.contains("raptor")) {
      const nlohmann::json& r = j.at("raptor");
      c.raptor.c = r.value("c", c.raptor.c);
      c.raptor.repetitions = r.value("repetitions", c.raptor.repetitions);
      c.raptor.parallel_bits = r.value("parallel_bits", c.raptor.parallel_bits);
      c.raptor.bias.majority_batches =
          r.value("majority_batches", c.raptor.bias.majority_batches);
    }
    if (j.contains("raptor_ind")) {
      const nlohmann::json& r = j.at("raptor_ind");
      c.raptor_ind.c_thr = r.value("c_thr", c.raptor_ind.c_thr);
      c.raptor_ind.tau = r.value("tau", c.raptor_ind.tau);
      c.raptor_ind.repetitions =
          r.value("repetitions", c.raptor_ind.repetitions);
    }
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed calibration: ", e.what()));
  }
  for (double v : {c.c_rappor, c.c_hr, c.c_raptor, c.c_learn, c.c_hr_ind,
                   c.c_raptor_ind}) {
    if (!(v > 0.0)) {
      return absl::InvalidArgumentError("sample-size constants must be > 0");
    }
  }
  if (!(c.n1_fraction > 0.0 && c.n1_fraction < 0.5)) {
    return absl::InvalidArgumentError("n1_fraction must lie in (0, 1/2)");
  }
  if (c.raptor.repetitions < 1 || c.raptor_ind.repetitions < 1) {
    return absl::InvalidArgumentError("repetitions must be >= 1");
  }
  if (!(c.raptor.c > 0.0) || !(c.raptor_ind.c_thr > 0.0) ||
      !(c.raptor_ind.tau >= 0.0 && c.raptor_ind.tau < 1.0)) {
    return absl::InvalidArgumentError("RAPTOR constants out of range");
  }
  return c;
}

double SampleRate(TestKind test, int k, const PrivacyBudget& budget,
                  double gamma) {
  const double g2 = gamma * gamma;
  const double kd = k;
  const double eps = budget.epsilon();
  switch (test) {
    case TestKind::kRapporUniformity: {
      const double a = budget.alpha_rappor();
      return std::pow(kd, 1.5) / (a * a * g2);
    }
    case TestKind::kHrUniformity: {
      const double a = budget.alpha_hr();
      return std::pow(kd, 1.5) / (a * a * g2);
    }
    case TestKind::kRaptorUniformity: {
      const double a = budget.alpha_hr();
      return kd / (a * a * g2);
    }
    case TestKind::kHrIndependence:
      return kd * kd * kd / (g2 * eps * eps * eps * eps);
    case TestKind::kRaptorIndependence:
      return kd * kd / (g2 * eps * eps);
  }
  return 0.0;
}

double LearnRate(int k, const PrivacyBudget& budget, double gamma) {
  const double a2 = budget.alpha_hr() * budget.alpha_hr();
  return static_cast<double>(k) * k * k / (a2 * a2 * gamma * gamma);
}

int64_t CalibratedSampleSize(TestKind test, int k,
                             const PrivacyBudget& budget, double gamma,
                             const Calibration& c) {
  double constant = 1.0;
  int64_t multiple = 1;
  switch (test) {
    case TestKind::kRapporUniformity:
      constant = c.c_rappor;
      break;
    case TestKind::kHrUniformity:
      constant = c.c_hr;
      break;
    case TestKind::kRaptorUniformity:
      constant = c.c_raptor;
      multiple = c.raptor.repetitions;
      break;
    case TestKind::kHrIndependence:
      constant = c.c_hr_ind;
      break;
    case TestKind::kRaptorIndependence:
      constant = c.c_raptor_ind;
      multiple = c.raptor_ind.repetitions;
      break;
  }
  const auto n = static_cast<int64_t>(
      std::ceil(constant * SampleRate(test, k, budget, gamma)));
  return (n + multiple - 1) / multiple * multiple;
}

int64_t CalibratedLearnSize(int k, const PrivacyBudget& budget, double gamma,
                            const Calibration& c) {
  return static_cast<int64_t>(
      std::ceil(c.c_learn * LearnRate(k, budget, gamma)));
}

}  // namespace ldptest
