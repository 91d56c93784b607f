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

#include "commands.h"

#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "ldptest/batch.h"
#include "ldptest/calibration.h"
#include "ldptest/distribution.h"
#include "ldptest/experiment.h"
#include "ldptest/hadamard.h"
#include "ldptest/independence.h"
#include "ldptest/io.h"
#include "ldptest/mechanisms.h"
#include "ldptest/random.h"
#include "ldptest/sweep.h"
#include "ldptest/theory_checks.h"
#include "ldptest/uniformity.h"
#include "ldptest/verdict.h"
#include "nlohmann/json.hpp"

namespace ldptest::cli {
namespace {

int Fail(const absl::Status& s, std::ostream& err) {
  err << "error: " << s.message() << "\n";
  return ExitCodeFor(s);
}

// Writes to --out when given, else to `out`.
int Deliver(const Flags& flags, const std::string& text, std::ostream& out,
            std::ostream& err) {
  if (flags.out.empty()) {
    out << text;
    return kExitOk;
  }
  if (absl::Status s = WriteFile(flags.out, text); !s.ok()) {
    return Fail(s, err);
  }
  return kExitOk;
}

absl::StatusOr<ExperimentConfig> BuildConfig(const Flags& f) {
  ExperimentConfig c;
  if (!f.config.empty()) {
    absl::StatusOr<nlohmann::json> j = ReadJsonFile(f.config);
    if (!j.ok()) return j.status();
    absl::StatusOr<ExperimentConfig> parsed = ConfigFromJson(*j);
    if (!parsed.ok()) return parsed.status();
    c = *std::move(parsed);
  }
  if (!f.test.empty()) {
    absl::StatusOr<TestKind> t = ParseTestKind(f.test);
    if (!t.ok()) return t.status();
    c.test = *t;
  }
  if (f.k.size() > 1 || f.epsilon.size() > 1) {
    return absl::InvalidArgumentError("give a single --k and --epsilon");
  }
  if (!f.k.empty()) c.k = f.k.front();
  if (!f.epsilon.empty()) c.epsilon = f.epsilon.front();
  if (f.gamma) c.gamma = *f.gamma;
  if (!f.n.empty()) c.n_grid = f.n;
  if (f.trials) c.trials = *f.trials;
  if (f.seed) c.seed = *f.seed;
  if (f.target) c.target_error = *f.target;
  if (!f.alternative.empty()) {
    absl::StatusOr<InstanceKind> kind = ParseInstanceKind(f.alternative);
    if (!kind.ok()) return kind.status();
    c.alternatives = {InstanceSpec{*kind, {}, {}}};
  }
  if (!f.input.empty()) {
    InstanceSpec file;
    file.kind = InstanceKind::kFile;
    file.path = f.input;
    c.alternatives = {file};
  }
  c.per_user = c.per_user || f.per_user;
  if (f.threads > 0) c.threads = f.threads;
  if (absl::Status s = c.Validate(); !s.ok()) return s;
  return c;
}

absl::StatusOr<ReportFormat> Format(const Flags& f) {
  return ParseReportFormat(f.format);
}

// The test that reads batches of a given mechanism.
absl::StatusOr<TestKind> TestForMechanism(MechanismKind kind) {
  switch (kind) {
    case MechanismKind::kRappor:
      return TestKind::kRapporUniformity;
    case MechanismKind::kHr:
      return TestKind::kHrUniformity;
    case MechanismKind::kRaptor:
      return TestKind::kRaptorUniformity;
    case MechanismKind::kHrPair:
      return TestKind::kHrIndependence;
    case MechanismKind::kRaptorBivariate:
      return TestKind::kRaptorIndependence;
    case MechanismKind::kRr:
      break;
  }
  return absl::InvalidArgumentError("no tester reads k-RR batches");
}

absl::StatusOr<Verdict> TestBatch(const PrivatizedBatch& batch,
                                  double gamma, int64_t n1,
                                  const Calibration& cal, Rng& rng) {
  switch (batch.kind()) {
    case MechanismKind::kRappor:
      return RapporUniformityTest(batch, gamma);
    case MechanismKind::kHr:
      return HrUniformityTest(batch, gamma, rng);
    case MechanismKind::kRaptor:
      return RaptorUniformityTest(batch, gamma, cal.raptor);
    case MechanismKind::kHrPair:
      return HrIndependenceTest(batch, gamma, n1, rng);
    case MechanismKind::kRaptorBivariate:
      return RaptorIndependenceTest(batch, gamma, cal.raptor_ind);
    case MechanismKind::kRr:
      break;
  }
  return absl::InvalidArgumentError("no tester reads k-RR batches");
}

absl::StatusOr<PrivatizedBatch> EncodeRaw(TestKind test, int k,
                                          const PrivacyBudget& budget,
                                          const std::string& text,
                                          const Calibration& cal, Rng& rng) {
  if (IsIndependenceTest(test)) {
    absl::StatusOr<std::vector<std::pair<int, int>>> s = ParsePairSamples(text);
    if (!s.ok()) return s.status();
    if (test == TestKind::kHrIndependence) {
      return EncodePairBatch(k, budget, *s, rng);
    }
    const size_t reps = cal.raptor_ind.repetitions;
    s->resize(s->size() / reps * reps);
    return EncodeRaptor2Batch(k, budget, *s, static_cast<int>(reps), rng);
  }
  absl::StatusOr<std::vector<int>> s = ParseSamples(text);
  if (!s.ok()) return s.status();
  switch (test) {
    case TestKind::kRapporUniformity:
      return EncodeBatch(MechanismKind::kRappor, k, budget, *s, rng);
    case TestKind::kHrUniformity:
      return EncodeBatch(MechanismKind::kHr, k, budget, *s, rng);
    default: {
      const size_t reps = cal.raptor.repetitions;
      s->resize(s->size() / reps * reps);
      return EncodeRaptorBatch(k, budget, *s, static_cast<int>(reps), rng);
    }
  }
}

}  // namespace

int ExitCodeFor(const absl::Status& status) {
  switch (status.code()) {
    case absl::StatusCode::kOk:
      return kExitOk;
    case absl::StatusCode::kInvalidArgument:
    case absl::StatusCode::kNotFound:
    case absl::StatusCode::kOutOfRange:
    case absl::StatusCode::kFailedPrecondition:
    case absl::StatusCode::kPermissionDenied:
    case absl::StatusCode::kUnimplemented:
      return kExitBadInput;
    default:
      return kExitFailure;
  }
}

int RunAudit(const Flags& flags, std::ostream& out, std::ostream& err) {
  std::vector<MechanismKind> kinds;
  if (flags.mechanism.empty() || flags.mechanism == "all") {
    kinds = {MechanismKind::kRr,     MechanismKind::kRappor,
             MechanismKind::kHr,     MechanismKind::kHrPair,
             MechanismKind::kRaptor, MechanismKind::kRaptorBivariate};
  } else {
    absl::StatusOr<MechanismKind> kind = ParseMechanism(flags.mechanism);
    if (!kind.ok()) return Fail(kind.status(), err);
    kinds = {*kind};
  }
  const std::vector<int> ks =
      flags.k.empty() ? std::vector<int>{2, 4, 8} : flags.k;
  const std::vector<double> eps =
      flags.epsilon.empty() ? std::vector<double>{0.1, 0.5, 1.0}
                            : flags.epsilon;
  nlohmann::json rows = nlohmann::json::array();
  bool all_passed = true;
  for (MechanismKind kind : kinds) {
    for (int k : ks) {
      for (double e : eps) {
        absl::StatusOr<PrivacyBudget> budget = PrivacyBudget::Create(e);
        if (!budget.ok()) return Fail(budget.status(), err);
        double ratio = 0.0;
        std::string method = "channel";
        if (kind == MechanismKind::kRappor && k > 16) {
          ratio = RapporPerBitAudit(*budget);
          method = "per-bit";
        } else {
          absl::StatusOr<ChannelMatrix> w = BuildChannel(kind, k, *budget);
          if (!w.ok()) return Fail(w.status(), err);
          ratio = AuditLdp(*w);
        }
        const bool passed = AuditPasses(ratio, *budget);
        all_passed = all_passed && passed;
        const double bound = std::exp(e);
        rows.push_back({{"mechanism", MechanismName(kind)},
                        {"k", k},
                        {"epsilon", e},
                        {"ratio", ratio},
                        {"bound", bound},
                        {"tight", std::abs(ratio - bound) <= 1e-9 * bound},
                        {"method", method},
                        {"passed", passed}});
      }
    }
  }
  nlohmann::json doc = {{"audits", rows}, {"passed", all_passed}};
  if (int code = Deliver(flags, doc.dump(2) + "\n", out, err); code != kExitOk) {
    return code;
  }
  return all_passed ? kExitOk : kExitFailure;
}

int RunTest(const Flags& flags, std::ostream& out, std::ostream& err) {
  if (flags.input.empty()) {
    return Fail(absl::InvalidArgumentError("--input is required"), err);
  }
  ExperimentConfig base;
  if (!flags.config.empty()) {
    absl::StatusOr<nlohmann::json> j = ReadJsonFile(flags.config);
    if (!j.ok()) return Fail(j.status(), err);
    absl::StatusOr<ExperimentConfig> c = ConfigFromJson(*j);
    if (!c.ok()) return Fail(c.status(), err);
    base = *std::move(c);
  }
  const double gamma = flags.gamma.value_or(base.gamma);
  const uint64_t seed = flags.seed.value_or(base.seed);
  Rng rng = MakeStream(seed, 0);
  absl::StatusOr<std::string> text = ReadFile(flags.input);
  if (!text.ok()) return Fail(text.status(), err);

  std::optional<PrivatizedBatch> batch;
  nlohmann::json j = nlohmann::json::parse(*text, nullptr, false);
  if (!j.is_discarded() && j.is_object()) {
    absl::StatusOr<PrivatizedBatch> b = BatchFromJson(j);
    if (!b.ok()) return Fail(b.status(), err);
    batch = *std::move(b);
    absl::StatusOr<TestKind> implied = TestForMechanism(batch->kind());
    if (!implied.ok()) return Fail(implied.status(), err);
    if (!flags.test.empty() && flags.test != TestKindName(*implied)) {
      return Fail(absl::InvalidArgumentError(absl::StrCat(
                      "a ", MechanismName(batch->kind()),
                      " batch is read by ", TestKindName(*implied))),
                  err);
    }
  } else {
    if (flags.test.empty() || flags.k.size() != 1 ||
        flags.epsilon.size() != 1) {
      return Fail(absl::InvalidArgumentError(
                      "raw samples need --test, --k and --epsilon"),
                  err);
    }
    absl::StatusOr<TestKind> test = ParseTestKind(flags.test);
    if (!test.ok()) return Fail(test.status(), err);
    absl::StatusOr<PrivacyBudget> budget =
        PrivacyBudget::Create(flags.epsilon.front());
    if (!budget.ok()) return Fail(budget.status(), err);
    absl::StatusOr<PrivatizedBatch> b = EncodeRaw(
        *test, flags.k.front(), *budget, *text, base.calibration, rng);
    if (!b.ok()) return Fail(b.status(), err);
    batch = *std::move(b);
  }
  const int64_t n1 =
      flags.n1 > 0
          ? flags.n1
          : static_cast<int64_t>(base.calibration.n1_fraction * batch->size());
  absl::StatusOr<Verdict> v =
      TestBatch(*batch, gamma, n1, base.calibration, rng);
  if (!v.ok()) return Fail(v.status(), err);
  v->seed = seed;
  return Deliver(flags, VerdictToJson(*v).dump(2) + "\n", out, err);
}

int RunSimulate(const Flags& flags, std::ostream& out, std::ostream& err) {
  absl::StatusOr<ExperimentConfig> c = BuildConfig(flags);
  if (!c.ok()) return Fail(c.status(), err);
  absl::StatusOr<ReportFormat> format = Format(flags);
  if (!format.ok()) return Fail(format.status(), err);
  absl::StatusOr<ExperimentReport> r = ErrorRates(*c);
  if (!r.ok()) return Fail(r.status(), err);
  return Deliver(flags, EmitReport(*r, *format), out, err);
}

int RunCurve(const Flags& flags, std::ostream& out, std::ostream& err) {
  absl::StatusOr<ExperimentConfig> c = BuildConfig(flags);
  if (!c.ok()) return Fail(c.status(), err);
  absl::StatusOr<ReportFormat> format = Format(flags);
  if (!format.ok()) return Fail(format.status(), err);
  absl::StatusOr<ExperimentReport> r = SampleComplexityCurve(*c);
  if (!r.ok()) return Fail(r.status(), err);
  return Deliver(flags, EmitReport(*r, *format), out, err);
}

int RunCalibrate(const Flags& flags, std::ostream& out, std::ostream& err) {
  absl::StatusOr<ExperimentConfig> c = BuildConfig(flags);
  if (!c.ok()) return Fail(c.status(), err);
  absl::StatusOr<SweepResult> result =
      absl::InvalidArgumentError(absl::StrCat(
          "unknown constant '", flags.constant,
          "'; expected c_rappor, c_hr, c_raptor, c_hr_ind, c_raptor_ind, "
          "c_learn or c_thr"));
  const double lo = flags.lo > 0.0 ? flags.lo : 0.25;
  const double hi = flags.hi > 0.0 ? flags.hi : 64.0;
  const std::vector<double> grid = GeometricGrid(lo, hi, flags.steps);
  const std::vector<std::pair<std::string, TestKind>> sample_constants = {
      {"c_rappor", TestKind::kRapporUniformity},
      {"c_hr", TestKind::kHrUniformity},
      {"c_raptor", TestKind::kRaptorUniformity},
      {"c_hr_ind", TestKind::kHrIndependence},
      {"c_raptor_ind", TestKind::kRaptorIndependence}};
  for (const auto& [name, test] : sample_constants) {
    if (flags.constant != name) continue;
    ExperimentConfig cfg = *c;
    cfg.test = test;
    cfg.alternatives.clear();
    result = CalibrateSampleConstant(cfg, grid);
  }
  if (flags.constant == "c_learn" || flags.constant == "c_thr") {
    const int k = flags.k.empty() ? (flags.constant == "c_thr" ? 6 : 4)
                                  : flags.k.front();
    const double gamma = flags.gamma.value_or(0.45);
    if (flags.constant == "c_thr") {
      result = CalibrateDependenceThreshold(k, gamma, flags.quantile);
    } else {
      absl::StatusOr<JointDistribution> p = BalancedPaninskiJoint(k, gamma);
      absl::StatusOr<PrivacyBudget> budget = PrivacyBudget::Create(c->epsilon);
      if (!p.ok()) return Fail(p.status(), err);
      if (!budget.ok()) return Fail(budget.status(), err);
      result = CalibrateLearnConstant(*p, *budget, gamma, c->trials, c->seed,
                                      0.8, grid, c->threads);
    }
  }
  if (!result.ok()) return Fail(result.status(), err);
  return Deliver(flags, SweepResultToJson(*result).dump(2) + "\n", out, err);
}

int RunVerifyAppendix(const Flags& flags, std::ostream& out,
                      std::ostream& err) {
  absl::StatusOr<SuiteReport> r = RunAppendixSuite(flags.seed.value_or(1));
  if (!r.ok()) return Fail(r.status(), err);
  if (int code = Deliver(flags, SuiteReportToJson(*r).dump(2) + "\n", out,
                         err);
      code != kExitOk) {
    return code;
  }
  return r->AllPassed() ? kExitOk : kExitFailure;
}

}  // namespace ldptest::cli
