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

#include "ldptest/sweep.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "ldptest/calibration.h"
#include "ldptest/fast_sim.h"
#include "ldptest/hadamard.h"
#include "ldptest/independence.h"
#include "ldptest/random.h"
#include "ldptest/theory_checks.h"

namespace ldptest {

nlohmann::json SweepResultToJson(const SweepResult& r) {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& [x, y] : r.points) pts.push_back({x, y});
  return {{"constant", r.constant},
          {"value", r.value},
          {"saturated", r.saturated},
          {"points", pts}};
}

std::vector<double> GeometricGrid(double lo, double hi,
                                  int steps_per_doubling) {
  std::vector<double> out;
  if (!(lo > 0.0) || hi < lo || steps_per_doubling < 1) return out;
  const double ratio = std::pow(2.0, 1.0 / steps_per_doubling);
  for (int i = 0;; ++i) {
    const double v = lo * std::pow(ratio, i);
    if (v > hi * (1.0 + 1e-12)) break;
    out.push_back(v);
  }
  return out;
}

namespace {

const char* SampleConstantName(TestKind test) {
  switch (test) {
    case TestKind::kRapporUniformity:
      return "c_rappor";
    case TestKind::kHrUniformity:
      return "c_hr";
    case TestKind::kRaptorUniformity:
      return "c_raptor";
    case TestKind::kHrIndependence:
      return "c_hr_ind";
    case TestKind::kRaptorIndependence:
      return "c_raptor_ind";
  }
  return "c";
}

}  // namespace

absl::StatusOr<SweepResult> CalibrateSampleConstant(
    const ExperimentConfig& base, const std::vector<double>& grid) {
  if (grid.empty()) return absl::InvalidArgumentError("empty constant grid");
  absl::StatusOr<PrivacyBudget> budget = PrivacyBudget::Create(base.epsilon);
  if (!budget.ok()) return budget.status();
  const double rate = SampleRate(base.test, base.k, *budget, base.gamma);
  int64_t multiple = 1;
  if (base.test == TestKind::kRaptorUniformity) {
    multiple = base.calibration.raptor.repetitions;
  } else if (base.test == TestKind::kRaptorIndependence) {
    multiple = base.calibration.raptor_ind.repetitions;
  }
  ExperimentConfig cfg = base;
  cfg.n_grid.clear();
  std::vector<double> constants;
  for (double c : grid) {
    int64_t n = static_cast<int64_t>(std::ceil(c * rate));
    n = (n + multiple - 1) / multiple * multiple;
    if (!cfg.n_grid.empty() && n <= cfg.n_grid.back()) continue;
    cfg.n_grid.push_back(n);
    constants.push_back(c);
  }
  absl::StatusOr<ExperimentReport> report = SampleComplexityCurve(cfg);
  if (!report.ok()) return report.status();
  SweepResult out;
  out.constant = SampleConstantName(base.test);
  out.saturated = report->saturated;
  for (size_t i = 0; i < cfg.n_grid.size(); ++i) {
    double worst = -1.0;
    for (const CurvePoint& p : report->points) {
      if (p.n != cfg.n_grid[i]) continue;
      worst = std::max({worst, p.type1.rate, p.type2.rate});
    }
    if (worst >= 0.0) out.points.emplace_back(constants[i], worst);
    if (!report->saturated && cfg.n_grid[i] == report->minimal_n) {
      out.value = constants[i];
    }
  }
  return out;
}

absl::StatusOr<double> LearnedProductChi2(const JointDistribution& p,
                                          const LearnedProduct& q,
                                          const PrivacyBudget& budget) {
  absl::StatusOr<HadamardCode> code = HadamardCode::Create(p.k());
  if (!code.ok()) return code.status();
  const auto [p1, p2] = Marginals(p);
  absl::StatusOr<JointDistribution> prod = Product(p1, p2);
  if (!prod.ok()) return prod.status();
  absl::StatusOr<JointDistribution> t = PushforwardT(*code, *prod, budget);
  if (!t.ok()) return t.status();
  const int K = q.output_size();
  if (t->k() != K) {
    return absl::InvalidArgumentError("learned product has the wrong size");
  }
  double chi2 = 0.0;
  for (int z1 = 0; z1 < K; ++z1) {
    for (int z2 = 0; z2 < K; ++z2) {
      const double d = t->at(z1, z2) - q.at(z1, z2);
      chi2 += d * d / q.at(z1, z2);
    }
  }
  return chi2;
}

absl::StatusOr<Rate> LearnSuccessRate(const JointDistribution& p, int64_t n1,
                                      const PrivacyBudget& budget,
                                      double gamma, int trials, uint64_t seed,
                                      int threads) {
  if (trials < 1) return absl::InvalidArgumentError("trials must be >= 1");
  if (n1 < 1) return absl::InvalidArgumentError("n1 must be >= 1");
  const double target = LearnTargetChi2(p.k(), budget, gamma);
  std::vector<uint8_t> ok(trials, 0);
  std::vector<absl::Status> status(trials);
  ParallelFor(trials, threads, [&](int64_t t) {
    Rng rng = MakeStream(seed, t);
    absl::StatusOr<LearnedProduct> q = SimulateLearnProduct(p, n1, budget, rng);
    if (!q.ok()) {
      status[t] = q.status();
      return;
    }
    absl::StatusOr<double> chi2 = LearnedProductChi2(p, *q, budget);
    if (!chi2.ok()) {
      status[t] = chi2.status();
      return;
    }
    ok[t] = *chi2 <= target ? 1 : 0;
  });
  for (const absl::Status& s : status) {
    if (!s.ok()) return s;
  }
  int64_t successes = 0;
  for (uint8_t v : ok) successes += v;
  return WilsonRate(successes, trials);
}

absl::StatusOr<SweepResult> CalibrateLearnConstant(
    const JointDistribution& p, const PrivacyBudget& budget, double gamma,
    int trials, uint64_t seed, double target_success,
    const std::vector<double>& grid, int threads) {
  if (grid.empty()) return absl::InvalidArgumentError("empty constant grid");
  const double rate = LearnRate(p.k(), budget, gamma);
  SweepResult out;
  out.constant = "c_learn";
  out.saturated = true;
  for (double c : grid) {
    const auto n1 = static_cast<int64_t>(std::ceil(c * rate));
    absl::StatusOr<Rate> r =
        LearnSuccessRate(p, n1, budget, gamma, trials, seed, threads);
    if (!r.ok()) return r.status();
    out.points.emplace_back(c, r->rate);
    if (r->rate >= target_success) {
      out.value = c;
      out.saturated = false;
      break;
    }
  }
  return out;
}

absl::StatusOr<SweepResult> CalibrateDependenceThreshold(int k, double gamma,
                                                         double quantile) {
  absl::StatusOr<JointDistribution> p = BalancedPaninskiJoint(k, gamma);
  if (!p.ok()) return p.status();
  absl::StatusOr<MomentReport> profile =
      JointPerturbationProfile(*p, gamma, {});
  if (!profile.ok()) return profile.status();
  const auto it = std::find_if(
      profile->abs_quantiles.begin(), profile->abs_quantiles.end(),
      [&](const auto& q) { return std::abs(q.first - quantile) < 1e-12; });
  if (it == profile->abs_quantiles.end()) {
    return absl::InvalidArgumentError("quantile must be 0.25, 0.5 or 0.75");
  }
  const double c_thr = it->second;
  // Exceedance is strict, so a threshold just below the quantile reports
  // the mass at and above it.
  const std::vector<double> cut = {c_thr * (1.0 - 1e-6)};
  absl::StatusOr<MomentReport> at = JointPerturbationProfile(*p, gamma, cut);
  if (!at.ok()) return at.status();
  SweepResult out;
  out.constant = "c_thr";
  out.value = c_thr;
  out.points.emplace_back(quantile, c_thr);
  out.points.emplace_back(c_thr, at->exceedance.front().second);
  return out;
}

}  // namespace ldptest
