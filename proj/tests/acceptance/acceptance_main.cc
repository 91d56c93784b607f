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

// End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
// exits 1 if any selected criterion fails.
//
//   ldptest_acceptance              # all criteria
//   ldptest_acceptance --only 5 7   # a subset

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "commands.h"
#include "ldptest/calibration.h"
#include "ldptest/distribution.h"
#include "ldptest/experiment.h"
#include "ldptest/hadamard.h"
#include "ldptest/mechanisms.h"
#include "ldptest/random.h"
#include "ldptest/sweep.h"
#include "ldptest/theory_checks.h"
#include "nlohmann/json.hpp"

namespace ldptest {
namespace {

struct Outcome {
  bool passed = true;
  std::string detail;
};

void Require(Outcome& o, bool ok, const std::string& what) {
  if (!ok) {
    o.passed = false;
    if (!o.detail.empty()) o.detail += "; ";
    o.detail += what;
  }
}

void Note(Outcome& o, const std::string& what) {
  if (!o.detail.empty()) o.detail += "; ";
  o.detail += what;
}

std::vector<double> RandomPmf(int k, std::mt19937_64& rng) {
  std::exponential_distribution<double> ex(1.0);
  std::vector<double> w(k);
  double total = 0.0;
  for (double& v : w) total += (v = ex(rng));
  for (double& v : w) v /= total;
  return w;
}

std::vector<double> ZeroSum(int k, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  std::vector<double> d(k);
  double mean = 0.0;
  for (double& v : d) mean += (v = nd(rng)) / k;
  for (double& v : d) v -= mean;
  return d;
}

bool ClaimsPass(const std::vector<ClaimCheck>& claims,
                const std::string& prefix) {
  for (const ClaimCheck& c : claims) {
    if (c.name.rfind(prefix, 0) == 0 && !c.passed) return false;
  }
  return true;
}

// 1. Privacy audit.
Outcome PrivacyAudit() {
  Outcome o;
  int cases = 0;
  double worst_excess = 0.0;
  for (double eps : {0.1, 0.5, 1.0}) {
    const PrivacyBudget b = *PrivacyBudget::Create(eps);
    const double e = std::exp(eps);
    for (MechanismKind m :
         {MechanismKind::kRr, MechanismKind::kRappor, MechanismKind::kHr,
          MechanismKind::kHrPair, MechanismKind::kRaptor,
          MechanismKind::kRaptorBivariate}) {
      std::vector<int> ks = {2, 4, 8};
      if (m == MechanismKind::kRappor) ks = {2, 4, 8, 9, 10};
      for (int k : ks) {
        absl::StatusOr<ChannelMatrix> w = BuildChannel(m, k, b);
        if (!w.ok()) {
          Require(o, false, w.status().ToString());
          continue;
        }
        const double r = AuditLdp(*w);
        ++cases;
        worst_excess = std::max(worst_excess, r / e - 1.0);
        Require(o, r <= e * (1 + 1e-9),
                absl::StrCat(MechanismName(m), " k=", k, " eps=", eps,
                             " ratio ", r));
        const bool tight = m == MechanismKind::kRr ||
                           m == MechanismKind::kRappor ||
                           m == MechanismKind::kRaptor ||
                           m == MechanismKind::kRaptorBivariate;
        if (tight) {
          Require(o, std::abs(r - e) <= 1e-9,
                  absl::StrCat(MechanismName(m), " k=", k, " eps=", eps,
                               " not tight: ", r));
        }
      }
    }
  }
  Note(o, absl::StrFormat("%d channels, max ratio/e^eps - 1 = %.2e", cases,
                          worst_excess));
  return o;
}

// 2. Exact identities.
Outcome ExactIdentities() {
  Outcome o;
  std::mt19937_64 rng(2026);
  std::uniform_int_distribution<int> kd(2, 64);
  std::uniform_real_distribution<double> ed(0.1, 2.0);
  double worst_a = 0.0;
  for (int c = 0; c < 200; ++c) {
    const int k = kd(rng);
    const PrivacyBudget b = *PrivacyBudget::Create(ed(rng));
    const HadamardCode code = *HadamardCode::Create(k);
    const Distribution p = *Distribution::Create(RandomPmf(k, rng));
    const double lhs = *L2DistanceSq(*PushforwardHr(code, p, b), QStar(code, b));
    const double rhs = b.alpha_hr() * b.alpha_hr() / code.output_size() *
                       *L2DistanceSq(p, Distribution::Uniform(k));
    worst_a = std::max(worst_a, std::abs(lhs - rhs));
  }
  Require(o, worst_a <= 1e-10, absl::StrCat("(a) max error ", worst_a));

  double worst_b = 0.0;
  const HadamardCode code4 = *HadamardCode::Create(4);
  const double K = code4.output_size();
  for (int c = 0; c < 100; ++c) {
    const PrivacyBudget b = *PrivacyBudget::Create(ed(rng));
    const JointDistribution p = *JointDistribution::Create(4, RandomPmf(16, rng));
    const JointDistribution q = *JointDistribution::Create(4, RandomPmf(16, rng));
    const double lhs = *L2DistanceSq(*PushforwardT(code4, p, b),
                                     *PushforwardT(code4, q, b));
    const auto [p1, p2] = Marginals(p);
    const auto [q1, q2] = Marginals(q);
    const double a = b.alpha_hr();
    const double rhs = std::pow(a, 4) / (K * K) * *L2DistanceSq(p, q) +
                       a * a / (K * K) *
                           (*L2DistanceSq(p1, q1) + *L2DistanceSq(p2, q2));
    worst_b = std::max(worst_b, std::abs(lhs - rhs));
  }
  Require(o, worst_b <= 1e-10, absl::StrCat("(b) max error ", worst_b));

  int checks_c = 0;
  for (int k = 1; k <= 3; ++k) {
    for (int n = 2; n <= 3; ++n) {
      for (double eps : {0.5, 1.0}) {
        for (int rep = 0; rep < 3; ++rep) {
          const Distribution p = rep == 0
                                     ? Distribution::Uniform(k)
                                     : *Distribution::Create(RandomPmf(k, rng));
          absl::StatusOr<MomentReport> r =
              RapporTMomentCheck(n, *PrivacyBudget::Create(eps), p);
          if (!r.ok()) {
            Require(o, false, r.status().ToString());
            continue;
          }
          ++checks_c;
          Require(o, ClaimsPass(r->claims, "expectation"),
                  absl::StrCat("(c) E[T] k=", k, " n=", n));
          Require(o, ClaimsPass(r->claims, "covariance"),
                  absl::StrCat("(c) covariance k=", k, " n=", n));
          Require(o, ClaimsPass(r->claims, "cross_") &&
                         ClaimsPass(r->claims, "var_f"),
                  absl::StrCat("(c) moment terms k=", k, " n=", n));
        }
      }
    }
  }
  Note(o, absl::StrFormat("(a) 200 cases max |err| %.1e; (b) 100 cases max "
                          "|err| %.1e; (c) %d enumerations",
                          worst_a, worst_b, checks_c));
  return o;
}

// 3. Concentration suite.
Outcome Concentration() {
  Outcome o;
  std::mt19937_64 rng(477);
  std::uniform_int_distribution<int> half(1, 6);
  int subset_cases = 0;
  for (int c = 0; c < 50; ++c) {
    const int k = 2 * half(rng);
    absl::StatusOr<MomentReport> r = SubsetZMoments(ZeroSum(k, rng));
    if (!r.ok()) {
      Require(o, false, r.status().ToString());
      continue;
    }
    ++subset_cases;
    Require(o, r->exact, "subset moments not exact");
    Require(o, ClaimsPass(r->claims, "second_moment"),
            absl::StrCat("E[Z^2] k=", k));
    Require(o, ClaimsPass(r->claims, "fourth_moment_bound"),
            absl::StrCat("E[Z^4] bound k=", k));
  }
  Rng coin_rng = MakeStream(477, 1);
  double min_exceed = 1.0;
  for (double g : {0.3, 0.4, 0.5}) {
    for (int c = 0; c < 20; ++c) {
      std::vector<int> theta(5);
      for (int& t : theta) t = Bernoulli(coin_rng, 0.5) ? 1 : -1;
      absl::StatusOr<MomentReport> r =
          SubsetExceedance(*Paninski(10, g, theta), g);
      if (!r.ok()) {
        Require(o, false, r.status().ToString());
        continue;
      }
      min_exceed = std::min(min_exceed, r->exceedance[0].second);
      Require(o, r->outcomes == 252 && r->exceedance[0].second > 1.0 / 477,
              absl::StrCat("exceedance gamma=", g));
    }
  }
  int joint_cases = 0;
  for (int k : {4, 6, 8}) {
    for (int c = 0; c < 5; ++c) {
      std::vector<double> d(k * k);
      std::normal_distribution<double> nd;
      for (double& v : d) v = nd(rng);
      for (int i = 0; i < k; ++i) {
        double row = 0;
        for (int j = 0; j < k; ++j) row += d[i * k + j] / k;
        for (int j = 0; j < k; ++j) d[i * k + j] -= row;
      }
      for (int j = 0; j < k; ++j) {
        double col = 0;
        for (int i = 0; i < k; ++i) col += d[i * k + j] / k;
        for (int i = 0; i < k; ++i) d[i * k + j] -= col;
      }
      absl::StatusOr<MomentReport> r = JointZMoments(k, d);
      if (!r.ok()) {
        Require(o, false, r.status().ToString());
        continue;
      }
      ++joint_cases;
      Require(o, r->exact && ClaimsPass(r->claims, "bracket") &&
                     ClaimsPass(r->claims, "second_moment"),
              absl::StrCat("joint bracket k=", k));
    }
  }
  Note(o, absl::StrFormat("%d subset cases, 60 exceedance cases (min %.4f "
                          "vs 1/477 = %.4f), %d joint cases",
                          subset_cases, min_exceed, 1.0 / 477, joint_cases));
  return o;
}

// 4. Lower-bound matrix structure.
Outcome LowerBoundStructure() {
  Outcome o;
  double worst_off = 0.0, worst_spread = 0.0;
  auto check = [&](MechanismKind m, int k, double eps) {
    absl::StatusOr<LbMatrix> lb =
        ComputeLbMatrix(m, k, *PrivacyBudget::Create(eps));
    if (!lb.ok()) {
      Require(o, false, lb.status().ToString());
      return;
    }
    double dmin = INFINITY, dmax = -INFINITY;
    for (int i = 0; i < lb->size; ++i) {
      dmin = std::min(dmin, lb->at(i, i));
      dmax = std::max(dmax, lb->at(i, i));
      for (int j = 0; j < lb->size; ++j) {
        if (i != j) worst_off = std::max(worst_off, std::abs(lb->at(i, j)));
      }
    }
    if (m == MechanismKind::kHr) {
      worst_spread = std::max(worst_spread, dmax - dmin);
      Require(o, dmax - dmin <= 1e-10,
              absl::StrCat("HR diagonal spread k=", k, " eps=", eps));
    }
  };
  for (double eps : {0.25, 0.5, 1.0}) {
    for (int k : {4, 8}) check(MechanismKind::kRappor, k, eps);
    for (int k : {4, 16, 64}) check(MechanismKind::kHr, k, eps);
  }
  Require(o, worst_off <= 1e-10, absl::StrCat("off-diagonal ", worst_off));
  Note(o, absl::StrFormat("max |off-diagonal| %.1e, max HR diagonal spread "
                          "%.1e",
                          worst_off, worst_spread));
  return o;
}

ExperimentConfig BaseConfig(TestKind test, int k, double gamma) {
  ExperimentConfig c;
  c.test = test;
  c.k = k;
  c.epsilon = 1.0;
  c.gamma = gamma;
  c.seed = 20260;
  return c;
}

// Runs the config and checks both rates at every point against `limit`.
void CheckRates(Outcome& o, const ExperimentConfig& c, double limit) {
  absl::StatusOr<ExperimentReport> r = ErrorRates(c);
  if (!r.ok()) {
    Require(o, false, r.status().ToString());
    return;
  }
  for (const CurvePoint& p : r->points) {
    const std::string label = absl::StrFormat(
        "%s n=%d type1=%.3f type2=%.3f", TestKindName(c.test), p.n,
        p.type1.rate, p.type2.rate);
    Require(o, p.type1.rate <= limit && p.type2.rate <= limit, label);
    if (o.passed) Note(o, label);
  }
}

// 5. Power at calibrated constants.
Outcome Power() {
  Outcome o;
  for (TestKind t : {TestKind::kRapporUniformity, TestKind::kHrUniformity,
                     TestKind::kRaptorUniformity}) {
    ExperimentConfig c = BaseConfig(t, 64, 0.5);
    c.trials = 500;
    CheckRates(o, c, 0.40);
  }
  return o;
}

// Least-squares slope of log y against log x.
double LogLogSlope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]) / x.size();
    my += std::log(y[i]) / y.size();
  }
  double sxy = 0, sxx = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
    sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
  }
  return sxy / sxx;
}

// 6. Scaling separation. The n grid is the same for every k, so the fitted
// slope does not depend on the rate formulas.
Outcome Scaling() {
  Outcome o;
  std::vector<int64_t> grid;
  for (double v = 64; v < 4e9; v *= std::pow(2.0, 1.0 / 16)) {
    const int64_t n = static_cast<int64_t>(std::llround(v));
    if (grid.empty() || n > grid.back()) grid.push_back(n);
  }
  struct Case {
    TestKind test;
    std::vector<int> ks;
    double gamma;
    double slope;
    double tol;
  };
  const std::vector<Case> cases = {
      {TestKind::kRapporUniformity, {16, 64, 256}, 0.5, 1.5, 0.2},
      {TestKind::kHrUniformity, {16, 64, 256}, 0.5, 1.5, 0.2},
      {TestKind::kRaptorUniformity, {16, 64, 256}, 0.5, 1.0, 0.2},
      {TestKind::kRaptorIndependence, {4, 8, 16}, 0.45, 2.0, 0.3}};
  for (const Case& cs : cases) {
    std::vector<double> xs, ns;
    for (int k : cs.ks) {
      ExperimentConfig c = BaseConfig(cs.test, k, cs.gamma);
      c.trials = 1000;
      c.n_grid = grid;
      absl::StatusOr<ExperimentReport> r = SampleComplexityCurve(c);
      if (!r.ok() || r->saturated) {
        Require(o, false,
                absl::StrCat(TestKindName(cs.test), " k=", k,
                             r.ok() ? " saturated" : r.status().ToString()));
        continue;
      }
      xs.push_back(k);
      ns.push_back(static_cast<double>(r->minimal_n));
    }
    if (xs.size() != cs.ks.size()) continue;
    const double slope = LogLogSlope(xs, ns);
    std::string ns_text;
    for (double n : ns) absl::StrAppend(&ns_text, ns_text.empty() ? "" : ",",
                                        static_cast<int64_t>(n));
    const std::string label =
        absl::StrFormat("%s slope %.3f (want %.1f +- %.1f; n_min %s)",
                        TestKindName(cs.test), slope, cs.slope, cs.tol,
                        ns_text);
    Require(o, std::abs(slope - cs.slope) <= cs.tol, label);
    if (o.passed) Note(o, label);
  }
  return o;
}

// 7. Independence pipeline.
Outcome Independence() {
  Outcome o;
  for (TestKind t : {TestKind::kHrIndependence, TestKind::kRaptorIndependence}) {
    ExperimentConfig c = BaseConfig(t, 4, 0.45);
    c.trials = 500;
    CheckRates(o, c, 0.40);
  }
  const PrivacyBudget b = *PrivacyBudget::Create(1.0);
  const Calibration cal;
  const int64_t n1 = CalibratedLearnSize(4, b, 0.45, cal);
  for (const JointDistribution& p :
       {JointDistribution::Uniform(4), *BalancedPaninskiJoint(4, 0.45)}) {
    absl::StatusOr<Rate> r = LearnSuccessRate(p, n1, b, 0.45, 500, 7);
    if (!r.ok()) {
      Require(o, false, r.status().ToString());
      continue;
    }
    const std::string label =
        absl::StrFormat("learn_product n1=%d success %.3f", n1, r->rate);
    Require(o, r->rate >= 0.8, label);
    if (o.passed) Note(o, label);
  }
  return o;
}

// 8. Determinism of `simulate`.
Outcome Determinism() {
  Outcome o;
  cli::Flags f;
  f.test = "raptor-uniformity";
  f.k = {16};
  f.trials = 50;
  f.seed = 12345;
  f.n = {20000, 40000, 80000};
  f.format = "json";
  std::string runs[2];
  for (std::string& run : runs) {
    std::ostringstream out, err;
    const int code = cli::RunSimulate(f, out, err);
    Require(o, code == cli::kExitOk, "simulate failed: " + err.str());
    nlohmann::json j = nlohmann::json::parse(out.str(), nullptr, false);
    Require(o, !j.is_discarded(), "simulate emitted invalid JSON");
    if (j.is_object()) j.erase("wall_clock_seconds");
    run = j.dump(2);
  }
  Require(o, runs[0] == runs[1], "reports differ");
  Note(o, absl::StrCat(runs[0].size(), " bytes identical"));
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace ldptest

int main(int argc, char** argv) {
  using ldptest::Criterion;
  using ldptest::Outcome;
  CLI::App app{"Acceptance criteria"};
  std::vector<int> only;
  app.add_option("--only", only, "Criterion ids to run (default all)");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria = {
      {1, "privacy audit", 5, ldptest::PrivacyAudit},
      {2, "exact identities", 30, ldptest::ExactIdentities},
      {3, "concentration suite", 120, ldptest::Concentration},
      {4, "lower-bound structure", 60, ldptest::LowerBoundStructure},
      {5, "power at calibrated n", 600, ldptest::Power},
      {6, "scaling separation", 3600, ldptest::Scaling},
      {7, "independence pipeline", 600, ldptest::Independence},
      {8, "determinism", 60, ldptest::Determinism},
  };
  const std::set<int> selected(only.begin(), only.end());
  bool all = true;
  for (const Criterion& c : criteria) {
    if (!selected.empty() && !selected.contains(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o = c.run();
    const double secs = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start)
                            .count();
    if (secs > c.budget_seconds) {
      o.passed = false;
      ldptest::Note(o, absl::StrFormat("over the %.0f s budget",
                                       c.budget_seconds));
    }
    all = all && o.passed;
    std::printf("criterion %d (%s): %s [%.2f s] %s\n", c.id, c.name,
                o.passed ? "PASS" : "FAIL", secs, o.detail.c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
