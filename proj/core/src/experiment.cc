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

#include "ldptest/experiment.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <variant>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "ldptest/batch.h"
#include "ldptest/distribution.h"
#include "ldptest/fast_sim.h"
#include "ldptest/independence.h"
#include "ldptest/io.h"
#include "ldptest/mechanisms.h"
#include "ldptest/random.h"
#include "ldptest/sampling.h"
#include "ldptest/uniformity.h"

namespace ldptest {
namespace {

constexpr double kWilsonZ = 1.959963984540054;

using FileSamples =
    std::variant<std::monostate, std::vector<int>,
                 std::vector<std::pair<int, int>>>;

// File contents per instance, loaded once per experiment.
absl::StatusOr<std::vector<FileSamples>> LoadFiles(
    const ExperimentConfig& config) {
  std::vector<FileSamples> out;
  for (const InstanceSpec& spec : config.Instances()) {
    if (spec.kind != InstanceKind::kFile) {
      out.emplace_back();
      continue;
    }
    if (IsIndependenceTest(config.test)) {
      absl::StatusOr<std::vector<std::pair<int, int>>> s =
          ReadPairSamples(spec.path);
      if (!s.ok()) return s.status();
      out.emplace_back(*std::move(s));
    } else {
      absl::StatusOr<std::vector<int>> s = ReadSamples(spec.path);
      if (!s.ok()) return s.status();
      out.emplace_back(*std::move(s));
    }
  }
  return out;
}

std::vector<int> DrawTheta(int k, Rng& rng) {
  std::vector<int> theta(k / 2);
  for (int& t : theta) t = Bernoulli(rng, 0.5) ? 1 : -1;
  return theta;
}

absl::StatusOr<Distribution> UnivariateInstance(const ExperimentConfig& c,
                                                const InstanceSpec& spec,
                                                Rng& rng) {
  switch (spec.kind) {
    case InstanceKind::kUniform:
      return Distribution::Uniform(c.k);
    case InstanceKind::kPaninski: {
      const std::vector<int> theta =
          spec.theta.empty() ? DrawTheta(c.k, rng) : spec.theta;
      return Paninski(c.k, c.gamma, theta);
    }
    default:
      return absl::InvalidArgumentError(
          absl::StrCat("instance ", spec.Label(), " is not univariate"));
  }
}

absl::StatusOr<JointDistribution> JointInstance(const ExperimentConfig& c,
                                                const InstanceSpec& spec,
                                                Rng& rng) {
  switch (spec.kind) {
    case InstanceKind::kUniform:
      return JointDistribution::Uniform(c.k);
    case InstanceKind::kProductPaninski: {
      const std::vector<int> t1 =
          spec.theta.empty() ? DrawTheta(c.k, rng) : spec.theta;
      const std::vector<int> t2 =
          spec.theta.empty() ? DrawTheta(c.k, rng) : spec.theta;
      absl::StatusOr<Distribution> p1 = Paninski(c.k, c.gamma, t1);
      if (!p1.ok()) return p1.status();
      absl::StatusOr<Distribution> p2 = Paninski(c.k, c.gamma, t2);
      if (!p2.ok()) return p2.status();
      return Product(*p1, *p2);
    }
    case InstanceKind::kBalancedPaninskiJoint:
      return BalancedPaninskiJoint(c.k, c.gamma);
    default:
      return absl::InvalidArgumentError(
          absl::StrCat("instance ", spec.Label(), " is not a joint pmf"));
  }
}

template <typename T>
absl::StatusOr<std::vector<T>> Prefix(const std::vector<T>& all, int64_t n) {
  if (static_cast<int64_t>(all.size()) < n) {
    return absl::InvalidArgumentError(absl::StrCat(
        "sample file holds ", all.size(), " samples, trial needs ", n));
  }
  return std::vector<T>(all.begin(), all.begin() + n);
}

int64_t FirstStageSize(const ExperimentConfig& c, int64_t n) {
  return std::max<int64_t>(
      1, static_cast<int64_t>(std::floor(c.calibration.n1_fraction * n)));
}

bool NeedsPerUser(const ExperimentConfig& c, const InstanceSpec& spec) {
  return c.per_user || spec.kind == InstanceKind::kFile ||
         (c.test == TestKind::kRaptorUniformity &&
          (c.calibration.raptor.parallel_bits ||
           c.calibration.raptor.bias.majority_batches > 0));
}

absl::StatusOr<Verdict> RunUnivariate(const ExperimentConfig& c,
                                      const InstanceSpec& spec,
                                      const FileSamples& file,
                                      const PrivacyBudget& budget, int64_t n,
                                      Rng& rng) {
  const Calibration& cal = c.calibration;
  const bool per_user = NeedsPerUser(c, spec);
  std::vector<int> samples;
  std::optional<Distribution> p;
  if (spec.kind == InstanceKind::kFile) {
    absl::StatusOr<std::vector<int>> s =
        Prefix(std::get<std::vector<int>>(file), n);
    if (!s.ok()) return s.status();
    samples = *std::move(s);
  } else {
    absl::StatusOr<Distribution> d = UnivariateInstance(c, spec, rng);
    if (!d.ok()) return d.status();
    p = *std::move(d);
    if (per_user) samples = Sample(*p, n, rng);
  }
  switch (c.test) {
    case TestKind::kRapporUniformity: {
      if (!per_user) return SimulateRapporUniformity(*p, n, budget, c.gamma, rng);
      absl::StatusOr<PrivatizedBatch> b =
          EncodeBatch(MechanismKind::kRappor, c.k, budget, samples, rng);
      if (!b.ok()) return b.status();
      return RapporUniformityTest(*b, c.gamma);
    }
    case TestKind::kHrUniformity: {
      if (!per_user) return SimulateHrUniformity(*p, n, budget, c.gamma, rng);
      absl::StatusOr<PrivatizedBatch> b =
          EncodeBatch(MechanismKind::kHr, c.k, budget, samples, rng);
      if (!b.ok()) return b.status();
      return HrUniformityTest(*b, c.gamma, rng);
    }
    case TestKind::kRaptorUniformity: {
      if (!per_user) {
        return SimulateRaptorUniformity(*p, n, budget, c.gamma, cal.raptor,
                                        rng);
      }
      const int64_t reps = cal.raptor.repetitions;
      samples.resize(samples.size() / reps * reps);
      return RaptorUniformityTest(samples, c.k, budget, c.gamma, cal.raptor,
                                  rng);
    }
    default:
      return absl::InternalError("not a uniformity test");
  }
}

absl::StatusOr<Verdict> RunBivariate(const ExperimentConfig& c,
                                     const InstanceSpec& spec,
                                     const FileSamples& file,
                                     const PrivacyBudget& budget, int64_t n,
                                     Rng& rng) {
  const Calibration& cal = c.calibration;
  const bool per_user = NeedsPerUser(c, spec);
  std::vector<std::pair<int, int>> samples;
  std::optional<JointDistribution> p;
  if (spec.kind == InstanceKind::kFile) {
    absl::StatusOr<std::vector<std::pair<int, int>>> s =
        Prefix(std::get<std::vector<std::pair<int, int>>>(file), n);
    if (!s.ok()) return s.status();
    samples = *std::move(s);
  } else {
    absl::StatusOr<JointDistribution> d = JointInstance(c, spec, rng);
    if (!d.ok()) return d.status();
    p = *std::move(d);
    if (per_user) samples = SampleJoint(*p, n, rng);
  }
  switch (c.test) {
    case TestKind::kHrIndependence: {
      const int64_t n1 = FirstStageSize(c, n);
      if (!per_user) {
        return SimulateHrIndependence(*p, n, budget, c.gamma, n1, rng);
      }
      absl::StatusOr<PrivatizedBatch> b =
          EncodePairBatch(c.k, budget, samples, rng);
      if (!b.ok()) return b.status();
      return HrIndependenceTest(*b, c.gamma, n1, rng);
    }
    case TestKind::kRaptorIndependence: {
      if (!per_user) {
        return SimulateRaptorIndependence(*p, n, budget, c.gamma,
                                          cal.raptor_ind, rng);
      }
      const int64_t reps = cal.raptor_ind.repetitions;
      samples.resize(samples.size() / reps * reps);
      return RaptorIndependenceTest(samples, c.k, budget, c.gamma,
                                    cal.raptor_ind, rng);
    }
    default:
      return absl::InternalError("not an independence test");
  }
}

absl::StatusOr<Verdict> Execute(const ExperimentConfig& c,
                                const std::vector<InstanceSpec>& instances,
                                const std::vector<FileSamples>& files,
                                int64_t trial, int instance, int64_t n) {
  if (instance < 0 || instance >= static_cast<int>(instances.size())) {
    return absl::OutOfRangeError(absl::StrCat("no instance ", instance));
  }
  absl::StatusOr<PrivacyBudget> budget = PrivacyBudget::Create(c.epsilon);
  if (!budget.ok()) return budget.status();
  const uint64_t seed = DeriveSeed(c.seed, trial, instance);
  Rng rng(seed);
  absl::StatusOr<Verdict> v =
      IsIndependenceTest(c.test)
          ? RunBivariate(c, instances[instance], files[instance], *budget, n,
                         rng)
          : RunUnivariate(c, instances[instance], files[instance], *budget, n,
                          rng);
  if (!v.ok()) return v.status();
  v->seed = seed;
  return v;
}

struct Context {
  std::vector<InstanceSpec> instances;
  std::vector<FileSamples> files;
};

absl::StatusOr<Context> Prepare(const ExperimentConfig& config) {
  if (absl::Status s = config.Validate(); !s.ok()) return s;
  absl::StatusOr<std::vector<FileSamples>> files = LoadFiles(config);
  if (!files.ok()) return files.status();
  return Context{config.Instances(), *std::move(files)};
}

// Rates for every alternative at one n.
absl::StatusOr<std::vector<CurvePoint>> EvaluatePoint(
    const ExperimentConfig& c, const Context& ctx, int64_t n) {
  const int h = static_cast<int>(ctx.instances.size());
  const int64_t tasks = static_cast<int64_t>(c.trials) * h;
  std::vector<uint8_t> rejected(tasks, 0);
  std::vector<absl::Status> status(tasks);
  ParallelFor(tasks, c.threads, [&](int64_t i) {
    const int64_t trial = i / h;
    const int instance = static_cast<int>(i % h);
    absl::StatusOr<Verdict> v =
        Execute(c, ctx.instances, ctx.files, trial, instance, n);
    if (!v.ok()) {
      status[i] = v.status();
      return;
    }
    rejected[i] = IsRejection(v->decision) ? 1 : 0;
  });
  for (const absl::Status& s : status) {
    if (!s.ok()) return s;
  }
  std::vector<int64_t> errors(h, 0);
  for (int64_t i = 0; i < tasks; ++i) {
    const int instance = static_cast<int>(i % h);
    // Rejecting the null is a type-I error; accepting an alternative, II.
    errors[instance] += (instance == 0) == (rejected[i] == 1) ? 1 : 0;
  }
  std::vector<CurvePoint> points;
  const Rate type1 = WilsonRate(errors[0], c.trials);
  for (int a = 1; a < h; ++a) {
    points.push_back(
        {n, ctx.instances[a].Label(), type1, WilsonRate(errors[a], c.trials)});
  }
  return points;
}

bool MeetsTarget(const std::vector<CurvePoint>& points, double target) {
  return std::all_of(points.begin(), points.end(), [&](const CurvePoint& p) {
    return p.type1.rate <= target && p.type2.rate <= target;
  });
}

ExperimentReport NewReport(const ExperimentConfig& config) {
  ExperimentReport r;
  r.config = config;
  r.trial_seeds.resize(config.trials);
  for (int t = 0; t < config.trials; ++t) {
    r.trial_seeds[t] = DeriveSeed(config.seed, t);
  }
  return r;
}

double SecondsSince(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

nlohmann::json InstanceToJson(const InstanceSpec& s) {
  nlohmann::json j = {{"kind", InstanceKindName(s.kind)}};
  if (!s.theta.empty()) j["theta"] = s.theta;
  if (!s.path.empty()) j["path"] = s.path;
  return j;
}

absl::StatusOr<InstanceSpec> InstanceFromJson(const nlohmann::json& j) {
  InstanceSpec s;
  if (j.is_string()) {
    absl::StatusOr<InstanceKind> kind = ParseInstanceKind(j.get<std::string>());
    if (!kind.ok()) return kind.status();
    s.kind = *kind;
    return s;
  }
  absl::StatusOr<InstanceKind> kind =
      ParseInstanceKind(j.at("kind").get<std::string>());
  if (!kind.ok()) return kind.status();
  s.kind = *kind;
  s.theta = j.value("theta", std::vector<int>{});
  s.path = j.value("path", std::string());
  return s;
}

nlohmann::json RateToJson(const Rate& r) {
  return {{"errors", r.errors},
          {"trials", r.trials},
          {"rate", r.rate},
          {"lo", r.lo},
          {"hi", r.hi}};
}

Rate RateFromJson(const nlohmann::json& j) {
  return {j.at("errors").get<int64_t>(), j.at("trials").get<int64_t>(),
          j.at("rate").get<double>(), j.at("lo").get<double>(),
          j.at("hi").get<double>()};
}

}  // namespace

const char* InstanceKindName(InstanceKind kind) {
  switch (kind) {
    case InstanceKind::kUniform:
      return "uniform";
    case InstanceKind::kPaninski:
      return "paninski";
    case InstanceKind::kProductPaninski:
      return "product_paninski";
    case InstanceKind::kBalancedPaninskiJoint:
      return "balanced_paninski_joint";
    case InstanceKind::kFile:
      return "file";
  }
  return "unknown";
}

absl::StatusOr<InstanceKind> ParseInstanceKind(const std::string& name) {
  for (InstanceKind k :
       {InstanceKind::kUniform, InstanceKind::kPaninski,
        InstanceKind::kProductPaninski, InstanceKind::kBalancedPaninskiJoint,
        InstanceKind::kFile}) {
    if (name == InstanceKindName(k)) return k;
  }
  return absl::InvalidArgumentError(absl::StrCat("unknown instance ", name));
}

std::string InstanceSpec::Label() const {
  std::string label = InstanceKindName(kind);
  if (kind == InstanceKind::kFile) {
    absl::StrAppend(&label, ":", path);
  } else if (!theta.empty()) {
    absl::StrAppend(&label, "[", absl::StrJoin(theta, " "), "]");
  }
  return label;
}

std::vector<InstanceSpec> ExperimentConfig::Instances() const {
  std::vector<InstanceSpec> out = {null_instance};
  if (alternatives.empty()) {
    InstanceSpec alt;
    alt.kind = IsIndependenceTest(test) ? InstanceKind::kBalancedPaninskiJoint
                                        : InstanceKind::kPaninski;
    out.push_back(alt);
  } else {
    out.insert(out.end(), alternatives.begin(), alternatives.end());
  }
  return out;
}

std::vector<int64_t> ExperimentConfig::Grid() const {
  if (!n_grid.empty()) return n_grid;
  absl::StatusOr<PrivacyBudget> budget = PrivacyBudget::Create(epsilon);
  if (!budget.ok()) return {};
  return {CalibratedSampleSize(test, k, *budget, gamma, calibration)};
}

absl::Status ExperimentConfig::Validate() const {
  if (k < 2 || k % 2 != 0) {
    return absl::InvalidArgumentError("k must be even and >= 2");
  }
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    return absl::InvalidArgumentError("epsilon must be positive");
  }
  if (!(gamma > 0.0 && gamma <= 0.5)) {
    return absl::InvalidArgumentError("gamma must lie in (0, 1/2]");
  }
  if (trials < 1) return absl::InvalidArgumentError("trials must be >= 1");
  if (!(target_error > 0.0 && target_error < 0.5)) {
    return absl::InvalidArgumentError("target error must lie in (0, 1/2)");
  }
  for (size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] < 1 || (i > 0 && n_grid[i] <= n_grid[i - 1])) {
      return absl::InvalidArgumentError(
          "n grid must be positive and strictly increasing");
    }
  }
  const bool joint = IsIndependenceTest(test);
  const std::vector<InstanceSpec> all = Instances();
  for (size_t i = 0; i < all.size(); ++i) {
    const InstanceSpec& s = all[i];
    const bool null = i == 0;
    bool allowed = s.kind == InstanceKind::kFile;
    if (joint) {
      allowed |= null ? (s.kind == InstanceKind::kUniform ||
                         s.kind == InstanceKind::kProductPaninski)
                      : s.kind == InstanceKind::kBalancedPaninskiJoint;
    } else {
      allowed |= null ? s.kind == InstanceKind::kUniform
                      : s.kind == InstanceKind::kPaninski;
    }
    if (!allowed) {
      return absl::InvalidArgumentError(absl::StrCat(
          "instance ", s.Label(), " cannot serve as ",
          null ? "the null" : "an alternative", " for ", TestKindName(test)));
    }
    if (s.kind == InstanceKind::kFile && s.path.empty()) {
      return absl::InvalidArgumentError("file instance needs a path");
    }
    if (!s.theta.empty()) {
      if (s.theta.size() != static_cast<size_t>(k / 2)) {
        return absl::InvalidArgumentError("theta needs k/2 signs");
      }
      for (int t : s.theta) {
        if (t != 1 && t != -1) {
          return absl::InvalidArgumentError("theta entries must be +1 or -1");
        }
      }
    }
  }
  return absl::OkStatus();
}

nlohmann::json ConfigToJson(const ExperimentConfig& c) {
  nlohmann::json alts = nlohmann::json::array();
  for (const InstanceSpec& s : c.alternatives) alts.push_back(InstanceToJson(s));
  return {{"test", TestKindName(c.test)},
          {"k", c.k},
          {"epsilon", c.epsilon},
          {"gamma", c.gamma},
          {"null_instance", InstanceToJson(c.null_instance)},
          {"alternatives", alts},
          {"n_grid", c.n_grid},
          {"trials", c.trials},
          {"target_error", c.target_error},
          {"seed", c.seed},
          {"calibration", CalibrationToJson(c.calibration)},
          {"per_user", c.per_user}};
}

absl::StatusOr<ExperimentConfig> ConfigFromJson(const nlohmann::json& j) {
  if (!j.is_object()) {
    return absl::InvalidArgumentError("config must be a JSON object");
  }
  ExperimentConfig c;
  try {
    if (j.contains("test")) {
      absl::StatusOr<TestKind> t = ParseTestKind(j.at("test").get<std::string>());
      if (!t.ok()) return t.status();
      c.test = *t;
    }
    c.k = j.value("k", c.k);
    c.epsilon = j.value("epsilon", c.epsilon);
    c.gamma = j.value("gamma", c.gamma);
    if (j.contains("null_instance")) {
      absl::StatusOr<InstanceSpec> s = InstanceFromJson(j.at("null_instance"));
      if (!s.ok()) return s.status();
      c.null_instance = *std::move(s);
    }
    if (j.contains("alternatives")) {
      for (const nlohmann::json& a : j.at("alternatives")) {
        absl::StatusOr<InstanceSpec> s = InstanceFromJson(a);
        if (!s.ok()) return s.status();
        c.alternatives.push_back(*std::move(s));
      }
    }
    c.n_grid = j.value("n_grid", c.n_grid);
    c.trials = j.value("trials", c.trials);
    c.target_error = j.value("target_error", c.target_error);
    c.seed = j.value("seed", c.seed);
    if (j.contains("calibration")) {
      absl::StatusOr<Calibration> cal = CalibrationFromJson(j.at("calibration"));
      if (!cal.ok()) return cal.status();
      c.calibration = *cal;
    }
    c.per_user = j.value("per_user", c.per_user);
    c.threads = j.value("threads", c.threads);
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed config: ", e.what()));
  }
  if (absl::Status s = c.Validate(); !s.ok()) return s;
  return c;
}

absl::StatusOr<Verdict> RunTrial(const ExperimentConfig& config, int64_t trial,
                                 int instance, int64_t n) {
  absl::StatusOr<Context> ctx = Prepare(config);
  if (!ctx.ok()) return ctx.status();
  if (n <= 0) {
    const std::vector<int64_t> grid = config.Grid();
    if (grid.empty()) return absl::InvalidArgumentError("empty n grid");
    n = grid.front();
  }
  return Execute(config, ctx->instances, ctx->files, trial, instance, n);
}

Rate WilsonRate(int64_t errors, int64_t trials) {
  Rate r;
  r.errors = errors;
  r.trials = trials;
  if (trials <= 0) return r;
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(errors) / n;
  const double z2 = kWilsonZ * kWilsonZ;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half =
      kWilsonZ * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  r.rate = p;
  r.lo = std::min(p, std::max(0.0, center - half));
  r.hi = std::max(p, std::min(1.0, center + half));
  return r;
}

absl::StatusOr<ExperimentReport> ErrorRates(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  absl::StatusOr<Context> ctx = Prepare(config);
  if (!ctx.ok()) return ctx.status();
  ExperimentReport r = NewReport(config);
  r.saturated = true;
  for (int64_t n : config.Grid()) {
    absl::StatusOr<std::vector<CurvePoint>> pts = EvaluatePoint(config, *ctx, n);
    if (!pts.ok()) return pts.status();
    if (r.saturated && MeetsTarget(*pts, config.target_error)) {
      r.saturated = false;
      r.minimal_n = n;
    }
    r.points.insert(r.points.end(), pts->begin(), pts->end());
  }
  r.wall_clock_seconds = SecondsSince(start);
  return r;
}

absl::StatusOr<ExperimentReport> SampleComplexityCurve(
    const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  absl::StatusOr<Context> ctx = Prepare(config);
  if (!ctx.ok()) return ctx.status();
  const std::vector<int64_t> grid = config.Grid();
  ExperimentReport r = NewReport(config);
  std::vector<std::optional<std::vector<CurvePoint>>> seen(grid.size());
  auto eval = [&](size_t i) -> absl::StatusOr<bool> {
    if (!seen[i]) {
      absl::StatusOr<std::vector<CurvePoint>> pts =
          EvaluatePoint(config, *ctx, grid[i]);
      if (!pts.ok()) return pts.status();
      seen[i] = *std::move(pts);
    }
    return MeetsTarget(*seen[i], config.target_error);
  };
  size_t lo = 0;
  size_t hi = grid.size() - 1;
  absl::StatusOr<bool> top = eval(hi);
  if (!top.ok()) return top.status();
  r.saturated = !*top;
  if (*top) {
    while (lo < hi) {
      const size_t mid = lo + (hi - lo) / 2;
      absl::StatusOr<bool> ok = eval(mid);
      if (!ok.ok()) return ok.status();
      if (*ok) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
    r.minimal_n = grid[hi];
  }
  for (const auto& pts : seen) {
    if (pts) r.points.insert(r.points.end(), pts->begin(), pts->end());
  }
  r.wall_clock_seconds = SecondsSince(start);
  return r;
}

nlohmann::json ReportToJson(const ExperimentReport& r) {
  nlohmann::json points = nlohmann::json::array();
  for (const CurvePoint& p : r.points) {
    points.push_back({{"n", p.n},
                      {"alternative", p.alternative},
                      {"type1", RateToJson(p.type1)},
                      {"type2", RateToJson(p.type2)}});
  }
  return {{"config", ConfigToJson(r.config)},
          {"points", points},
          {"minimal_n", r.minimal_n},
          {"saturated", r.saturated},
          {"trial_seeds", r.trial_seeds},
          {"wall_clock_seconds", r.wall_clock_seconds}};
}

absl::StatusOr<ExperimentReport> ReportFromJson(const nlohmann::json& j) {
  ExperimentReport r;
  try {
    absl::StatusOr<ExperimentConfig> c = ConfigFromJson(j.at("config"));
    if (!c.ok()) return c.status();
    r.config = *std::move(c);
    for (const nlohmann::json& p : j.at("points")) {
      r.points.push_back({p.at("n").get<int64_t>(),
                          p.at("alternative").get<std::string>(),
                          RateFromJson(p.at("type1")),
                          RateFromJson(p.at("type2"))});
    }
    r.minimal_n = j.at("minimal_n").get<int64_t>();
    r.saturated = j.at("saturated").get<bool>();
    r.trial_seeds = j.at("trial_seeds").get<std::vector<uint64_t>>();
    r.wall_clock_seconds = j.value("wall_clock_seconds", 0.0);
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed report: ", e.what()));
  }
  return r;
}

absl::StatusOr<ReportFormat> ParseReportFormat(const std::string& name) {
  if (name == "csv") return ReportFormat::kCsv;
  if (name == "json") return ReportFormat::kJson;
  return absl::InvalidArgumentError(absl::StrCat("unknown format ", name));
}

std::string EmitReport(const ExperimentReport& r, ReportFormat format) {
  if (format == ReportFormat::kJson) return ReportToJson(r).dump(2) + "\n";
  std::string out =
      "test,k,epsilon,gamma,n,trials,type1,type1_lo,type1_hi,type2,type2_lo,"
      "type2_hi,seed\n";
  const ExperimentConfig& c = r.config;
  for (const CurvePoint& p : r.points) {
    absl::StrAppend(&out, TestKindName(c.test), ",", c.k, ",", c.epsilon, ",",
                    c.gamma, ",", p.n, ",", p.type1.trials, ",", p.type1.rate,
                    ",", p.type1.lo, ",", p.type1.hi, ",", p.type2.rate, ",",
                    p.type2.lo, ",", p.type2.hi, ",", c.seed, "\n");
  }
  return out;
}

void ParallelFor(int64_t count, int threads,
                 const std::function<void(int64_t)>& fn) {
  if (count <= 0) return;
  int workers = threads > 0
                    ? threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  workers = static_cast<int>(std::clamp<int64_t>(workers, 1, count));
  if (workers == 1) {
    for (int64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int64_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int64_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
        fn(i);
      }
    });
  }
  for (std::thread& t : pool) t.join();
}

}  // namespace ldptest
