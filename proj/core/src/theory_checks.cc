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

#include "ldptest/theory_checks.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "ldptest/hadamard.h"

namespace ldptest {
namespace {

constexpr int kMaxExactSubsetK = 16;
constexpr int kMaxExactPairK = 8;
constexpr int64_t kMaxRapporOutcomes = int64_t{1} << 24;
constexpr double kExactTolerance = 1e-10;
constexpr double kAlpha = 1.0 / 477.0;

// Every k-bit mask with k/2 bits set, in increasing order.
std::vector<uint32_t> HalfWeightMasks(int k) {
  std::vector<uint32_t> masks;
  const int h = k / 2;
  if (h == 0) return {0};
  uint32_t m = (1u << h) - 1;
  const uint32_t limit = 1u << k;
  while (m < limit) {
    masks.push_back(m);
    const uint32_t c = m & -m;
    const uint32_t r = m + c;
    m = (((r ^ m) >> 2) / c) | r;
  }
  return masks;
}

// Random half-weight indicator vector.
std::vector<uint8_t> DrawIndicator(int k, Rng& rng) {
  std::vector<uint8_t> x(k, 0);
  std::vector<int> perm(k);
  for (int i = 0; i < k; ++i) perm[i] = i;
  for (int i = 0; i < k / 2; ++i) {
    const int j = i + static_cast<int>(UniformIndex(rng, k - i));
    std::swap(perm[i], perm[j]);
    x[perm[i]] = 1;
  }
  return x;
}

ClaimCheck Equal(std::string name, double observed, double reference,
                 double tol) {
  return {std::move(name), observed, reference,
          std::abs(observed - reference) <= tol};
}

ClaimCheck AtMost(std::string name, double observed, double bound,
                  double slack = 0.0) {
  return {std::move(name), observed, bound, observed <= bound + slack};
}

ClaimCheck AtLeast(std::string name, double observed, double bound,
                   double slack = 0.0) {
  return {std::move(name), observed, bound, observed >= bound - slack};
}

struct Summary {
  double m2 = 0.0;
  double m4 = 0.0;
  // Standard errors of the two means, zero for exact enumeration.
  double se2 = 0.0;
  double se4 = 0.0;
};

Summary Summarize(std::span<const double> z, bool exact) {
  Summary s;
  double m8 = 0.0;
  for (double v : z) {
    const double v2 = v * v;
    s.m2 += v2;
    s.m4 += v2 * v2;
    m8 += v2 * v2 * v2 * v2;
  }
  const double n = static_cast<double>(z.size());
  s.m2 /= n;
  s.m4 /= n;
  m8 /= n;
  if (!exact) {
    s.se2 = std::sqrt(std::max(0.0, s.m4 - s.m2 * s.m2) / n);
    s.se4 = std::sqrt(std::max(0.0, m8 - s.m4 * s.m4) / n);
  }
  return s;
}

void FillProfile(std::span<const double> z, std::span<const double> thresholds,
                 MomentReport& r) {
  std::vector<double> a(z.size());
  for (size_t i = 0; i < z.size(); ++i) a[i] = std::abs(z[i]);
  std::sort(a.begin(), a.end());
  const double n = static_cast<double>(a.size());
  for (double t : thresholds) {
    const double cut = t * (1.0 + 1e-9) + 1e-12;
    const auto it = std::upper_bound(a.begin(), a.end(), cut);
    r.exceedance.emplace_back(t, static_cast<double>(a.end() - it) / n);
  }
  for (double q : {0.25, 0.5, 0.75}) {
    const size_t idx = static_cast<size_t>(std::ceil(q * n - 1e-9));
    r.abs_quantiles.emplace_back(q, a[std::max<size_t>(idx, 1) - 1]);
  }
}

absl::StatusOr<std::vector<double>> SubsetValues(std::span<const double> delta,
                                                 Rng* rng, int64_t mc_draws,
                                                 bool& exact) {
  const int k = static_cast<int>(delta.size());
  std::vector<double> z;
  exact = k <= kMaxExactSubsetK;
  if (exact) {
    for (uint32_t m : HalfWeightMasks(k)) {
      double s = 0.0;
      for (int i = 0; i < k; ++i) {
        if (m >> i & 1u) s += delta[i];
      }
      z.push_back(s);
    }
    return z;
  }
  if (rng == nullptr) {
    return absl::InvalidArgumentError(
        "k above the enumeration limit needs a random stream");
  }
  z.reserve(mc_draws);
  for (int64_t d = 0; d < mc_draws; ++d) {
    const std::vector<uint8_t> x = DrawIndicator(k, *rng);
    double s = 0.0;
    for (int i = 0; i < k; ++i) s += x[i] ? delta[i] : 0.0;
    z.push_back(s);
  }
  return z;
}

absl::StatusOr<std::vector<double>> PairValues(int k,
                                               std::span<const double> delta,
                                               Rng* rng, int64_t mc_draws,
                                               bool& exact) {
  std::vector<double> z;
  exact = k <= kMaxExactPairK;
  auto row_weights = [&](const std::vector<uint8_t>& x) {
    std::vector<double> r(k, 0.0);
    for (int i = 0; i < k; ++i) {
      if (!x[i]) continue;
      for (int j = 0; j < k; ++j) r[j] += delta[i * k + j];
    }
    return r;
  };
  if (exact) {
    std::vector<std::vector<uint8_t>> subsets;
    for (uint32_t m : HalfWeightMasks(k)) {
      std::vector<uint8_t> x(k);
      for (int i = 0; i < k; ++i) x[i] = m >> i & 1u;
      subsets.push_back(std::move(x));
    }
    for (const auto& x : subsets) {
      const std::vector<double> r = row_weights(x);
      for (const auto& y : subsets) {
        double s = 0.0;
        for (int j = 0; j < k; ++j) s += y[j] ? r[j] : 0.0;
        z.push_back(s);
      }
    }
    return z;
  }
  if (rng == nullptr) {
    return absl::InvalidArgumentError(
        "k above the enumeration limit needs a random stream");
  }
  z.reserve(mc_draws);
  for (int64_t d = 0; d < mc_draws; ++d) {
    const std::vector<double> r = row_weights(DrawIndicator(k, *rng));
    const std::vector<uint8_t> y = DrawIndicator(k, *rng);
    double s = 0.0;
    for (int j = 0; j < k; ++j) s += y[j] ? r[j] : 0.0;
    z.push_back(s);
  }
  return z;
}

absl::Status CheckEvenK(int k) {
  if (k < 2 || k % 2 != 0) {
    return absl::InvalidArgumentError("alphabet must be even");
  }
  return absl::OkStatus();
}

}  // namespace

bool MomentReport::AllPassed() const {
  return std::all_of(claims.begin(), claims.end(),
                     [](const ClaimCheck& c) { return c.passed; });
}

bool LbMatrix::AllPassed() const {
  return std::all_of(claims.begin(), claims.end(),
                     [](const ClaimCheck& c) { return c.passed; });
}

nlohmann::json MomentReportToJson(const MomentReport& r) {
  nlohmann::json claims = nlohmann::json::array();
  for (const ClaimCheck& c : r.claims) {
    claims.push_back({{"name", c.name},
                      {"observed", c.observed},
                      {"reference", c.reference},
                      {"passed", c.passed}});
  }
  nlohmann::json exceed = nlohmann::json::array();
  for (const auto& [t, p] : r.exceedance) {
    exceed.push_back({{"threshold", t}, {"probability", p}});
  }
  nlohmann::json quant = nlohmann::json::array();
  for (const auto& [q, v] : r.abs_quantiles) {
    quant.push_back({{"q", q}, {"value", v}});
  }
  return {{"name", r.name},
          {"exact", r.exact},
          {"outcomes", r.outcomes},
          {"e_z2", r.e_z2},
          {"e_z4", r.e_z4},
          {"predicted_e_z2", r.predicted_e_z2},
          {"band_fraction", r.band_fraction},
          {"exceedance", exceed},
          {"abs_quantiles", quant},
          {"claims", claims},
          {"passed", r.AllPassed()}};
}

absl::StatusOr<MomentReport> SubsetZMoments(std::span<const double> delta,
                                            std::span<const double> thresholds,
                                            Rng* rng, int64_t mc_draws) {
  const int k = static_cast<int>(delta.size());
  if (absl::Status s = CheckEvenK(k); !s.ok()) return s;
  double sum = 0.0;
  double norm2 = 0.0;
  double scale = 0.0;
  for (double d : delta) {
    sum += d;
    norm2 += d * d;
    scale = std::max(scale, std::abs(d));
  }
  if (std::abs(sum) > 1e-12 * std::max(1.0, scale * k)) {
    return absl::InvalidArgumentError("perturbation must sum to zero");
  }
  bool exact = true;
  absl::StatusOr<std::vector<double>> z =
      SubsetValues(delta, rng, mc_draws, exact);
  if (!z.ok()) return z.status();

  MomentReport r;
  r.name = "subset_z_moments";
  r.exact = exact;
  r.outcomes = static_cast<int64_t>(z->size());
  const Summary s = Summarize(*z, exact);
  r.e_z2 = s.m2;
  r.e_z4 = s.m4;
  const double c = k / (4.0 * (k - 1));
  r.predicted_e_z2 = c * norm2;
  FillProfile(*z, thresholds, r);

  const double tol2 =
      exact ? kExactTolerance * std::max(1.0, r.predicted_e_z2) : 5 * s.se2;
  r.claims.push_back(Equal("second_moment", r.e_z2, r.predicted_e_z2, tol2));
  r.claims.push_back(AtMost("fourth_moment_bound", r.e_z4,
                            19.0 * 0.5 * norm2 * norm2,
                            exact ? kExactTolerance : 5 * s.se4));
  if (norm2 > 0.0) {
    const double lo = c - std::sqrt(38.0 * kAlpha / (1.0 - 2.0 * kAlpha) * 0.5);
    const double hi = c / (1.0 - 2.0 * kAlpha);
    int64_t inside = 0;
    int64_t above = 0;
    for (double v : *z) {
      const double ratio = v * v / norm2;
      inside += (ratio >= lo && ratio <= hi) ? 1 : 0;
      above += ratio >= lo * (1.0 - 1e-12) ? 1 : 0;
    }
    r.band_fraction = static_cast<double>(inside) / z->size();
    // Paley-Zygmund with the fourth-moment bound.
    r.claims.push_back(AtLeast("lower_tail",
                               static_cast<double>(above) / z->size(),
                               2.0 * kAlpha));
  }
  return r;
}

absl::StatusOr<MomentReport> SubsetExceedance(const Distribution& p,
                                              double gamma) {
  const int k = p.k();
  if (k > kMaxExactSubsetK) {
    return absl::InvalidArgumentError(
        absl::StrCat("exact exceedance needs k <= ", kMaxExactSubsetK));
  }
  std::vector<double> delta(k);
  for (int i = 0; i < k; ++i) delta[i] = p[i] - 1.0 / k;
  const double t = gamma / std::sqrt(5.0 * k);
  absl::StatusOr<MomentReport> r = SubsetZMoments(delta, {&t, 1});
  if (!r.ok()) return r.status();
  r->name = "subset_exceedance";
  r->claims.push_back(
      {"exceedance_above_1_477", r->exceedance[0].second, kAlpha,
       r->exceedance[0].second > kAlpha});
  return r;
}

absl::StatusOr<MomentReport> JointZMoments(int k,
                                           std::span<const double> delta,
                                           std::span<const double> thresholds,
                                           Rng* rng, int64_t mc_draws) {
  if (absl::Status s = CheckEvenK(k); !s.ok()) return s;
  if (delta.size() != static_cast<size_t>(k) * k) {
    return absl::InvalidArgumentError("perturbation must be k x k");
  }
  double norm2 = 0.0;
  double scale = 0.0;
  for (double d : delta) {
    norm2 += d * d;
    scale = std::max(scale, std::abs(d));
  }
  const double tol = 1e-12 * std::max(1.0, scale * k);
  for (int i = 0; i < k; ++i) {
    double row = 0.0;
    double col = 0.0;
    for (int j = 0; j < k; ++j) {
      row += delta[i * k + j];
      col += delta[j * k + i];
    }
    if (std::abs(row) > tol || std::abs(col) > tol) {
      return absl::InvalidArgumentError(
          "perturbation rows and columns must sum to zero");
    }
  }
  bool exact = true;
  absl::StatusOr<std::vector<double>> z =
      PairValues(k, delta, rng, mc_draws, exact);
  if (!z.ok()) return z.status();

  MomentReport r;
  r.name = "joint_z_moments";
  r.exact = exact;
  r.outcomes = static_cast<int64_t>(z->size());
  const Summary s = Summarize(*z, exact);
  r.e_z2 = s.m2;
  r.e_z4 = s.m4;
  const double c = k / (4.0 * (k - 1));
  r.predicted_e_z2 = c * c * norm2;
  FillProfile(*z, thresholds, r);
  const double slack = exact ? kExactTolerance * std::max(1.0, norm2)
                             : 5 * s.se2;
  r.claims.push_back(Equal("second_moment", r.e_z2, r.predicted_e_z2, slack));
  r.claims.push_back(AtLeast("bracket_lower", r.e_z2, norm2 / 16.0, slack));
  r.claims.push_back(AtMost("bracket_upper", r.e_z2, norm2 / 4.0, slack));
  return r;
}

absl::StatusOr<MomentReport> JointPerturbationProfile(
    const JointDistribution& p, double gamma,
    std::span<const double> thresholds, Rng* rng, int64_t mc_draws) {
  if (!(gamma > 0.0)) return absl::InvalidArgumentError("gamma must be > 0");
  const int k = p.k();
  if (absl::Status s = CheckEvenK(k); !s.ok()) return s;
  auto [p1, p2] = Marginals(p);
  std::vector<double> delta(static_cast<size_t>(k) * k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      delta[i * k + j] = (p.at(i, j) - p1[i] * p2[j]) * k / gamma;
    }
  }
  bool exact = true;
  absl::StatusOr<std::vector<double>> z =
      PairValues(k, delta, rng, mc_draws, exact);
  if (!z.ok()) return z.status();
  MomentReport r;
  r.name = "joint_perturbation_profile";
  r.exact = exact;
  r.outcomes = static_cast<int64_t>(z->size());
  const Summary s = Summarize(*z, exact);
  r.e_z2 = s.m2;
  r.e_z4 = s.m4;
  FillProfile(*z, thresholds, r);
  return r;
}

absl::StatusOr<MomentReport> RapporTMomentCheck(int n,
                                                const PrivacyBudget& budget,
                                                const Distribution& p) {
  const int k = p.k();
  if (n < 2) return absl::InvalidArgumentError("need n >= 2");
  if (k < 1 || k > 24 ||
      static_cast<double>(k) * n > std::log2(kMaxRapporOutcomes)) {
    return absl::InvalidArgumentError(
        "outcome space (2^k)^n exceeds the enumeration limit 2^24");
  }
  const int msgs = 1 << k;
  const double alpha = budget.alpha_rappor();
  const double beta = budget.beta_rappor();
  const double lambda = alpha / k + beta;
  const int m = n - 1;

  std::vector<double> pm(msgs, 0.0);
  for (int b = 0; b < msgs; ++b) {
    for (int x = 0; x < k; ++x) {
      const int flips = __builtin_popcount(static_cast<unsigned>(b ^ (1 << x)));
      pm[b] += p[x] * std::pow(beta, flips) * std::pow(1.0 - beta, k - flips);
    }
  }

  double et = 0.0;
  double et2 = 0.0;
  const size_t kk = static_cast<size_t>(k) * k;
  std::vector<double> e11(kk, 0.0), e21(kk, 0.0), e22(kk, 0.0), eff(kk, 0.0);
  std::vector<double> ef(k, 0.0);
  std::vector<int> tuple(n, 0);
  std::vector<int> counts(k);
  std::vector<double> f(k);
  int64_t outcomes = 0;
  for (bool more = true; more; ++outcomes) {
    double prob = 1.0;
    std::fill(counts.begin(), counts.end(), 0);
    for (int b : tuple) {
      prob *= pm[b];
      for (int x = 0; x < k; ++x) counts[x] += b >> x & 1;
    }
    double t = k * m * lambda * lambda;
    for (int x = 0; x < k; ++x) {
      const double d = counts[x] - m * lambda;
      t += d * d - counts[x];
      f[x] = d * d - counts[x] + m * lambda * lambda;
      ef[x] += prob * f[x];
    }
    et += prob * t;
    et2 += prob * t * t;
    for (int x = 0; x < k; ++x) {
      for (int y = 0; y < k; ++y) {
        const double nx = counts[x];
        const double ny = counts[y];
        e11[x * k + y] += prob * nx * ny;
        e21[x * k + y] += prob * nx * nx * ny;
        e22[x * k + y] += prob * nx * nx * ny * ny;
        eff[x * k + y] += prob * f[x] * f[y];
      }
    }
    more = false;
    for (int j = 0; j < n; ++j) {
      if (++tuple[j] < msgs) {
        more = true;
        break;
      }
      tuple[j] = 0;
    }
  }

  MomentReport r;
  r.name = "rappor_t_moments";
  r.outcomes = outcomes;
  double l2 = 0.0;
  for (int x = 0; x < k; ++x) l2 += (p[x] - 1.0 / k) * (p[x] - 1.0 / k);
  const double predicted = n * m * alpha * alpha * l2;
  const double var = et2 - et * et;
  r.e_z2 = et2;
  r.predicted_e_z2 = predicted;
  r.claims.push_back(Equal("expectation", et, predicted, kExactTolerance));
  r.claims.push_back(AtMost("variance_bound", var,
                            4.0 * k * n * n + 8.0 * n * et,
                            kExactTolerance));

  const double a2 = alpha * alpha;
  for (int x = 0; x < k; ++x) {
    const double lx = alpha * p[x] + beta;
    const double var_f = 2.0 * n * m * lx * lx * (1 - lx) * (1 - lx) +
                         4.0 * n * m * m * lx * (1 - lx) * (lambda - lx) *
                             (lambda - lx);
    r.claims.push_back(Equal(absl::StrCat("var_f[", x, "]"),
                             eff[x * k + x] - ef[x] * ef[x], var_f,
                             kExactTolerance));
    for (int y = 0; y < k; ++y) {
      if (x == y) continue;
      const double ly = alpha * p[y] + beta;
      const double pxy = p[x] * p[y];
      const std::string tag = absl::StrCat("[", x, ",", y, "]");
      const double c11 = n * n * lx * ly - n * a2 * pxy;
      const double c21 = n * n * lx * ly - (2 * m * lx + 1) * n * a2 * pxy +
                         m * n * n * lx * lx * ly;
      const double c12 = n * n * lx * ly - (2 * m * ly + 1) * n * a2 * pxy +
                         m * n * n * ly * ly * lx;
      const double c22 =
          m * m * n * n * lx * lx * ly * ly +
          m * n * n * (lx * lx * ly + lx * ly * ly) + n * n * lx * ly -
          4 * a2 * m * m * n * pxy * lx * ly -
          2 * a2 * m * n * (pxy * lx + pxy * ly) +
          2 * a2 * a2 * m * n * pxy * pxy - a2 * n * pxy;
      r.claims.push_back(
          Equal("cross_11" + tag, e11[x * k + y], c11, kExactTolerance));
      r.claims.push_back(
          Equal("cross_21" + tag, e21[x * k + y], c21, kExactTolerance));
      r.claims.push_back(
          Equal("cross_22" + tag, e22[x * k + y], c22, kExactTolerance));

      const double cov = eff[x * k + y] - ef[x] * ef[y];
      const double u = 1.0 / k;
      const double closed = 2 * a2 * a2 * n * m *
                            (pxy * pxy - 2.0 * m * pxy * (p[x] - u) *
                                             (p[y] - u));
      const double enx = n * lx;
      const double eny = n * ly;
      const double rr = 2 * m * lambda + 1;
      const double assembled =
          c22 - rr * (c21 + c12) -
          2 * m * m * lambda * (2 * lambda - ly) * enx * eny -
          2 * m * m * lambda * (2 * lambda - lx) * enx * eny +
          m * m * lx * (2 * lambda - lx) * eny * eny +
          m * m * ly * (2 * lambda - ly) * enx * enx + rr * rr * c11 +
          m * m * enx * eny * (2 * lambda - lx) * (2 * lambda - ly);
      r.claims.push_back(
          Equal("covariance_closed" + tag, cov, closed, kExactTolerance));
      r.claims.push_back(Equal("covariance_assembled" + tag, cov, assembled,
                               kExactTolerance));
    }
  }
  return r;
}

nlohmann::json LbMatrixToJson(const LbMatrix& m) {
  nlohmann::json claims = nlohmann::json::array();
  for (const ClaimCheck& c : m.claims) {
    claims.push_back({{"name", c.name},
                      {"observed", c.observed},
                      {"reference", c.reference},
                      {"passed", c.passed}});
  }
  return {{"mechanism", MechanismName(m.mechanism)},
          {"k", m.k},
          {"epsilon", m.epsilon},
          {"size", m.size},
          {"h", m.h},
          {"claims", claims},
          {"passed", m.AllPassed()}};
}

absl::StatusOr<LbMatrix> ComputeLbMatrix(MechanismKind mechanism, int k,
                                         const PrivacyBudget& budget) {
  if (absl::Status s = CheckEvenK(k); !s.ok()) return s;
  absl::StatusOr<ChannelMatrix> w = absl::InvalidArgumentError("unsupported");
  if (mechanism == MechanismKind::kRappor) {
    if (k > 10) {
      return absl::InvalidArgumentError("RAPPOR lower-bound matrix needs k <= 10");
    }
    w = RapporChannel(k, budget);
  } else if (mechanism == MechanismKind::kHr) {
    if (k > 256) {
      return absl::InvalidArgumentError("HR lower-bound matrix needs k <= 256");
    }
    absl::StatusOr<HadamardCode> code = HadamardCode::Create(k);
    if (!code.ok()) return code.status();
    w = HrChannel(*code, budget);
  } else {
    return absl::InvalidArgumentError(
        "lower-bound matrices are defined for rappor and hr");
  }
  if (!w.ok()) return w.status();

  LbMatrix lb;
  lb.mechanism = mechanism;
  lb.k = k;
  lb.epsilon = budget.epsilon();
  lb.size = k / 2;
  lb.h.assign(static_cast<size_t>(lb.size) * lb.size, 0.0);
  std::vector<double> d(lb.size);
  for (int z = 0; z < w->outputs(); ++z) {
    double total = 0.0;
    for (int x = 0; x < k; ++x) total += w->at(x, z);
    if (total <= 0.0) continue;
    for (int i = 0; i < lb.size; ++i) {
      d[i] = w->at(2 * i, z) - w->at(2 * i + 1, z);
    }
    for (int i = 0; i < lb.size; ++i) {
      for (int j = 0; j < lb.size; ++j) {
        lb.h[i * lb.size + j] += k * d[i] * d[j] / total;
      }
    }
  }

  double asym = 0.0;
  double off = 0.0;
  double dmin = lb.at(0, 0);
  double dmax = lb.at(0, 0);
  for (int i = 0; i < lb.size; ++i) {
    dmin = std::min(dmin, lb.at(i, i));
    dmax = std::max(dmax, lb.at(i, i));
    for (int j = 0; j < lb.size; ++j) {
      asym = std::max(asym, std::abs(lb.at(i, j) - lb.at(j, i)));
      if (i != j) off = std::max(off, std::abs(lb.at(i, j)));
    }
  }
  lb.claims.push_back(AtMost("symmetric", asym, 1e-12));
  lb.claims.push_back(AtMost("off_diagonal", off, kExactTolerance));
  if (mechanism == MechanismKind::kRappor) {
    const double e = std::exp(budget.epsilon());
    lb.claims.push_back(
        AtMost("diagonal_bound", dmax, (e * e - 1) * (e * e - 1) / e));
  } else {
    const double a = budget.alpha_hr();
    lb.claims.push_back(AtMost("diagonal_constant", dmax - dmin,
                               kExactTolerance));
    lb.claims.push_back(
        Equal("diagonal_value", dmax, 2.0 * a * a, kExactTolerance));
  }
  return lb;
}

}  // namespace ldptest

namespace ldptest {
namespace {

constexpr int kMaxReportedFailures = 5;

std::vector<double> RandomPmf(int k, Rng& rng) {
  std::vector<double> w(k);
  double total = 0.0;
  for (double& v : w) {
    v = -std::log(1.0 - UniformUnit(rng));
    total += v;
  }
  for (double& v : w) v /= total;
  return w;
}

std::vector<double> RandomZeroSum(int k, Rng& rng) {
  std::vector<double> d(k);
  double mean = 0.0;
  for (double& v : d) {
    v = 2.0 * UniformUnit(rng) - 1.0;
    mean += v / k;
  }
  for (double& v : d) v -= mean;
  return d;
}

// Random k x k matrix with zero row and column sums.
std::vector<double> RandomDoublyCentered(int k, Rng& rng) {
  std::vector<double> d(static_cast<size_t>(k) * k);
  for (double& v : d) v = 2.0 * UniformUnit(rng) - 1.0;
  std::vector<double> row(k, 0.0), col(k, 0.0);
  double all = 0.0;
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      row[i] += d[i * k + j] / k;
      col[j] += d[i * k + j] / k;
      all += d[i * k + j] / (static_cast<double>(k) * k);
    }
  }
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) d[i * k + j] += all - row[i] - col[j];
  }
  return d;
}

double RandomEpsilon(Rng& rng) { return 0.1 + 1.9 * UniformUnit(rng); }

class SectionRunner {
 public:
  explicit SectionRunner(std::string name)
      : start_(std::chrono::steady_clock::now()) {
    section_.name = std::move(name);
  }

  void Record(const std::vector<ClaimCheck>& claims, const std::string& label) {
    ++section_.cases;
    bool failed = false;
    for (const ClaimCheck& c : claims) {
      if (c.passed) continue;
      failed = true;
      if (section_.failed.size() < kMaxReportedFailures) {
        section_.failed.push_back({{"case", label},
                                   {"claim", c.name},
                                   {"observed", c.observed},
                                   {"reference", c.reference}});
      }
    }
    section_.failures += failed ? 1 : 0;
  }

  SuiteSection Finish() {
    section_.seconds = std::chrono::duration<double>(
                           std::chrono::steady_clock::now() - start_)
                           .count();
    return std::move(section_);
  }

 private:
  SuiteSection section_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

bool SuiteReport::AllPassed() const {
  return std::all_of(sections.begin(), sections.end(),
                     [](const SuiteSection& s) { return s.failures == 0; });
}

nlohmann::json SuiteReportToJson(const SuiteReport& r) {
  nlohmann::json sections = nlohmann::json::array();
  for (const SuiteSection& s : r.sections) {
    sections.push_back({{"name", s.name},
                        {"cases", s.cases},
                        {"failures", s.failures},
                        {"seconds", s.seconds},
                        {"failed", s.failed}});
  }
  return {{"sections", sections}, {"passed", r.AllPassed()}};
}

absl::StatusOr<SuiteReport> RunAppendixSuite(uint64_t seed) {
  SuiteReport report;
  Rng rng = MakeStream(seed, 0);

  {
    SectionRunner run("hr_parseval");
    for (int c = 0; c < 200; ++c) {
      const int k = 2 + static_cast<int>(UniformIndex(rng, 63));
      const PrivacyBudget budget = *PrivacyBudget::Create(RandomEpsilon(rng));
      const Distribution p = *Distribution::Create(RandomPmf(k, rng));
      absl::StatusOr<HadamardCode> code = HadamardCode::Create(k);
      if (!code.ok()) return code.status();
      absl::StatusOr<Distribution> q = PushforwardHr(*code, p, budget);
      if (!q.ok()) return q.status();
      const double lhs = *L2DistanceSq(*q, QStar(*code, budget));
      const double a = budget.alpha_hr();
      const double rhs =
          a * a / code->output_size() * *L2DistanceSq(p, Distribution::Uniform(k));
      run.Record({Equal("parseval", lhs, rhs, kExactTolerance)},
                 absl::StrCat("k=", k, " eps=", budget.epsilon()));
    }
    report.sections.push_back(run.Finish());
  }

  {
    SectionRunner run("pair_parseval");
    const int k = 4;
    absl::StatusOr<HadamardCode> code = HadamardCode::Create(k);
    if (!code.ok()) return code.status();
    const double K = code->output_size();
    for (int c = 0; c < 100; ++c) {
      const PrivacyBudget budget = *PrivacyBudget::Create(RandomEpsilon(rng));
      const JointDistribution p =
          *JointDistribution::Create(k, RandomPmf(k * k, rng));
      const JointDistribution q =
          *JointDistribution::Create(k, RandomPmf(k * k, rng));
      absl::StatusOr<JointDistribution> tp = PushforwardT(*code, p, budget);
      if (!tp.ok()) return tp.status();
      absl::StatusOr<JointDistribution> tq = PushforwardT(*code, q, budget);
      if (!tq.ok()) return tq.status();
      double lhs = 0.0;
      double joint = 0.0;
      for (size_t i = 0; i < tp->pmf().size(); ++i) {
        lhs += (tp->pmf()[i] - tq->pmf()[i]) * (tp->pmf()[i] - tq->pmf()[i]);
      }
      for (size_t i = 0; i < p.pmf().size(); ++i) {
        joint += (p.pmf()[i] - q.pmf()[i]) * (p.pmf()[i] - q.pmf()[i]);
      }
      const auto [p1, p2] = Marginals(p);
      const auto [q1, q2] = Marginals(q);
      const double a2 = budget.alpha_hr() * budget.alpha_hr();
      const double rhs = a2 * a2 / (K * K) * joint +
                         a2 / (K * K) * (*L2DistanceSq(p1, q1) +
                                         *L2DistanceSq(p2, q2));
      run.Record({Equal("three_term", lhs, rhs, kExactTolerance)},
                 absl::StrCat("eps=", budget.epsilon()));
    }
    report.sections.push_back(run.Finish());
  }

  {
    SectionRunner run("rappor_t_moments");
    for (int k = 1; k <= 3; ++k) {
      for (int n = 2; n <= 3; ++n) {
        for (double eps : {0.5, 1.0}) {
          for (int rep = 0; rep < 3; ++rep) {
            const Distribution p =
                rep == 0 ? Distribution::Uniform(k)
                         : *Distribution::Create(RandomPmf(k, rng));
            absl::StatusOr<MomentReport> r =
                RapporTMomentCheck(n, *PrivacyBudget::Create(eps), p);
            if (!r.ok()) return r.status();
            run.Record(r->claims,
                       absl::StrCat("k=", k, " n=", n, " eps=", eps));
          }
        }
      }
    }
    report.sections.push_back(run.Finish());
  }

  {
    SectionRunner run("subset_moments");
    for (int c = 0; c < 50; ++c) {
      const int k = 2 * (1 + static_cast<int>(UniformIndex(rng, 6)));
      absl::StatusOr<MomentReport> r = SubsetZMoments(RandomZeroSum(k, rng));
      if (!r.ok()) return r.status();
      run.Record(r->claims, absl::StrCat("k=", k));
    }
    report.sections.push_back(run.Finish());
  }

  {
    SectionRunner run("subset_exceedance");
    const int k = 10;
    for (int c = 0; c < 20; ++c) {
      const double gamma = 0.3 + 0.1 * (c % 3);
      std::vector<int> theta(k / 2);
      for (int& t : theta) t = Bernoulli(rng, 0.5) ? 1 : -1;
      absl::StatusOr<Distribution> p = Paninski(k, gamma, theta);
      if (!p.ok()) return p.status();
      absl::StatusOr<MomentReport> r = SubsetExceedance(*p, gamma);
      if (!r.ok()) return r.status();
      run.Record(r->claims, absl::StrCat("gamma=", gamma));
    }
    report.sections.push_back(run.Finish());
  }

  {
    SectionRunner run("joint_moments");
    for (int k : {4, 6, 8}) {
      for (int c = 0; c < 5; ++c) {
        absl::StatusOr<MomentReport> r =
            JointZMoments(k, RandomDoublyCentered(k, rng));
        if (!r.ok()) return r.status();
        run.Record(r->claims, absl::StrCat("k=", k));
      }
    }
    report.sections.push_back(run.Finish());
  }

  {
    SectionRunner run("lb_matrix");
    for (double eps : {0.25, 0.5, 1.0}) {
      const PrivacyBudget budget = *PrivacyBudget::Create(eps);
      for (int k : {4, 8}) {
        absl::StatusOr<LbMatrix> m =
            ComputeLbMatrix(MechanismKind::kRappor, k, budget);
        if (!m.ok()) return m.status();
        run.Record(m->claims, absl::StrCat("rappor k=", k, " eps=", eps));
      }
      for (int k : {4, 16, 64}) {
        absl::StatusOr<LbMatrix> m =
            ComputeLbMatrix(MechanismKind::kHr, k, budget);
        if (!m.ok()) return m.status();
        run.Record(m->claims, absl::StrCat("hr k=", k, " eps=", eps));
      }
    }
    report.sections.push_back(run.Finish());
  }
  return report;
}

}  // namespace ldptest
