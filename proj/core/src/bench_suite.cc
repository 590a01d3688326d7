// Copyright 2026 The LLaMEA-cpp Authors
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

#include "llamea/bench_suite.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "llamea/errors.h"
#include "llamea/rng.h"

namespace llamea {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kShiftBound = 4.0;
// argmin of -z sin(sqrt|z|) on [-500, 500].
constexpr double kSchwefelArgmin = 420.968746359982025;

struct FunctionInfo {
  std::string_view name;
  FunctionGroup group;
};

constexpr std::array<FunctionInfo, kNumFunctions> kFunctions = {{
    {"Sphere Function", FunctionGroup::kSeparable},
    {"Separable Ellipsoidal Function", FunctionGroup::kSeparable},
    {"Rastrigin Function", FunctionGroup::kSeparable},
    {"Buche-Rastrigin Function", FunctionGroup::kSeparable},
    {"Linear Slope", FunctionGroup::kSeparable},
    {"Attractive Sector Function", FunctionGroup::kLowModerateConditioning},
    {"Step Ellipsoidal Function", FunctionGroup::kLowModerateConditioning},
    {"Rosenbrock Function, original", FunctionGroup::kLowModerateConditioning},
    {"Rosenbrock Function, rotated", FunctionGroup::kLowModerateConditioning},
    {"Ellipsoidal Function", FunctionGroup::kHighConditioningUnimodal},
    {"Discus Function", FunctionGroup::kHighConditioningUnimodal},
    {"Bent Cigar Function", FunctionGroup::kHighConditioningUnimodal},
    {"Sharp Ridge Function", FunctionGroup::kHighConditioningUnimodal},
    {"Different Powers Function", FunctionGroup::kHighConditioningUnimodal},
    {"Rastrigin Function", FunctionGroup::kMultimodalStrongStructure},
    {"Weierstrass Function", FunctionGroup::kMultimodalStrongStructure},
    {"Schaffer's F7 Function", FunctionGroup::kMultimodalStrongStructure},
    {"Schaffer's F7 Function, moderately ill-conditioned",
     FunctionGroup::kMultimodalStrongStructure},
    {"Composite Griewank-Rosenbrock Function F8F2",
     FunctionGroup::kMultimodalStrongStructure},
    {"Schwefel Function", FunctionGroup::kMultimodalWeakStructure},
    {"Gallagher's Gaussian 101-me Peaks Function",
     FunctionGroup::kMultimodalWeakStructure},
    {"Gallagher's Gaussian 21-hi Peaks Function",
     FunctionGroup::kMultimodalWeakStructure},
    {"Katsuura Function", FunctionGroup::kMultimodalWeakStructure},
    {"Lunacek bi-Rastrigin Function", FunctionGroup::kMultimodalWeakStructure},
}};

// Position of coordinate i on [0, 1] for conditioning exponents.
double Ratio(int i, int d) {
  return d > 1 ? static_cast<double>(i) / (d - 1) : 0.0;
}

double Sign(double v) { return v < 0.0 ? -1.0 : 1.0; }

// Modified Gram-Schmidt applied twice over the rows of a Gaussian matrix.
SquareMatrix RandomRotation(int d, Rng& rng) {
  SquareMatrix m;
  m.n = d;
  m.data.resize(static_cast<size_t>(d) * d);
  for (double& v : m.data) v = rng.Normal();
  for (int pass = 0; pass < 2; ++pass) {
    for (int r = 0; r < d; ++r) {
      for (int q = 0; q < r; ++q) {
        double dot = 0.0;
        for (int c = 0; c < d; ++c) dot += m(r, c) * m(q, c);
        for (int c = 0; c < d; ++c) m(r, c) -= dot * m(q, c);
      }
      double norm = 0.0;
      for (int c = 0; c < d; ++c) norm += m(r, c) * m(r, c);
      norm = std::sqrt(norm);
      for (int c = 0; c < d; ++c) m(r, c) /= norm;
    }
  }
  return m;
}

std::vector<int> Permutation(int n, Rng& rng) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  for (int i = n - 1; i > 0; --i) {
    std::swap(p[i], p[rng.Below(static_cast<uint64_t>(i) + 1)]);
  }
  return p;
}

std::vector<GaussianPeak> MakePeaks(int count, int d, double spread,
                                    double global_alpha, Rng& rng) {
  std::vector<GaussianPeak> peaks(count);
  const std::vector<int> alpha_rank = Permutation(count - 1, rng);
  for (int k = 0; k < count; ++k) {
    GaussianPeak& peak = peaks[k];
    double alpha;
    if (k == 0) {
      peak.center.assign(d, 0.0);
      peak.weight = 10.0;
      alpha = global_alpha;
    } else {
      peak.center.resize(d);
      for (double& c : peak.center) c = rng.Uniform(-spread, spread);
      peak.weight = 1.1 + 8.0 * (k - 1) / (count - 2);
      alpha = std::pow(1000.0, 2.0 * alpha_rank[k - 1] / (count - 2));
    }
    const std::vector<int> axis = Permutation(d, rng);
    peak.precision.resize(d);
    for (int j = 0; j < d; ++j) {
      peak.precision[axis[j]] =
          std::pow(alpha, Ratio(j, d)) / std::pow(alpha, 0.25);
    }
  }
  return peaks;
}

double BoundaryPenalty(std::span<const double> x) {
  double p = 0.0;
  for (double v : x) {
    const double excess = std::abs(v) - kUpperBound;
    if (excess > 0.0) p += excess * excess;
  }
  return p;
}

double RastriginOf(std::span<const double> w) {
  double cos_sum = 0.0;
  double sq_sum = 0.0;
  for (double v : w) {
    cos_sum += std::cos(2.0 * kPi * v);
    sq_sum += v * v;
  }
  return 10.0 * (static_cast<double>(w.size()) - cos_sum) + sq_sum;
}

double RosenbrockOf(std::span<const double> z) {
  const int d = static_cast<int>(z.size());
  const double scale = std::max(1.0, std::sqrt(static_cast<double>(d)) / 8.0);
  std::vector<double> w(d);
  for (int i = 0; i < d; ++i) w[i] = scale * z[i] + 1.0;
  if (d == 1) return (w[0] - 1.0) * (w[0] - 1.0);
  double f = 0.0;
  for (int i = 0; i + 1 < d; ++i) {
    const double a = w[i] * w[i] - w[i + 1];
    const double b = w[i] - 1.0;
    f += 100.0 * a * a + b * b;
  }
  return f;
}

double SchafferOf(std::span<const double> z, double conditioning) {
  const int d = static_cast<int>(z.size());
  std::vector<double> w(d);
  for (int i = 0; i < d; ++i) {
    w[i] = std::pow(conditioning, 0.5 * Ratio(i, d)) * z[i];
  }
  std::vector<double> s;
  if (d == 1) {
    s.push_back(std::abs(w[0]));
  } else {
    for (int i = 0; i + 1 < d; ++i) {
      s.push_back(std::sqrt(w[i] * w[i] + w[i + 1] * w[i + 1]));
    }
  }
  double acc = 0.0;
  for (double si : s) {
    const double root = std::sqrt(si);
    const double sn = std::sin(50.0 * std::pow(si, 0.2));
    acc += root + root * sn * sn;
  }
  acc /= static_cast<double>(s.size());
  return acc * acc;
}

double GriewankRosenbrockOf(std::span<const double> z) {
  const int d = static_cast<int>(z.size());
  const double scale = std::max(1.0, std::sqrt(static_cast<double>(d)) / 8.0);
  std::vector<double> w(d);
  for (int i = 0; i < d; ++i) w[i] = scale * z[i] + 1.0;
  auto term = [](double s) { return s / 4000.0 - std::cos(s); };
  if (d == 1) {
    const double s = (w[0] - 1.0) * (w[0] - 1.0);
    return 10.0 * term(s) + 10.0;
  }
  double acc = 0.0;
  for (int i = 0; i + 1 < d; ++i) {
    const double a = w[i] * w[i] - w[i + 1];
    const double b = w[i] - 1.0;
    acc += term(100.0 * a * a + b * b);
  }
  return 10.0 / (d - 1) * acc + 10.0;
}

double WeierstrassOf(std::span<const double> z) {
  constexpr int kTerms = 12;
  double f0 = 0.0;
  for (int k = 0; k < kTerms; ++k) {
    f0 += std::pow(0.5, k) * std::cos(kPi * std::pow(3.0, k));
  }
  double acc = 0.0;
  for (double zi : z) {
    for (int k = 0; k < kTerms; ++k) {
      acc += std::pow(0.5, k) * std::cos(2.0 * kPi * std::pow(3.0, k) * (zi + 0.5));
    }
  }
  const double inner = acc / static_cast<double>(z.size()) - f0;
  return 10.0 * inner * inner * inner;
}

double SchwefelOf(std::span<const double> z) {
  const int d = static_cast<int>(z.size());
  const double term_min =
      -kSchwefelArgmin * std::sin(std::sqrt(kSchwefelArgmin));
  double acc = 0.0;
  double penalty = 0.0;
  for (double u : z) {
    const double v = 100.0 * u + kSchwefelArgmin;
    const double clipped = std::clamp(v, -500.0, 500.0);
    acc += -clipped * std::sin(std::sqrt(std::abs(clipped))) - term_min;
    const double excess = std::abs(v) / 100.0 - kUpperBound;
    if (excess > 0.0) penalty += excess * excess;
  }
  return acc / (100.0 * d) + 100.0 * penalty;
}

double GallagherOf(std::span<const double> z,
                   const std::vector<GaussianPeak>& peaks) {
  const int d = static_cast<int>(z.size());
  double best = 0.0;
  for (const GaussianPeak& peak : peaks) {
    double q = 0.0;
    for (int j = 0; j < d; ++j) {
      const double diff = z[j] - peak.center[j];
      q += peak.precision[j] * diff * diff;
    }
    best = std::max(best, peak.weight * std::exp(-q / (2.0 * d)));
  }
  const double gap = 10.0 - best;
  return gap * gap;
}

double KatsuuraOf(std::span<const double> z) {
  const int d = static_cast<int>(z.size());
  const double exponent = 10.0 / std::pow(static_cast<double>(d), 1.2);
  double product = 1.0;
  for (int i = 0; i < d; ++i) {
    const double w = std::pow(100.0, 0.5 * Ratio(i, d)) * z[i];
    double acc = 0.0;
    double scale = 1.0;
    for (int j = 1; j <= 32; ++j) {
      scale *= 2.0;
      const double v = scale * w;
      acc += std::abs(v - std::nearbyint(v)) / scale;
    }
    product *= std::pow(1.0 + (i + 1) * acc, exponent);
  }
  const double norm = 10.0 / (static_cast<double>(d) * d);
  return norm * product - norm;
}

// u: unrotated offset from the shift; z: rotated offset.
double LunacekOf(std::span<const double> u, std::span<const double> z) {
  const int d = static_cast<int>(u.size());
  constexpr double kMu0 = 2.5;
  // s <= 0 for d == 1; the d == 2 value keeps the second funnel well defined.
  const double d_eff = std::max(d, 2);
  const double s = 1.0 - 1.0 / (2.0 * std::sqrt(d_eff + 20.0) - 8.2);
  const double mu1 = -std::sqrt((kMu0 * kMu0 - 1.0) / s);
  double first = 0.0;
  double second = 0.0;
  for (double ui : u) {
    first += ui * ui;
    const double v = ui + kMu0 - mu1;
    second += v * v;
  }
  double cos_sum = 0.0;
  for (int i = 0; i < d; ++i) {
    const double w = std::pow(100.0, 0.5 * Ratio(i, d)) * z[i];
    cos_sum += std::cos(2.0 * kPi * w);
  }
  return std::min(first, d + s * second) + 10.0 * (d - cos_sum);
}

double LinearSlopeOf(const ProblemInstance& inst, std::span<const double> x) {
  const int d = inst.dim;
  double f = 0.0;
  for (int i = 0; i < d; ++i) {
    const double sign = Sign(inst.shift[i]);
    const double x_opt = kUpperBound * sign;
    const double s = sign * std::pow(10.0, Ratio(i, d));
    const double z = x_opt * x[i] < kUpperBound * kUpperBound ? x[i] : x_opt;
    f += kUpperBound * std::abs(s) - s * z;
  }
  return f;
}

bool IsRotated(FunctionId fid) {
  return GroupOf(fid) != FunctionGroup::kSeparable;
}

}  // namespace

FunctionId::FunctionId(int id) : id_(id) {
  if (id < 1 || id > kNumFunctions) {
    throw DomainError("unknown function id " + std::to_string(id) +
                      " (expected 1..24)");
  }
}

FunctionGroup GroupOf(FunctionId fid) {
  return kFunctions[fid.value() - 1].group;
}

std::string_view FunctionName(FunctionId fid) {
  return kFunctions[fid.value() - 1].name;
}

std::string_view GroupName(FunctionGroup group) {
  switch (group) {
    case FunctionGroup::kSeparable:
      return "separable functions";
    case FunctionGroup::kLowModerateConditioning:
      return "functions with low or moderate conditioning";
    case FunctionGroup::kHighConditioningUnimodal:
      return "high conditioning unimodal functions";
    case FunctionGroup::kMultimodalStrongStructure:
      return "multi-modal functions with adequate global structure";
    case FunctionGroup::kMultimodalWeakStructure:
      return "multi-modal functions with weak global structure";
  }
  return "unknown";
}

SquareMatrix SquareMatrix::Identity(int n) {
  SquareMatrix m;
  m.n = n;
  m.data.assign(static_cast<size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ProblemInstance MakeInstance(FunctionId fid, int iid, int dim,
                             uint64_t master_seed) {
  if (dim < 1) throw DomainError("dimension must be >= 1");
  if (iid < 0) throw DomainError("instance index must be >= 0");

  ProblemInstance inst;
  inst.fid = fid;
  inst.iid = iid;
  inst.dim = dim;
  inst.master_seed = master_seed;
  inst.f_opt = 0.0;
  inst.shift.assign(dim, 0.0);
  inst.rotation = SquareMatrix::Identity(dim);

  Rng rng(DeriveSeed({master_seed, static_cast<uint64_t>(fid.value()),
                      static_cast<uint64_t>(iid), static_cast<uint64_t>(dim)}));
  if (iid > 0) {
    for (double& s : inst.shift) s = rng.Uniform(-kShiftBound, kShiftBound);
    if (IsRotated(fid)) inst.rotation = RandomRotation(dim, rng);
  }
  if (fid.value() == 21) inst.peaks = MakePeaks(101, dim, 5.0, 1000.0, rng);
  if (fid.value() == 22) inst.peaks = MakePeaks(21, dim, 4.9, 1.0e6, rng);
  return inst;
}

std::vector<double> OptimumLocation(const ProblemInstance& instance) {
  if (instance.fid.value() != 5) return instance.shift;
  std::vector<double> x(instance.dim);
  for (int i = 0; i < instance.dim; ++i) {
    x[i] = kUpperBound * Sign(instance.shift[i]);
  }
  return x;
}

double Evaluate(const ProblemInstance& inst, std::span<const double> x) {
  const int d = inst.dim;
  if (static_cast<int>(x.size()) != d) {
    throw DomainError("dimension mismatch: expected " + std::to_string(d) +
                      ", got " + std::to_string(x.size()));
  }
  for (double v : x) {
    if (!std::isfinite(v)) throw DomainError("non-finite input component");
  }

  std::vector<double> u(d);
  for (int i = 0; i < d; ++i) u[i] = x[i] - inst.shift[i];
  std::vector<double> z(d);
  for (int r = 0; r < d; ++r) {
    double acc = 0.0;
    for (int c = 0; c < d; ++c) acc += inst.rotation(r, c) * u[c];
    z[r] = acc;
  }

  double f = 0.0;
  switch (inst.fid.value()) {
    case 1:
      for (double v : z) f += v * v;
      break;
    case 2:
    case 10:
      for (int i = 0; i < d; ++i) f += std::pow(10.0, 6.0 * Ratio(i, d)) * z[i] * z[i];
      break;
    case 3:
      f = RastriginOf(z);
      break;
    case 4: {
      std::vector<double> w(d);
      for (int i = 0; i < d; ++i) {
        double s = std::pow(10.0, 0.5 * Ratio(i, d));
        if (i % 2 == 0 && z[i] > 0.0) s *= 10.0;
        w[i] = s * z[i];
      }
      f = RastriginOf(w) + 100.0 * BoundaryPenalty(x);
      break;
    }
    case 5:
      f = LinearSlopeOf(inst, x);
      break;
    case 6: {
      double acc = 0.0;
      for (int i = 0; i < d; ++i) {
        const double s = z[i] * Sign(inst.shift[i]) > 0.0 ? 100.0 : 1.0;
        acc += (s * z[i]) * (s * z[i]);
      }
      f = std::pow(acc, 0.9);
      break;
    }
    case 7: {
      double acc = 0.0;
      for (int i = 0; i < d; ++i) {
        const double rounded = std::abs(z[i]) > 0.5
                                   ? std::floor(0.5 + z[i])
                                   : std::floor(0.5 + 10.0 * z[i]) / 10.0;
        acc += std::pow(10.0, 2.0 * Ratio(i, d)) * rounded * rounded;
      }
      f = 0.1 * std::max(std::abs(z[0]) / 1.0e4, acc) + BoundaryPenalty(x);
      break;
    }
    case 8:
    case 9:
      f = RosenbrockOf(z);
      break;
    case 11:
      f = 1.0e6 * z[0] * z[0];
      for (int i = 1; i < d; ++i) f += z[i] * z[i];
      break;
    case 12:
      f = z[0] * z[0];
      for (int i = 1; i < d; ++i) f += 1.0e6 * z[i] * z[i];
      break;
    case 13: {
      double acc = 0.0;
      for (int i = 1; i < d; ++i) acc += z[i] * z[i];
      f = z[0] * z[0] + 100.0 * std::sqrt(acc);
      break;
    }
    case 14: {
      double acc = 0.0;
      for (int i = 0; i < d; ++i) acc += std::pow(std::abs(z[i]), 2.0 + 4.0 * Ratio(i, d));
      f = std::sqrt(acc);
      break;
    }
    case 15: {
      std::vector<double> w(d);
      for (int i = 0; i < d; ++i) w[i] = std::pow(10.0, 0.5 * Ratio(i, d)) * z[i];
      f = RastriginOf(w);
      break;
    }
    case 16:
      f = WeierstrassOf(z);
      break;
    case 17:
      f = SchafferOf(z, 10.0);
      break;
    case 18:
      f = SchafferOf(z, 1000.0);
      break;
    case 19:
      f = GriewankRosenbrockOf(z);
      break;
    case 20:
      f = SchwefelOf(z);
      break;
    case 21:
    case 22:
      f = GallagherOf(z, inst.peaks);
      break;
    case 23:
      f = KatsuuraOf(z);
      break;
    case 24:
      f = LunacekOf(u, z);
      break;
  }
  // Every definition is non-negative analytically; absorb rounding below 0.
  return std::max(f, 0.0) + inst.f_opt;
}

BudgetedEvaluator::BudgetedEvaluator(ProblemInstance instance, int64_t budget)
    : instance_(std::move(instance)), budget_(budget) {
  if (budget <= 0) throw DomainError("budget must be > 0");
  trace_.reserve(static_cast<size_t>(budget));
}

double BudgetedEvaluator::Spend(std::span<const double> x) {
  if (used_ >= budget_) throw BudgetExhausted();
  const double value = Evaluate(instance_, x);
  ++used_;
  const double precision = value - instance_.f_opt;
  trace_.push_back(trace_.empty() ? precision
                                  : std::min(trace_.back(), precision));
  return value;
}

}  // namespace llamea
