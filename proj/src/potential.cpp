// Copyright 2026 The cocycle-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cocycle/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "cocycle/error.hpp"

namespace cocycle {
namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

const char* potential_kind_name(PotentialKind kind) {
  switch (kind) {
    case PotentialKind::kZero: return "zero";
    case PotentialKind::kPeakyBump: return "peaky-bump";
    case PotentialKind::kPoissonPeak: return "poisson-peak";
    case PotentialKind::kTabulated: return "tabulated";
  }
  return "unknown";
}

PoleData pole_data(double K, double lambda) {
  require(K > 0 && lambda > 0 && std::isfinite(K) && std::isfinite(lambda),
          ErrorCode::kParameter, "poisson-peak needs K > 0 and lambda > 0");
  double r = std::sqrt(4.0 * lambda + 1.0);
  double z1 = (2.0 * lambda + 1.0 + r) / (2.0 * lambda);
  // z0 = 1/z1 avoids cancellation in the minus root.
  return {1.0 / z1, z1, -K / lambda};
}

Potential Potential::zero() {
  Potential v;
  v.kind_ = PotentialKind::kZero;
  v.strip_ = std::numeric_limits<double>::infinity();
  v.support_ = {0, 0};
  return v;
}

Potential Potential::poisson_peak(double K, double lambda) {
  Potential v;
  v.poles_ = pole_data(K, lambda);
  v.kind_ = PotentialKind::kPoissonPeak;
  v.k_max_ = K;
  v.lambda_ = lambda;
  v.peak_ = 0;
  v.strip_ = 0.9 * std::log(v.poles_->z1) / (2.0 * kPi);
  v.support_ = {0, 1};
  return v;
}

Potential Potential::peaky_bump(double lo, double hi, double K,
                                double sharpness) {
  require(lo > 0 && hi < 1 && lo < hi, ErrorCode::kParameter,
          "peaky-bump support must lie strictly inside (0,1)");
  require(K > 0 && sharpness > 0, ErrorCode::kParameter,
          "peaky-bump needs K > 0 and sharpness > 0");
  Potential v;
  v.kind_ = PotentialKind::kPeakyBump;
  v.k_max_ = K;
  v.lo_ = lo;
  v.hi_ = hi;
  v.sharpness_ = sharpness;
  v.peak_ = 0.5 * (lo + hi);
  v.strip_ = 0;
  v.support_ = {lo, hi - lo};
  return v;
}

Potential Potential::tabulated(std::vector<double> samples) {
  require(samples.size() >= 2, ErrorCode::kParameter,
          "tabulated potential needs at least 2 samples");
  for (double s : samples)
    require(std::isfinite(s) && s >= 0, ErrorCode::kParameter,
            "tabulated samples must be finite and non-negative");
  Potential v;
  v.kind_ = PotentialKind::kTabulated;
  const int n = static_cast<int>(samples.size());
  auto it = std::max_element(samples.begin(), samples.end());
  v.k_max_ = *it;
  v.peak_ = static_cast<double>(it - samples.begin()) / n;
  // Support: complement of the longest circular run of zeros. A zero
  // sample still touches the neighbouring segments, so a run of m zeros
  // only frees m - 1 cells.
  int best_len = 0, best_end = -1, run = 0;
  for (int i = 0; i < 2 * n; ++i) {
    if (samples[i % n] == 0.0) {
      ++run;
      if (run > best_len && run <= n) {
        best_len = run;
        best_end = i;
      }
    } else {
      run = 0;
    }
  }
  if (best_len >= n) {
    v.support_ = {0, 0};
  } else if (best_len <= 1) {
    v.support_ = {0, 1};
  } else {
    int last_zero = best_end % n;
    v.support_ = {static_cast<double>(last_zero) / n,
                  static_cast<double>(n - best_len + 1) / n};
  }
  v.samples_ = std::move(samples);
  return v;
}

double Potential::operator()(double x) const {
  switch (kind_) {
    case PotentialKind::kZero:
      return 0.0;
    case PotentialKind::kPoissonPeak: {
      double s = std::sin(kPi * x);
      return k_max_ / (1.0 + 4.0 * lambda_ * s * s);
    }
    case PotentialKind::kPeakyBump: {
      double y = frac(x);
      if (y <= lo_ || y >= hi_) return 0.0;
      double t = (y - lo_) / (hi_ - lo_);
      return k_max_ * std::exp(4.0 * sharpness_ - sharpness_ / (t * (1.0 - t)));
    }
    case PotentialKind::kTabulated: {
      const double n = static_cast<double>(samples_.size());
      double u = frac(x) * n;
      auto i = static_cast<size_t>(u);
      if (i >= samples_.size()) i = samples_.size() - 1;
      double w = u - static_cast<double>(i);
      double a = samples_[i], b = samples_[(i + 1) % samples_.size()];
      return a + w * (b - a);
    }
  }
  return 0.0;
}

cplx Potential::operator()(cplx z) const {
  if (z.imag() == 0.0) return (*this)(z.real());
  require(analytic(), ErrorCode::kUnsupported,
          std::string(potential_kind_name(kind_)) +
              " potential has no analytic extension");
  require(std::abs(z.imag()) <= strip_, ErrorCode::kStripViolation,
          "|Im z| = " + fmt(std::abs(z.imag())) + " exceeds strip " +
              fmt(strip_));
  if (kind_ == PotentialKind::kZero) return 0.0;
  cplx s = std::sin(kPi * z);
  return k_max_ / (1.0 + 4.0 * lambda_ * s * s);
}

double Potential::derivative(double x) const {
  switch (kind_) {
    case PotentialKind::kZero:
      return 0.0;
    case PotentialKind::kPoissonPeak: {
      double s = std::sin(kPi * x);
      double den = 1.0 + 4.0 * lambda_ * s * s;
      return -4.0 * kPi * lambda_ * k_max_ * std::sin(2.0 * kPi * x) /
             (den * den);
    }
    case PotentialKind::kPeakyBump: {
      double y = frac(x);
      if (y <= lo_ || y >= hi_) return 0.0;
      double w = hi_ - lo_;
      double t = (y - lo_) / w;
      double tt = t * (1.0 - t);
      return (*this)(y) * sharpness_ * (1.0 - 2.0 * t) / (tt * tt) / w;
    }
    case PotentialKind::kTabulated: {
      const double n = static_cast<double>(samples_.size());
      auto i = static_cast<size_t>(frac(x) * n);
      if (i >= samples_.size()) i = samples_.size() - 1;
      return (samples_[(i + 1) % samples_.size()] - samples_[i]) * n;
    }
  }
  return 0.0;
}

std::map<std::string, std::string> Potential::describe() const {
  std::map<std::string, std::string> out;
  out["kind"] = potential_kind_name(kind_);
  switch (kind_) {
    case PotentialKind::kZero:
      break;
    case PotentialKind::kPoissonPeak:
      out["K"] = fmt(k_max_);
      out["lambda"] = fmt(lambda_);
      break;
    case PotentialKind::kPeakyBump:
      out["K"] = fmt(k_max_);
      out["support_lo"] = fmt(lo_);
      out["support_hi"] = fmt(hi_);
      out["sharpness"] = fmt(sharpness_);
      break;
    case PotentialKind::kTabulated: {
      std::ostringstream os;
      os.precision(17);
      for (size_t i = 0; i < samples_.size(); ++i)
        os << (i ? "," : "") << samples_[i];
      out["samples"] = os.str();
      break;
    }
  }
  return out;
}

PotentialValidation validate_potential(const Potential& v, int grid) {
  require(grid >= 16, ErrorCode::kParameter, "validation grid too small");
  PotentialValidation r;
  r.grid_max = -std::numeric_limits<double>::infinity();
  r.grid_min = std::numeric_limits<double>::infinity();
  // Include the peak itself so the maximum is attained exactly.
  std::vector<double> xs;
  xs.reserve(grid + 1);
  for (int i = 0; i < grid; ++i) xs.push_back(static_cast<double>(i) / grid);
  for (double x : xs) {
    double y = v(x);
    r.grid_max = std::max(r.grid_max, y);
    r.grid_min = std::min(r.grid_min, y);
  }
  r.grid_max = std::max(r.grid_max, v(v.peak()));
  r.max_relative_error =
      v.K() > 0 ? std::abs(r.grid_max - v.K()) / v.K() : std::abs(r.grid_max);
  SupportArc arc = v.support();
  int prev = 0;
  for (int i = 1; i < grid; ++i) {
    double x = arc.start + arc.length * i / grid;
    double d = v.derivative(x);
    int s = d > 0 ? 1 : (d < 0 ? -1 : 0);
    if (s != 0) {
      if (prev != 0 && s != prev) ++r.derivative_sign_changes;
      prev = s;
    }
  }
  r.valid = r.grid_min >= 0 && r.max_relative_error <= 1e-9;
  return r;
}

}  // namespace cocycle
