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

#ifndef COCYCLE_POTENTIAL_HPP_
#define COCYCLE_POTENTIAL_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cocycle/mat2.hpp"

namespace cocycle {

enum class PotentialKind { kZero, kPeakyBump, kPoissonPeak, kTabulated };

const char* potential_kind_name(PotentialKind kind);

// Poles of the rational extension f(z) = K / (1 + lam (2 - z - 1/z)),
// factored as f = C z / ((z - z0)(z - z1)).
struct PoleData {
  double z0 = 0;
  double z1 = 0;
  double C = 0;
};

PoleData pole_data(double K, double lambda);

// Arc of the torus [start, start + length) outside of which V vanishes.
struct SupportArc {
  double start = 0;
  double length = 1;
};

// Immutable torus function V >= 0.
class Potential {
 public:
  static Potential zero();
  // V(x) = K / (1 + 4 lam sin^2(pi x)).
  static Potential poisson_peak(double K, double lambda);
  // Exponential-flat bump K exp(-s/(t(1-t))) / exp(-4s) on (lo, hi).
  static Potential peaky_bump(double lo, double hi, double K,
                              double sharpness = 1.0);
  // Periodic piecewise-linear interpolation of samples on a uniform grid.
  static Potential tabulated(std::vector<double> samples);

  PotentialKind kind() const { return kind_; }
  double operator()(double x) const;
  cplx operator()(cplx z) const;
  double derivative(double x) const;

  double K() const { return k_max_; }  // K(V) = max V
  double lambda() const { return lambda_; }
  double sharpness() const { return sharpness_; }
  double peak() const { return peak_; }  // x*
  SupportArc support() const { return support_; }
  double support_length() const { return support_.length; }  // L(V)
  double strip_halfwidth() const { return strip_; }
  bool analytic() const { return strip_ > 0; }
  const std::optional<PoleData>& poles() const { return poles_; }
  const std::vector<double>& samples() const { return samples_; }

  // key=value descriptor (kind, K, lambda or support/sharpness).
  std::map<std::string, std::string> describe() const;

 private:
  Potential() = default;

  PotentialKind kind_ = PotentialKind::kZero;
  double k_max_ = 0;
  double lambda_ = 0;
  double lo_ = 0, hi_ = 0;
  double sharpness_ = 0;
  double peak_ = 0;
  double strip_ = 0;
  SupportArc support_{0, 0};
  std::optional<PoleData> poles_;
  std::vector<double> samples_;
};

// Grid diagnostics used to check the class invariants.
struct PotentialValidation {
  double grid_max = 0;
  double grid_min = 0;
  double max_relative_error = 0;   // |grid max - K| / K
  int derivative_sign_changes = 0; // inside the support
  bool valid = false;
};

PotentialValidation validate_potential(const Potential& v, int grid = 4096);

// Wrap to [0, 1).
inline double frac(double x) {
  double f = x - std::floor(x);
  return f >= 1.0 ? 0.0 : f;
}

}  // namespace cocycle

#endif  // COCYCLE_POTENTIAL_HPP_
