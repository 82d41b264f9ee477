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


#ifndef COCYCLE_CLASSIFY_HPP_
#define COCYCLE_CLASSIFY_HPP_

#include <string>
#include <vector>

#include "cocycle/arithmetic.hpp"
#include "cocycle/cocycle.hpp"
#include "cocycle/mat2.hpp"
#include "cocycle/potential.hpp"

namespace cocycle {

enum class PointKind { kElliptic, kHyperbolic, kParabolic };

enum class Verdict { kTotallyElliptic, kTotallyHyperbolic, kMixed, kUndetermined };

const char* verdict_name(Verdict v);

struct Interval {
  double lo = 0;
  double hi = 0;  // may exceed 1 when the interval wraps
};

struct EllipticityReport {
  std::vector<double> x;
  std::vector<double> trace;
  std::vector<PointKind> kind;
  double delta = 0;  // 2 - max |tr|
  std::vector<Interval> crossings;  // components of {|tr| <= 2}
  bool transversal = false;
  double min_transversal_derivative = 0;  // over {|tr| = 2}; inf if empty
  Verdict verdict = Verdict::kUndetermined;
};

// Parabolic tolerance on ||tr| - 2|.
inline constexpr double kParabolicTol = 1e-8;

EllipticityReport ellipticity_report(const Loop& loop, int grid_size);
EllipticityReport ellipticity_report(const Potential& v, double e,
                                     const Frequency& pq, int grid_size);

struct RegularityWitness {
  double x = 0;
  double nu = 0;
  std::string reason;
};

struct RegularityResult {
  bool regular = false;
  double h_prime = 0;
  RegularityWitness witness;
  EllipticityReport report;
};

// Transversality criterion plus a bisection estimate of h'.
RegularityResult regularity_check(const Loop& loop, int grid_size);

struct EigenBranch {
  double nu = 0;
  std::vector<cplx> lambda;
  int r_a = 0;
  double winding_defect = 0;  // distance of the argument winding to r_a
  cplx theta_bar;
  double spectral_radius_min = 0;
  double mean_log_modulus = 0;  // integral of log|lambda(x + i nu)|
  bool r_a_nonnegative = false;
  bool re_theta_bar_nonnegative = false;
};

EigenBranch eigen_branch(const Loop& loop, double nu, int grid_size);

}  // namespace cocycle

#endif  // COCYCLE_CLASSIFY_HPP_
