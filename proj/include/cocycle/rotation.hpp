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

#ifndef COCYCLE_ROTATION_HPP_
#define COCYCLE_ROTATION_HPP_

#include <cstdint>
#include <vector>

#include "cocycle/arithmetic.hpp"
#include "cocycle/cocycle.hpp"
#include "cocycle/potential.hpp"

namespace cocycle {

enum class RotationMethod { kOrbitLift, kRationalAverage, kEllipticIntegral };

const char* rotation_method_name(RotationMethod m);

struct RotationEstimate {
  double rho = 0;      // in [0, 1)
  double rho_bar = 0;  // lift, average counterclockwise turn per step
  int64_t n_steps = 0;
  double convergence_gap = 0;
  RotationMethod method = RotationMethod::kOrbitLift;
  int excluded = 0;  // rational method: parabolic or unresolved phases
};

struct RotationOptions {
  int64_t n = 100000;  // orbit length (irrational alpha)
  double x0 = 0;
  double y0 = 0;       // initial direction angle, radians
  int grid = 1024;     // phase grid (rational alpha)
  int64_t max_circle_steps = 10000;
};

// Fibered rotation number of (alpha, S_{E-V}).
RotationEstimate rotation_number(const Potential& v, double e,
                                 const Frequency& alpha,
                                 const RotationOptions& opt = {});

// Same for a loop homotopic to the identity.
RotationEstimate rotation_number(const Loop& loop, const Frequency& alpha,
                                 const RotationOptions& opt = {});

// Rotation number, in turns, of the lift of a single matrix product given as
// a sequence of steps; used for q-step products at a fixed phase.
// Returns NaN when the candidate set cannot be resolved (near parabolic).
double matrix_rotation_turns(const std::vector<Mat2r>& steps,
                             const std::vector<double>& step_lifts,
                             int64_t max_iter);

// (1/q) rho of the q-step product via the integral of arccos(tr/2)/2pi.
RotationEstimate elliptic_rotation_integral(const Potential& v, double e,
                                            const Frequency& pq,
                                            double tol = 1e-12);

// N(E) = 1 - 2 rho_bar.
double density_of_states(const RotationEstimate& rho);

// Phase grid that resolves the potential's finest feature.
int resolving_grid(const Potential& v, int base);

}  // namespace cocycle

#endif  // COCYCLE_ROTATION_HPP_
