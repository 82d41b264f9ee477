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

#ifndef COCYCLE_LYAPUNOV_HPP_
#define COCYCLE_LYAPUNOV_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "cocycle/arithmetic.hpp"
#include "cocycle/cocycle.hpp"
#include "cocycle/potential.hpp"

namespace cocycle {

struct LEOptions {
  int64_t n = 100000;
  int phases = 8;
  uint64_t seed = 0;
  double nu = 0;            // imaginary offset of the phase
  double quad_tol = 1e-11;  // rational-alpha quadrature tolerance
};

struct LEEstimate {
  double value = 0;  // raw estimate, not clamped
  int64_t n_steps = 0;
  int n_phases = 0;
  double stderr_ = 0;
  double convergence_gap = 0;
  bool quadrature = false;  // rational alpha: integral of log r_spec

  double clamped() const { return value < 0 ? 0 : value; }
};

LEEstimate le_estimate(const Potential& v, double e, const Frequency& alpha,
                       const LEOptions& opt);

// (1/q) int log r_spec(A(x + i nu)) dx for a loop A standing for the q-step
// product; period 1/q cells are integrated separately when q > 1.
struct QuadratureResult {
  double value = 0;
  double error = 0;
};

QuadratureResult loop_log_spectral_radius(const Loop& loop, double nu,
                                          int64_t q = 1, double tol = 1e-11);

struct LyapunovProfile {
  std::vector<double> nu;
  std::vector<double> values;
  std::vector<double> stderrs;
  std::vector<double> second_differences;  // size nu.size() - 2
  double slope = 0;
  double intercept = 0;
  double quantization_residual = 0;  // |s/2pi - round(s/2pi)|
  double acceleration = 0;           // s / 2pi
};

// L(nu) on a strictly increasing grid; the affine fit uses grid points in
// [fit_lo, fit_hi] (the whole grid when fit_lo > fit_hi).
LyapunovProfile le_profile(const Potential& v, double e, const Frequency& alpha,
                           const std::vector<double>& nu_grid,
                           const LEOptions& opt, double fit_lo = 1,
                           double fit_hi = 0);

// Profile from precomputed values (shared by the loop form below).
LyapunovProfile analyse_profile(std::vector<double> nu, std::vector<double> values,
                                std::vector<double> stderrs, double fit_lo,
                                double fit_hi);

struct HermanBound {
  double value = 0;
  bool informative = false;  // value > 0
};

// log z0 + log((|E| + sqrt(E^2 - 4)) / 2); independent of K and alpha.
HermanBound herman_lower_bound(double K, double lambda, double e);

struct UHOptions {
  int64_t n = 256;               // block length
  double margin = 0.02;          // minimal splitting angle (radians)
  int64_t orbit_length = 65536;  // fibers per start
  int starts = 4;
  uint64_t seed = 0;
};

struct UHResult {
  bool uniformly_hyperbolic = false;
  double min_angle = 0;        // min angle between forward/backward directions
  double min_log_growth = 0;   // min over blocks of log sigma_1(A_n)
  double worst_inclusion = 0;  // max image half-aperture / target half-aperture
  double cone_center = 0;      // direction angle at the first sampled fiber
  double cone_aperture = 0;    // half-aperture used there
  int64_t fibers = 0;
};

UHResult uh_test(const Potential& v, double e, const Frequency& alpha,
                 const UHOptions& opt = {});

}  // namespace cocycle

#endif  // COCYCLE_LYAPUNOV_HPP_
