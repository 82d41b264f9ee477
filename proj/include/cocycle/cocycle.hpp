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

#ifndef COCYCLE_COCYCLE_HPP_
#define COCYCLE_COCYCLE_HPP_

#include <cstdint>
#include <functional>

#include "cocycle/arithmetic.hpp"
#include "cocycle/mat2.hpp"
#include "cocycle/potential.hpp"

namespace cocycle {

// Product kept as exp(log_scale) * normalized with ||normalized|| = 1.
template <class T>
struct BasicScaledProduct {
  Mat2<T> normalized = Mat2<T>::identity();
  double log_scale = 0;
  int64_t steps = 0;

  Mat2<T> reconstruct() const { return normalized * T(std::exp(log_scale)); }
  double log_norm() const { return log_scale + std::log(op_norm(normalized)); }
};

using ScaledProduct = BasicScaledProduct<double>;
using ScaledProductC = BasicScaledProduct<cplx>;

Mat2r schrodinger_step(const Potential& v, double e, double x);
Mat2c schrodinger_step(const Potential& v, cplx e, cplx z);

// A_n(x0) = S(x0 + (n-1) alpha) ... S(x0), renormalized every step.
ScaledProduct scaled_transfer(const Potential& v, double e, double alpha,
                              double x0, int64_t n);
ScaledProductC scaled_transfer(const Potential& v, cplx e, double alpha,
                               cplx z0, int64_t n);

// x + j p/q reduced to [0,1) without accumulating j p/q in floating point.
double rational_orbit_point(const Frequency& pq, double x, int64_t j);

// A^(q)(x) = S(x + (q-1)p/q) ... S(x).
Mat2r q_step(const Potential& v, double e, const Frequency& pq, double x);
Mat2c q_step(const Potential& v, cplx e, const Frequency& pq, cplx z);

// x~: the orbit point in the arc [s, s + 1/q) where s is the start of the
// support; j_bar: number of steps from x to x~.
struct OrbitAnchor {
  double x_tilde = 0;
  int64_t j_bar = 0;
};

OrbitAnchor orbit_anchor(const Potential& v, const Frequency& pq, double x);

// tr A^(q)(x) = -V(x~) U_{q-1}(E/2) + 2 T_q(E/2), valid when L(V) < 1/q.
double trace_closed_form(const Potential& v, double e, int64_t q, double x);

// C_E^{q-1-j} S(x~) C_E^{j}; the same product as q_step under L(V) < 1/q.
Mat2r q_step_factored(const Potential& v, double e, const Frequency& pq,
                      double x);

// d/dx tr A^(q)(x) by the product rule.
double q_step_trace_derivative(const Potential& v, double e,
                               const Frequency& pq, double x);

// A loop x -> A(x) in SL(2,R), optionally with an analytic extension.
struct Loop {
  std::function<Mat2r(double)> at;
  std::function<Mat2c(cplx)> at_complex;
  std::function<double(double)> trace_derivative;
  double strip = 0;

  bool analytic() const { return static_cast<bool>(at_complex) && strip > 0; }

  static Loop constant(const Mat2r& m);
  static Loop from_function(std::function<Mat2r(double)> f);
  static Loop q_step(const Potential& v, double e, const Frequency& pq);
};

}  // namespace cocycle

#endif  // COCYCLE_COCYCLE_HPP_
