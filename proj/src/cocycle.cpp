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

#include "cocycle/cocycle.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "cocycle/error.hpp"

namespace cocycle {
namespace {

// Each step rescales by the entrywise l1 norm (no square roots); the final
// matrix is brought to unit operator norm once at the end.
constexpr int kLogFlush = 32;

template <class T>
void renormalize_det(Mat2<T>& m) {
  T dt = m.det();
  double n = op_norm(m);
  if (std::abs(dt - T(1)) > 1e-9 * (1.0 + n * n)) m = m * (T(1) / std::sqrt(dt));
}

// Modular inverse of p mod q (gcd = 1).
int64_t mod_inverse(int64_t p, int64_t q) {
  int64_t t = 0, nt = 1, r = q, nr = p % q;
  while (nr != 0) {
    int64_t quot = r / nr;
    t -= quot * nt; std::swap(t, nt);
    r -= quot * nr; std::swap(r, nr);
  }
  if (t < 0) t += q;
  return t;
}

// U_{q-1}(E/2) and T_q(E/2), the two Chebyshev factors of the trace.
void chebyshev_factors(double e, int64_t q, double& u, double& t) {
  const double qd = static_cast<double>(q);
  double ae = std::abs(e);
  double sgn_u = (e < 0 && (q - 1) % 2 != 0) ? -1.0 : 1.0;
  double sgn_t = (e < 0 && q % 2 != 0) ? -1.0 : 1.0;
  double eps = ae / 2.0 - 1.0;
  if (std::abs(eps) < 1e-8) {
    // Removable singularity at |E| = 2, first order in eps.
    u = sgn_u * (qd + eps * qd * (qd * qd - 1.0) / 3.0);
    t = sgn_t * (1.0 + qd * qd * eps);
    return;
  }
  if (ae < 2.0) {
    double th = std::acos(e / 2.0);
    u = std::sin(qd * th) / std::sin(th);
    t = std::cos(qd * th);
  } else {
    double th = std::acosh(ae / 2.0);
    u = sgn_u * std::sinh(qd * th) / std::sinh(th);
    t = sgn_t * std::cosh(qd * th);
  }
}

}  // namespace

Mat2r schrodinger_step(const Potential& v, double e, double x) {
  return schrodinger_matrix(e - v(x));
}

Mat2c schrodinger_step(const Potential& v, cplx e, cplx z) {
  return schrodinger_matrix(e - v(z));
}

ScaledProduct scaled_transfer(const Potential& v, double e, double alpha,
                              double x0, int64_t n) {
  require(n >= 1, ErrorCode::kParameter, "scaled_transfer: n must be >= 1");
  ScaledProduct out;
  double a = 1, b = 0, c = 0, d = 1;
  double acc = 1.0, log_scale = 0.0;
  int pending = 0;
  double x = frac(x0);
  const double step = frac(alpha);
  for (int64_t k = 0; k < n; ++k) {
    double w = e - v(x);
    double na = w * a - c, nb = w * b - d;
    c = a;
    d = b;
    a = na;
    b = nb;
    double s = std::abs(a) + std::abs(b) + std::abs(c) + std::abs(d);
    double inv = 1.0 / s;
    a *= inv; b *= inv; c *= inv; d *= inv;
    acc *= s;
    if (++pending == kLogFlush) {
      log_scale += std::log(acc);
      acc = 1.0;
      pending = 0;
    }
    x += step;
    if (x >= 1.0) x -= 1.0;
  }
  Mat2r m{a, b, c, d};
  double s = op_norm(m);
  log_scale += std::log(acc * s);
  out.normalized = m * (1.0 / s);
  out.log_scale = log_scale;
  out.steps = n;
  return out;
}

ScaledProductC scaled_transfer(const Potential& v, cplx e, double alpha,
                               cplx z0, int64_t n) {
  require(n >= 1, ErrorCode::kParameter, "scaled_transfer: n must be >= 1");
  ScaledProductC out;
  Mat2c m = Mat2c::identity();
  double acc = 1.0, log_scale = 0.0;
  int pending = 0;
  double x = frac(z0.real());
  const double y = z0.imag();
  const double step = frac(alpha);
  for (int64_t k = 0; k < n; ++k) {
    cplx w = e - v(cplx(x, y));
    m = Mat2c{w * m.a - m.c, w * m.b - m.d, m.a, m.b};
    double s = std::abs(m.a) + std::abs(m.b) + std::abs(m.c) + std::abs(m.d);
    m = m * cplx(1.0 / s);
    acc *= s;
    if (++pending == kLogFlush) {
      log_scale += std::log(acc);
      acc = 1.0;
      pending = 0;
    }
    x += step;
    if (x >= 1.0) x -= 1.0;
  }
  double s = op_norm(m);
  log_scale += std::log(acc * s);
  out.normalized = m * cplx(1.0 / s);
  out.log_scale = log_scale;
  out.steps = n;
  return out;
}

double rational_orbit_point(const Frequency& pq, double x, int64_t j) {
  int64_t r = static_cast<int64_t>((static_cast<__int128>(j) * pq.p()) % pq.q());
  return frac(x + static_cast<double>(r) / static_cast<double>(pq.q()));
}

Mat2r q_step(const Potential& v, double e, const Frequency& pq, double x) {
  require(pq.is_rational(), ErrorCode::kParameter, "q_step needs rational p/q");
  Mat2r m = Mat2r::identity();
  for (int64_t j = 0; j < pq.q(); ++j)
    m = schrodinger_step(v, e, rational_orbit_point(pq, x, j)) * m;
  renormalize_det(m);
  return m;
}

Mat2c q_step(const Potential& v, cplx e, const Frequency& pq, cplx z) {
  require(pq.is_rational(), ErrorCode::kParameter, "q_step needs rational p/q");
  Mat2c m = Mat2c::identity();
  for (int64_t j = 0; j < pq.q(); ++j) {
    double xr = rational_orbit_point(pq, z.real(), j);
    m = schrodinger_step(v, e, cplx(xr, z.imag())) * m;
  }
  renormalize_det(m);
  return m;
}

OrbitAnchor orbit_anchor(const Potential& v, const Frequency& pq, double x) {
  require(pq.is_rational(), ErrorCode::kParameter, "orbit_anchor needs rational p/q");
  const int64_t q = pq.q();
  const double qd = static_cast<double>(q);
  double s = v.support().start;
  double u = frac(x - s);
  double cell = std::floor(u * qd);
  if (cell >= qd) cell = qd - 1;
  OrbitAnchor out;
  out.x_tilde = frac(s + (u - cell / qd));
  // x~ = x - cell/q mod 1, and j p = -cell mod q.
  auto m = static_cast<int64_t>(cell);
  int64_t target = (q - m % q) % q;
  out.j_bar = q == 1 ? 0 : static_cast<int64_t>(
      (static_cast<__int128>(target) * mod_inverse(pq.p(), q)) % q);
  return out;
}

double trace_closed_form(const Potential& v, double e, int64_t q, double x) {
  require(q >= 1, ErrorCode::kParameter, "trace_closed_form: q must be >= 1");
  double len = v.support_length();
  require(q == 1 || len < 1.0 / static_cast<double>(q), ErrorCode::kPrecondition,
          "trace_closed_form needs L(V) < 1/q (L = " + std::to_string(len) +
              ", q = " + std::to_string(q) + ")");
  double vt;
  if (q == 1) {
    vt = v(x);
  } else {
    double s = v.support().start;
    double qd = static_cast<double>(q);
    double u = frac(x - s) * qd;
    vt = v(s + (u - std::floor(u)) / qd);
  }
  double uq, tq;
  chebyshev_factors(e, q, uq, tq);
  return -vt * uq + 2.0 * tq;
}

Mat2r q_step_factored(const Potential& v, double e, const Frequency& pq,
                      double x) {
  OrbitAnchor an = orbit_anchor(v, pq, x);
  Mat2r ce = schrodinger_matrix(e);
  Mat2r left = Mat2r::identity(), right = Mat2r::identity();
  for (int64_t j = 0; j < an.j_bar; ++j) right = ce * right;
  for (int64_t j = 0; j < pq.q() - 1 - an.j_bar; ++j) left = ce * left;
  return left * schrodinger_step(v, e, an.x_tilde) * right;
}

double q_step_trace_derivative(const Potential& v, double e,
                               const Frequency& pq, double x) {
  const int64_t q = pq.q();
  std::vector<Mat2r> steps(q), prefix(q + 1);
  std::vector<double> dv(q);
  for (int64_t j = 0; j < q; ++j) {
    double xj = rational_orbit_point(pq, x, j);
    steps[j] = schrodinger_step(v, e, xj);
    dv[j] = v.derivative(xj);
  }
  // prefix[j] = S_{j-1} ... S_0
  prefix[0] = Mat2r::identity();
  for (int64_t j = 0; j < q; ++j) prefix[j + 1] = steps[j] * prefix[j];
  Mat2r suffix = Mat2r::identity();  // S_{q-1} ... S_{j+1}
  double acc = 0;
  for (int64_t j = q - 1; j >= 0; --j) {
    // d S_j / dx = [[-V'(x_j), 0], [0, 0]]; tr(suffix dS prefix) =
    // -V' (prefix * suffix)_{11}.
    Mat2r m = prefix[j] * suffix;
    acc += -dv[j] * m.a;
    suffix = suffix * steps[j];
  }
  return acc;
}

Loop Loop::constant(const Mat2r& m) {
  Loop l;
  l.at = [m](double) { return m; };
  l.at_complex = [m](cplx) { return complexify(m); };
  l.trace_derivative = [](double) { return 0.0; };
  l.strip = std::numeric_limits<double>::infinity();
  return l;
}

Loop Loop::from_function(std::function<Mat2r(double)> f) {
  Loop l;
  l.at = std::move(f);
  return l;
}

Loop Loop::q_step(const Potential& v, double e, const Frequency& pq) {
  require(pq.is_rational(), ErrorCode::kParameter, "Loop::q_step needs rational p/q");
  Loop l;
  l.at = [v, e, pq](double x) { return cocycle::q_step(v, e, pq, x); };
  l.trace_derivative = [v, e, pq](double x) {
    return q_step_trace_derivative(v, e, pq, x);
  };
  if (v.analytic()) {
    l.at_complex = [v, e, pq](cplx z) {
      return cocycle::q_step(v, cplx(e, 0.0), pq, z);
    };
    l.strip = v.strip_halfwidth();
  }
  return l;
}

}  // namespace cocycle
