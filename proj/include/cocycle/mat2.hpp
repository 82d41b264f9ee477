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

#ifndef COCYCLE_MAT2_HPP_
#define COCYCLE_MAT2_HPP_

#include <cmath>
#include <complex>
#include <type_traits>

namespace cocycle {

using cplx = std::complex<double>;

// 2x2 matrix [[a, b], [c, d]] over double or complex<double>.
template <class T>
struct Mat2 {
  T a{1}, b{0}, c{0}, d{1};

  static Mat2 identity() { return {T(1), T(0), T(0), T(1)}; }
  static Mat2 zero() { return {T(0), T(0), T(0), T(0)}; }

  T trace() const { return a + d; }
  T det() const { return a * d - b * c; }

  Mat2 operator*(const Mat2& m) const {
    return {a * m.a + b * m.c, a * m.b + b * m.d, c * m.a + d * m.c,
            c * m.b + d * m.d};
  }
  Mat2 operator+(const Mat2& m) const {
    return {a + m.a, b + m.b, c + m.c, d + m.d};
  }
  Mat2 operator-(const Mat2& m) const {
    return {a - m.a, b - m.b, c - m.c, d - m.d};
  }
  Mat2 operator*(T s) const { return {a * s, b * s, c * s, d * s}; }
  Mat2& operator*=(const Mat2& m) { return *this = *this * m; }

  // Inverse for unimodular matrices.
  Mat2 sl_inverse() const { return {d, -b, -c, a}; }
  Mat2 inverse() const {
    T det_ = det();
    return {d / det_, -b / det_, -c / det_, a / det_};
  }

  // Apply to a column vector (x, y).
  void apply(T& x, T& y) const {
    T nx = a * x + b * y;
    y = c * x + d * y;
    x = nx;
  }
};

using Mat2r = Mat2<double>;
using Mat2c = Mat2<cplx>;

inline Mat2c complexify(const Mat2r& m) { return {m.a, m.b, m.c, m.d}; }

inline double frobenius_sq(const Mat2r& m) {
  return m.a * m.a + m.b * m.b + m.c * m.c + m.d * m.d;
}
inline double frobenius_sq(const Mat2c& m) {
  return std::norm(m.a) + std::norm(m.b) + std::norm(m.c) + std::norm(m.d);
}

// Largest singular value, closed form.
template <class T>
double op_norm(const Mat2<T>& m) {
  double f2 = frobenius_sq(m);
  double dt = std::abs(m.det());
  double disc = f2 * f2 - 4.0 * dt * dt;
  if (disc < 0) disc = 0;
  return std::sqrt(0.5 * (f2 + std::sqrt(disc)));
}

// Max-entry distance.
template <class T>
double max_abs_diff(const Mat2<T>& x, const Mat2<T>& y) {
  double r = std::abs(x.a - y.a);
  r = std::fmax(r, std::abs(x.b - y.b));
  r = std::fmax(r, std::abs(x.c - y.c));
  return std::fmax(r, std::abs(x.d - y.d));
}

inline Mat2r rotation(double phi) {
  double c = std::cos(phi), s = std::sin(phi);
  return {c, -s, s, c};
}

// Polar angle of the rotation part, atan2(c - b, a + d).
inline double rotation_angle(const Mat2r& m) {
  return std::atan2(m.c - m.b, m.a + m.d);
}

// Schrodinger matrix S_W = [[W, -1], [1, 0]].
template <class T>
Mat2<T> schrodinger_matrix(T w) {
  return {w, T(-1), T(1), T(0)};
}

// Spectral radius of a unimodular matrix from its trace.
inline double spectral_radius_from_trace(cplx tr) {
  cplx s = std::sqrt(tr * tr - 4.0);
  return 0.5 * std::fmax(std::abs(tr + s), std::abs(tr - s));
}
inline double spectral_radius_from_trace(double tr) {
  return spectral_radius_from_trace(cplx(tr, 0.0));
}

// Dominant eigenvalue (modulus >= 1) of a unimodular matrix from its trace.
inline cplx dominant_eigenvalue(cplx tr) {
  cplx s = std::sqrt(tr * tr - 4.0);
  cplx l1 = 0.5 * (tr + s), l2 = 0.5 * (tr - s);
  return std::abs(l1) >= std::abs(l2) ? l1 : l2;
}

// exp of a traceless real 2x2 via Cayley-Hamilton: X^2 = -det(X) I.
inline Mat2r sl2_exp(const Mat2r& x) {
  double kappa = -x.det();
  double c, s;
  if (std::abs(kappa) < 1e-8) {
    c = 1.0 + kappa / 2.0 + kappa * kappa / 24.0;
    s = 1.0 + kappa / 6.0 + kappa * kappa / 120.0;
  } else if (kappa > 0) {
    double r = std::sqrt(kappa);
    c = std::cosh(r);
    s = std::sinh(r) / r;
  } else {
    double r = std::sqrt(-kappa);
    c = std::cos(r);
    s = std::sin(r) / r;
  }
  return Mat2r{c, 0, 0, c} + x * s;
}

// Principal log of a unimodular real matrix with trace > -2.
inline Mat2r sl2_log(const Mat2r& m) {
  double t = 0.5 * m.trace();
  double f;  // s / sinh(s) or s / sin(s)
  double u = t - 1.0;
  if (std::abs(u) < 1e-8) {
    f = 1.0 - u / 3.0 + 2.0 * u * u / 15.0;
  } else if (t > 1.0) {
    double s = std::acosh(t);
    f = s / std::sinh(s);
  } else {
    double s = std::acos(std::fmax(-1.0, t));
    f = s / std::sin(s);
  }
  return Mat2r{m.a - t, m.b, m.c, m.d - t} * f;
}

}  // namespace cocycle

#endif  // COCYCLE_MAT2_HPP_
