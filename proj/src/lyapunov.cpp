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

#include "cocycle/lyapunov.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "cocycle/error.hpp"

namespace cocycle {
namespace {

constexpr double kPi = std::numbers::pi;

double log_spectral_radius(double tr) {
  double a = std::abs(tr);
  if (a <= 2.0) return 0.0;
  return std::log(0.5 * (a + std::sqrt((a - 2.0) * (a + 2.0))));
}

double log_spectral_radius(cplx tr) {
  return std::log(spectral_radius_from_trace(tr));
}

void check_offset(const Potential& v, double nu) {
  if (nu == 0) return;
  require(v.analytic(), ErrorCode::kUnsupported,
          "complex offset needs an analytic potential");
  require(std::abs(nu) <= v.strip_halfwidth(), ErrorCode::kStripViolation,
          "offset nu exceeds the analytic strip");
}

// Mean and standard error of a sample.
void mean_stderr(const std::vector<double>& xs, double& mean, double& se) {
  double s = 0;
  for (double x : xs) s += x;
  mean = s / static_cast<double>(xs.size());
  if (xs.size() < 2) {
    se = 0;
    return;
  }
  double ss = 0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  se = std::sqrt(ss / static_cast<double>(xs.size() - 1) /
                 static_cast<double>(xs.size()));
}

// Signed angle from direction u to direction w, as lines, in (-pi/2, pi/2].
double line_angle(double ux, double uy, double wx, double wy) {
  double ang = std::atan2(ux * wy - uy * wx, ux * wx + uy * wy);
  if (ang > kPi / 2) ang -= kPi;
  if (ang <= -kPi / 2) ang += kPi;
  return ang;
}

}  // namespace

QuadratureResult loop_log_spectral_radius(const Loop& loop, double nu,
                                          int64_t q, double tol) {
  require(q >= 1, ErrorCode::kParameter, "quadrature needs q >= 1");
  using boost::math::quadrature::gauss_kronrod;
  QuadratureResult out;
  const double qd = static_cast<double>(q);
  for (int64_t k = 0; k < q; ++k) {
    double a = static_cast<double>(k) / qd, b = static_cast<double>(k + 1) / qd;
    double err = 0;
    double val;
    if (nu == 0) {
      auto f = [&](double x) { return log_spectral_radius(loop.at(x).trace()); };
      val = gauss_kronrod<double, 31>::integrate(f, a, b, 20, tol, &err);
    } else {
      require(loop.analytic(), ErrorCode::kUnsupported,
              "complex offset needs an analytic loop");
      require(std::abs(nu) <= loop.strip, ErrorCode::kStripViolation,
              "offset nu exceeds the analytic strip");
      auto f = [&](double x) {
        return log_spectral_radius(loop.at_complex(cplx(x, nu)).trace());
      };
      val = gauss_kronrod<double, 31>::integrate(f, a, b, 20, tol, &err);
    }
    out.value += val;
    out.error += err;
  }
  return out;
}

LEEstimate le_estimate(const Potential& v, double e, const Frequency& alpha,
                       const LEOptions& opt) {
  require(opt.n >= 1000, ErrorCode::kParameter, "le_estimate: n must be >= 1000");
  require(opt.phases >= 1, ErrorCode::kParameter, "le_estimate: phases must be >= 1");
  check_offset(v, opt.nu);
  LEEstimate est;
  est.n_phases = opt.phases;
  if (alpha.is_rational()) {
    Loop loop = Loop::q_step(v, e, alpha);
    QuadratureResult r = loop_log_spectral_radius(loop, opt.nu, alpha.q(), opt.quad_tol);
    const double qd = static_cast<double>(alpha.q());
    est.value = r.value / qd;
    est.stderr_ = std::max(r.error / qd, 1e-14 * std::max(1.0, std::abs(est.value)));
    est.convergence_gap = est.stderr_;
    est.n_steps = 0;
    est.quadrature = true;
    return est;
  }
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int64_t half = opt.n / 2;
  const int64_t n = 2 * half;
  std::vector<double> full, first;
  for (int i = 0; i < opt.phases; ++i) {
    double x0 = u(rng);
    double x1 = frac(std::fma(static_cast<double>(half), alpha.value(), x0));
    double lf, lh;
    if (opt.nu == 0) {
      ScaledProduct p1 = scaled_transfer(v, e, alpha.value(), x0, half);
      ScaledProduct p2 = scaled_transfer(v, e, alpha.value(), x1, half);
      lh = p1.log_norm();
      lf = p1.log_scale + p2.log_scale + std::log(op_norm(p2.normalized * p1.normalized));
    } else {
      ScaledProductC p1 = scaled_transfer(v, cplx(e), alpha.value(), cplx(x0, opt.nu), half);
      ScaledProductC p2 = scaled_transfer(v, cplx(e), alpha.value(), cplx(x1, opt.nu), half);
      lh = p1.log_norm();
      lf = p1.log_scale + p2.log_scale + std::log(op_norm(p2.normalized * p1.normalized));
    }
    full.push_back(lf / static_cast<double>(n));
    first.push_back(lh / static_cast<double>(half));
  }
  double mh, seh;
  mean_stderr(full, est.value, est.stderr_);
  mean_stderr(first, mh, seh);
  est.convergence_gap = std::abs(est.value - mh);
  est.n_steps = n;
  return est;
}

LyapunovProfile analyse_profile(std::vector<double> nu, std::vector<double> values,
                                std::vector<double> stderrs, double fit_lo,
                                double fit_hi) {
  require(nu.size() >= 2 && nu.size() == values.size() && nu.size() == stderrs.size(),
          ErrorCode::kParameter, "profile needs matching grids of size >= 2");
  for (size_t i = 1; i < nu.size(); ++i)
    require(nu[i] > nu[i - 1], ErrorCode::kParameter, "nu grid must be strictly increasing");
  for (double x : values)
    require(std::isfinite(x), ErrorCode::kNumerical, "non-finite profile value");
  LyapunovProfile p;
  p.nu = std::move(nu);
  p.values = std::move(values);
  p.stderrs = std::move(stderrs);
  for (size_t i = 1; i + 1 < p.nu.size(); ++i) {
    // Second divided difference scaled to a uniform-step second difference.
    double h1 = p.nu[i] - p.nu[i - 1], h2 = p.nu[i + 1] - p.nu[i];
    double dd = 2.0 * ((p.values[i + 1] - p.values[i]) / h2 -
                       (p.values[i] - p.values[i - 1]) / h1) / (h1 + h2);
    p.second_differences.push_back(dd * h1 * h2);
  }
  if (fit_lo > fit_hi) {
    fit_lo = p.nu.front();
    fit_hi = p.nu.back();
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (size_t i = 0; i < p.nu.size(); ++i) {
    if (p.nu[i] < fit_lo || p.nu[i] > fit_hi) continue;
    sx += p.nu[i];
    sy += p.values[i];
    sxx += p.nu[i] * p.nu[i];
    sxy += p.nu[i] * p.values[i];
    ++m;
  }
  require(m >= 2, ErrorCode::kParameter, "affine fit window holds fewer than 2 points");
  double den = m * sxx - sx * sx;
  p.slope = (m * sxy - sx * sy) / den;
  p.intercept = (sy - p.slope * sx) / m;
  p.acceleration = p.slope / (2.0 * kPi);
  p.quantization_residual = std::abs(p.acceleration - std::nearbyint(p.acceleration));
  return p;
}

LyapunovProfile le_profile(const Potential& v, double e, const Frequency& alpha,
                           const std::vector<double>& nu_grid,
                           const LEOptions& opt, double fit_lo, double fit_hi) {
  std::vector<double> vals, errs;
  for (double nu : nu_grid) {
    LEOptions o = opt;
    o.nu = nu;
    LEEstimate est = le_estimate(v, e, alpha, o);
    vals.push_back(est.value);
    errs.push_back(est.stderr_);
  }
  return analyse_profile(nu_grid, std::move(vals), std::move(errs), fit_lo, fit_hi);
}

HermanBound herman_lower_bound(double K, double lambda, double e) {
  require(std::abs(e) > 2.0, ErrorCode::kDomain, "herman bound needs |E| > 2");
  PoleData p = pole_data(K, lambda);
  double a = std::abs(e);
  HermanBound h;
  h.value = std::log(p.z0) + std::log(0.5 * (a + std::sqrt((a - 2.0) * (a + 2.0))));
  h.informative = h.value > 0;
  return h;
}

UHResult uh_test(const Potential& v, double e, const Frequency& alpha,
                 const UHOptions& opt) {
  require(!alpha.is_rational(), ErrorCode::kParameter, "uh_test needs irrational alpha");
  require(opt.n >= 1 && opt.orbit_length >= opt.n && opt.starts >= 1,
          ErrorCode::kParameter, "uh_test: need n >= 1, orbit_length >= n, starts >= 1");
  require(opt.margin > 0 && opt.margin < 0.5, ErrorCode::kParameter,
          "uh_test: margin must lie in (0, 1/2)");
  const double a = alpha.value();
  const int64_t n = opt.n, T = opt.orbit_length;
  const double growth_floor = 2.0 * std::log(1.0 / opt.margin);
  UHResult res;
  res.min_angle = kPi / 2;
  res.min_log_growth = std::numeric_limits<double>::infinity();
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::vector<double> ux(T + 1), uy(T + 1), sx(T + 1), sy(T + 1);
  for (int s = 0; s < opt.starts; ++s) {
    double xs = (s + uni(rng)) / opt.starts;
    // Forward pass from x_s - n alpha: u_t at fibers t = 0..T.
    double x = frac(xs - frac(static_cast<double>(n) * a));
    double px = 1, py = 0;
    for (int64_t t = -n; t <= T; ++t) {
      if (t >= 0) {
        ux[t] = px;
        uy[t] = py;
      }
      if (t == T) break;
      double w = e - v(x);
      double nx = w * px - py;
      py = px;
      px = nx;
      double r = std::hypot(px, py);
      px /= r;
      py /= r;
      x += a;
      if (x >= 1.0) x -= 1.0;
    }
    // Backward pass from x_{T+n}: s_t = A_{T+n-t}(x_t)^{-1} w.
    double y = frac(xs + frac(static_cast<double>(T + n) * a));
    double qx = 0, qy = 1;
    for (int64_t t = T + n; t >= 0; --t) {
      if (t <= T) {
        sx[t] = qx;
        sy[t] = qy;
      }
      if (t == 0) break;
      y -= a;
      if (y < 0) y += 1.0;
      // Inverse of S_W is [[0, 1], [-1, W]].
      double w = e - v(y);
      double nx = qy;
      double ny = -qx + w * qy;
      double r = std::hypot(nx, ny);
      qx = nx / r;
      qy = ny / r;
    }
    std::vector<double> aperture(T + 1);
    for (int64_t t = 0; t <= T; ++t) {
      double ang = std::abs(line_angle(ux[t], uy[t], sx[t], sy[t]));
      aperture[t] = 0.5 * ang;
      res.min_angle = std::min(res.min_angle, ang);
    }
    if (s == 0) {
      double c = std::atan2(uy[0], ux[0]);
      if (c < 0) c += kPi;
      if (c >= kPi) c -= kPi;
      res.cone_center = c;
      res.cone_aperture = aperture[0];
    }
    // Block products: growth and strict cone inclusion.
    double bx = xs;
    for (int64_t t0 = 0; t0 + n <= T; t0 += n) {
      Mat2r m = Mat2r::identity();
      double logs = 0;
      for (int64_t k = 0; k < n; ++k) {
        double w = e - v(bx);
        m = Mat2r{w * m.a - m.c, w * m.b - m.d, m.a, m.b};
        double sc = std::abs(m.a) + std::abs(m.b) + std::abs(m.c) + std::abs(m.d);
        m = m * (1.0 / sc);
        logs += std::log(sc);
        bx += a;
        if (bx >= 1.0) bx -= 1.0;
      }
      res.min_log_growth = std::min(res.min_log_growth, logs + std::log(op_norm(m)));
      double ap = aperture[t0], at = aperture[t0 + n];
      double worst;
      if (at <= 0) {
        worst = std::numeric_limits<double>::infinity();
      } else {
        double c = std::cos(ap), sn = std::sin(ap);
        double rpx = c * ux[t0] - sn * uy[t0], rpy = sn * ux[t0] + c * uy[t0];
        double rmx = c * ux[t0] + sn * uy[t0], rmy = -sn * ux[t0] + c * uy[t0];
        m.apply(rpx, rpy);
        m.apply(rmx, rmy);
        double fp = line_angle(ux[t0 + n], uy[t0 + n], rpx, rpy);
        double fm = line_angle(ux[t0 + n], uy[t0 + n], rmx, rmy);
        const double tiny = 1e-12;  // edge images collapse onto u at rounding level
        if (fp < -tiny || fm > tiny)
          worst = std::numeric_limits<double>::infinity();
        else
          worst = std::max(std::abs(fp), std::abs(fm)) / at;
      }
      res.worst_inclusion = std::max(res.worst_inclusion, worst);
    }
    res.fibers += T + 1;
  }
  res.uniformly_hyperbolic = res.min_angle >= opt.margin &&
                             res.worst_inclusion <= 1.0 - opt.margin &&
                             res.min_log_growth >= growth_floor;
  return res;
}

}  // namespace cocycle
