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


#include "cocycle/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "cocycle/error.hpp"
#include "cocycle/rotation.hpp"

namespace cocycle {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

double trace_at(const Loop& l, double x) { return l.at(x).trace(); }

double derivative_at(const Loop& l, double x) {
  if (l.trace_derivative) return l.trace_derivative(x);
  const double h = 1e-7;
  return (trace_at(l, x + h) - trace_at(l, x - h)) / (2 * h);
}

// Root of |tr| - 2 in [a, b] given a sign change.
double boundary_root(const Loop& l, double a, double b) {
  auto g = [&](double x) { return std::abs(trace_at(l, x)) - 2; };
  double ga = g(a);
  for (int it = 0; it < 60 && b - a > 1e-15; ++it) {
    double m = 0.5 * (a + b);
    double gm = g(m);
    if ((gm > 0) == (ga > 0)) {
      a = m;
      ga = gm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

// Cell test with the local tolerance 10 * h * L. `elliptic` selects the
// |tr| <= 2 - tol side, otherwise |tr| >= 2 + tol with a fixed sign.
bool cell_certified(const Loop& l, bool elliptic, double a, double b, double ta,
                    double tb, double da, double db, int depth, double& extreme) {
  double h = b - a;
  double lip = std::max({std::abs(da), std::abs(db), std::abs(tb - ta) / h});
  double tol = 10 * h * lip;
  if (elliptic) {
    double m = std::max(std::abs(ta), std::abs(tb));
    extreme = std::max(extreme, m);
    if (m <= 2 - tol) return true;
    if (m >= 2 || depth == 0) return false;
  } else {
    double m = std::min(std::abs(ta), std::abs(tb));
    extreme = std::min(extreme, m);
    if (ta * tb > 0 && m >= 2 + tol) return true;
    if (m <= 2 || ta * tb <= 0 || depth == 0) return false;
  }
  double c = 0.5 * (a + b);
  double tc = trace_at(l, c);
  double dc = derivative_at(l, c);
  return cell_certified(l, elliptic, a, c, ta, tc, da, dc, depth - 1, extreme) &&
         cell_certified(l, elliptic, c, b, tc, tb, dc, db, depth - 1, extreme);
}

}  // namespace

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::kTotallyElliptic: return "totally-elliptic";
    case Verdict::kTotallyHyperbolic: return "totally-hyperbolic";
    case Verdict::kMixed: return "mixed";
    case Verdict::kUndetermined: return "undetermined";
  }
  return "?";
}

EllipticityReport ellipticity_report(const Loop& loop, int grid_size) {
  require(grid_size >= 256, ErrorCode::kParameter, "ellipticity_report: grid_size must be >= 256");
  const int n = grid_size;
  EllipticityReport r;
  r.x.resize(n);
  r.trace.resize(n);
  r.kind.resize(n);
  std::vector<double> deriv(n);
  double max_abs = 0;
  bool any_ell = false, any_hyp = false, any_par = false;
  for (int i = 0; i < n; ++i) {
    double x = static_cast<double>(i) / n;
    double t = trace_at(loop, x);
    r.x[i] = x;
    r.trace[i] = t;
    deriv[i] = derivative_at(loop, x);
    double a = std::abs(t);
    max_abs = std::max(max_abs, a);
    if (std::abs(a - 2) < kParabolicTol) {
      r.kind[i] = PointKind::kParabolic;
      any_par = true;
    } else if (a < 2) {
      r.kind[i] = PointKind::kElliptic;
      any_ell = true;
    } else {
      r.kind[i] = PointKind::kHyperbolic;
      any_hyp = true;
    }
  }
  r.delta = 2 - max_abs;

  auto inside = [&](int i) { return r.kind[i] != PointKind::kHyperbolic; };
  double min_d = std::numeric_limits<double>::infinity();
  double max_d = 0;
  for (double d : deriv) max_d = std::max(max_d, std::abs(d));
  for (int i = 0; i < n; ++i) {
    if (r.kind[i] == PointKind::kParabolic) min_d = std::min(min_d, std::abs(deriv[i]));
  }

  int start = -1;
  for (int i = 0; i < n; ++i) {
    if (!inside(i)) {
      start = i;
      break;
    }
  }
  if (start < 0) {
    r.crossings.push_back({0.0, 1.0});
  } else {
    const double h = 1.0 / n;
    for (int k = 1; k <= n; ++k) {
      int i = (start + k) % n;
      int prev = (start + k - 1) % n;
      if (!inside(i) || inside(prev)) continue;
      // run begins at i
      double lo_base = (start + k - 1) * h;
      double lo = boundary_root(loop, lo_base, lo_base + h);
      int len = 0;
      while (inside((start + k + len) % n)) ++len;
      double hi_base = (start + k + len - 1) * h;
      double hi = boundary_root(loop, hi_base, hi_base + h);
      min_d = std::min({min_d, std::abs(derivative_at(loop, lo)),
                        std::abs(derivative_at(loop, hi))});
      double shift = std::floor(lo);
      r.crossings.push_back({lo - shift, hi - shift});
    }
  }
  r.min_transversal_derivative = min_d;
  r.transversal = min_d > 1e-6 * std::max(1.0, max_d);

  if (any_par || (any_ell && any_hyp)) {
    r.verdict = Verdict::kMixed;
    return r;
  }
  bool elliptic = any_ell;
  double extreme = elliptic ? 0.0 : std::numeric_limits<double>::infinity();
  bool ok = true;
  for (int i = 0; i < n && ok; ++i) {
    int j = (i + 1) % n;
    double b = static_cast<double>(i + 1) / n;
    ok = cell_certified(loop, elliptic, r.x[i], b, r.trace[i], r.trace[j], deriv[i],
                        deriv[j], 30, extreme);
  }
  if (elliptic) r.delta = std::min(r.delta, 2 - extreme);
  if (!ok) {
    r.verdict = Verdict::kUndetermined;
  } else {
    r.verdict = elliptic ? Verdict::kTotallyElliptic : Verdict::kTotallyHyperbolic;
  }
  return r;
}

EllipticityReport ellipticity_report(const Potential& v, double e, const Frequency& pq,
                                     int grid_size) {
  return ellipticity_report(Loop::q_step(v, e, pq), resolving_grid(v, grid_size));
}

namespace {

// Distance of the dominant eigenvalue modulus to 1, minimised over the grid.
std::pair<double, double> unit_circle_gap(const Loop& loop, double nu, int n) {
  double gap = std::numeric_limits<double>::infinity();
  double where = 0;
  for (int i = 0; i < n; ++i) {
    double x = static_cast<double>(i) / n;
    double g = std::abs(spectral_radius_from_trace(loop.at_complex(cplx(x, nu)).trace()) - 1);
    if (g < gap) {
      gap = g;
      where = x;
    }
  }
  return {gap, where};
}

}  // namespace

RegularityResult regularity_check(const Loop& loop, int grid_size) {
  if (!loop.analytic()) fail(ErrorCode::kUnsupported, "regularity_check: loop is not analytic");
  RegularityResult res;
  res.report = ellipticity_report(loop, grid_size);
  const EllipticityReport& r = res.report;
  if (r.verdict == Verdict::kTotallyElliptic || r.verdict == Verdict::kUndetermined) {
    res.witness.reason = std::string("no hyperbolic phase certified (") +
                         verdict_name(r.verdict) + ")";
    return res;
  }
  if (!r.transversal) {
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i < static_cast<int>(r.x.size()); ++i) {
      if (r.kind[i] != PointKind::kParabolic) continue;
      double d = std::abs(derivative_at(loop, r.x[i]));
      if (d < worst) {
        worst = d;
        res.witness.x = r.x[i];
      }
    }
    for (const Interval& c : r.crossings) {
      for (double x : {c.lo, c.hi}) {
        double d = std::abs(derivative_at(loop, x));
        if (d < worst) {
          worst = d;
          res.witness.x = frac(x);
        }
      }
    }
    res.witness.reason = "trace derivative vanishes on the crossing set";
    return res;
  }

  const int n = grid_size;
  const double strip = std::min(loop.strip, 1.0);
  const double gap_floor = 1e-6;
  const double tol = std::min(1e-4, 1e-3 * strip);
  const int coarse = 32;
  auto ok = [&](double nu) { return unit_circle_gap(loop, nu, n).first > gap_floor; };

  double lo = 0, hi = -1;
  for (int k = 1; k <= coarse; ++k) {
    double nu = strip * k / coarse;
    if (ok(nu)) {
      lo = nu;
    } else {
      if (lo > 0) {
        hi = nu;
        break;
      }
    }
  }
  if (lo == 0) {
    double nu = strip / coarse;
    for (int m = 0; m < 30 && lo == 0; ++m) {
      nu *= 0.5;
      if (ok(nu)) lo = nu;
    }
    if (lo == 0) {
      res.witness.nu = nu;
      res.witness.x = unit_circle_gap(loop, nu, n).second;
      res.witness.reason = "eigenvalue on the unit circle for every small nu";
      return res;
    }
    hi = 2 * lo;
    if (ok(hi)) hi = -1;
  }
  if (hi > 0) {
    while (hi - lo > tol) {
      double mid = 0.5 * (lo + hi);
      (ok(mid) ? lo : hi) = mid;
    }
  }
  res.regular = true;
  res.h_prime = lo;
  res.witness.reason = "transversal crossings";
  if (!r.crossings.empty()) res.witness.x = r.crossings.front().lo;
  return res;
}

EigenBranch eigen_branch(const Loop& loop, double nu, int grid_size) {
  if (!loop.analytic()) fail(ErrorCode::kUnsupported, "eigen_branch: loop is not analytic");
  require(nu > 0, ErrorCode::kParameter, "eigen_branch: nu must be positive");
  if (nu > loop.strip) fail(ErrorCode::kStripViolation, "eigen_branch: nu outside the strip");
  double want = std::max({static_cast<double>(grid_size), 16384.0, std::ceil(8 / nu)});
  const int n = static_cast<int>(std::min(want, 4194304.0));

  EigenBranch b;
  b.nu = nu;
  b.lambda.resize(n);
  double min_mod = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    double x = static_cast<double>(i) / n;
    cplx t = loop.at_complex(cplx(x, nu)).trace();
    cplx mu = dominant_eigenvalue(t);
    if (i > 0 && std::abs(1.0 / mu - b.lambda[i - 1]) < std::abs(mu - b.lambda[i - 1])) {
      mu = 1.0 / mu;
    }
    if (std::abs(mu) <= 1 + 1e-12) {
      fail(ErrorCode::kRegularity,
           "eigen_branch: eigenvalue on the unit circle at x=" + std::to_string(x));
    }
    b.lambda[i] = mu;
    min_mod = std::min(min_mod, std::abs(mu));
  }
  b.spectral_radius_min = min_mod;

  // Unwrapped argument, closing the loop at x = 1.
  std::vector<double> arg(n);
  arg[0] = std::arg(b.lambda[0]);
  for (int i = 1; i < n; ++i) arg[i] = arg[i - 1] + std::arg(b.lambda[i] / b.lambda[i - 1]);
  double total = arg[n - 1] + std::arg(b.lambda[0] / b.lambda[n - 1]) - arg[0];
  double w = total / kTwoPi;
  double wi = std::nearbyint(w);
  b.winding_defect = std::abs(w - wi);
  if (b.winding_defect > 0.01) {
    fail(ErrorCode::kNumerical, "eigen_branch: argument winding is not an integer");
  }
  b.r_a = static_cast<int>(-wi);

  double mean_log = 0, mean_im = 0;
  for (int i = 0; i < n; ++i) {
    double x = static_cast<double>(i) / n;
    mean_log += std::log(std::abs(b.lambda[i]));
    mean_im += arg[i] - kTwoPi * wi * x;
  }
  mean_log /= n;
  mean_im /= n;
  b.mean_log_modulus = mean_log;
  b.theta_bar = cplx(mean_log - kTwoPi * b.r_a * nu, mean_im);
  b.r_a_nonnegative = b.r_a >= 0;
  b.re_theta_bar_nonnegative = b.theta_bar.real() >= -1e-6;
  return b;
}

}  // namespace cocycle
