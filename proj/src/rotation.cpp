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

#include "cocycle/rotation.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "cocycle/error.hpp"

namespace cocycle {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2 * std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double wrap_pi(double a) {  // into (-pi, pi]
  a = std::remainder(a, kTwoPi);
  return a <= -kPi ? a + kTwoPi : a;
}

// Lifted angle increment of v under A, given a continuous lift `theta` of the
// polar rotation angle of A. The positive part of A moves directions by less
// than pi/2, so the correction is unambiguous.
double lifted_increment(const Mat2r& m, double theta, double vx, double vy) {
  double wx = m.a * vx + m.b * vy, wy = m.c * vx + m.d * vy;
  double turn = std::atan2(vx * wy - vy * wx, vx * wx + vy * wy);
  return theta + wrap_pi(turn - theta);
}

// Continuous lift of x -> polar angle of A(x) on a reference grid.
class LoopLift {
 public:
  LoopLift(const Loop& loop, int m) : m_(m), ref_(m + 1) {
    double prev = rotation_angle(loop.at(0.0));
    ref_[0] = prev;
    double acc = prev;
    for (int i = 1; i <= m; ++i) {
      double cur = rotation_angle(loop.at(static_cast<double>(i) / m));
      acc += wrap_pi(cur - prev);
      ref_[i] = acc;
      prev = cur;
    }
    double degree = (ref_[m] - ref_[0]) / kTwoPi;
    require(std::abs(degree) < 0.25, ErrorCode::kUnsupported,
            "loop is not homotopic to the identity (degree " +
                std::to_string(std::lround(degree)) + ")");
  }

  double lift(double x, double raw) const {
    double u = frac(x) * m_;
    auto i = std::min(static_cast<int>(u), m_ - 1);
    double w = u - i;
    double ref = ref_[i] + w * (ref_[i + 1] - ref_[i]);
    return raw + kTwoPi * std::nearbyint((ref - raw) / kTwoPi);
  }

 private:
  int m_;
  std::vector<double> ref_;
};

constexpr int kLiftGrid = 8192;

double schrodinger_lift(double w) { return std::atan2(2.0, w); }

// Shared rational-frequency average over a phase grid.
template <class StepFn>
RotationEstimate rational_average(int64_t q, int grid, int64_t max_iter,
                                  StepFn&& steps_at) {
  require(grid >= 2, ErrorCode::kParameter, "rotation: grid must be >= 2");
  std::vector<Mat2r> steps(q);
  std::vector<double> lifts(q);
  double sum = 0, sum_even = 0;
  int used = 0, used_even = 0, excluded = 0;
  for (int i = 0; i < grid; ++i) {
    double x = static_cast<double>(i) / grid;
    steps_at(x, steps, lifts);
    double t = matrix_rotation_turns(steps, lifts, max_iter);
    if (std::isnan(t)) {
      ++excluded;
      continue;
    }
    sum += t;
    ++used;
    if (i % 2 == 0) {
      sum_even += t;
      ++used_even;
    }
  }
  require(used > 0, ErrorCode::kNumerical, "rotation: every phase was excluded");
  RotationEstimate r;
  const double qd = static_cast<double>(q);
  r.rho_bar = sum / used / qd;
  r.rho = frac(r.rho_bar);
  r.convergence_gap = used_even > 0 ? std::abs(r.rho_bar - sum_even / used_even / qd) : 0;
  r.n_steps = grid;
  r.method = RotationMethod::kRationalAverage;
  r.excluded = excluded;
  return r;
}

}  // namespace

const char* rotation_method_name(RotationMethod m) {
  switch (m) {
    case RotationMethod::kOrbitLift: return "orbit-lift";
    case RotationMethod::kRationalAverage: return "rational-average";
    case RotationMethod::kEllipticIntegral: return "elliptic-integral";
  }
  return "unknown";
}

int resolving_grid(const Potential& v, int base) {
  double need = base;
  switch (v.kind()) {
    case PotentialKind::kPoissonPeak:
      // Half-width of the peak is about 1 / (2 pi sqrt(lambda)).
      need = 12.0 * 2.0 * kPi * std::sqrt(v.lambda());
      break;
    case PotentialKind::kPeakyBump:
      need = 64.0 / v.support_length();
      break;
    case PotentialKind::kTabulated:
      need = 4.0 * static_cast<double>(v.samples().size());
      break;
    case PotentialKind::kZero:
      break;
  }
  int n = base;
  while (n < need && n < (1 << 20)) n *= 2;
  return n;
}

double matrix_rotation_turns(const std::vector<Mat2r>& steps,
                             const std::vector<double>& step_lifts,
                             int64_t max_iter) {
  Mat2r m = Mat2r::identity();
  for (const Mat2r& s : steps) m = s * m;
  double tr = m.trace();
  if (std::abs(std::abs(tr) - 2.0) < 1e-8) return kNaN;
  const bool elliptic = std::abs(tr) < 2.0;
  const double c = elliptic ? std::acos(tr / 2.0) / kTwoPi : (tr > 0 ? 0.0 : 0.5);
  double vx = 1, vy = 0, total = 0;
  int64_t done = 0;
  int64_t target = 64;
  while (true) {
    for (; done < target; ++done) {
      for (size_t j = 0; j < steps.size(); ++j) {
        total += lifted_increment(steps[j], step_lifts[j], vx, vy);
        steps[j].apply(vx, vy);
        double r = std::abs(vx) + std::abs(vy);
        vx /= r;
        vy /= r;
      }
    }
    double est = total / kTwoPi / static_cast<double>(done);
    double lo = est - 1.0 / static_cast<double>(done);
    double hi = est + 1.0 / static_cast<double>(done);
    // Candidates k + c and (elliptic only) k - c.
    int found = 0;
    double cand = 0;
    for (double off : elliptic ? std::vector<double>{c, -c} : std::vector<double>{c}) {
      for (double k = std::ceil(lo - off); k <= std::floor(hi - off); k += 1.0) {
        ++found;
        cand = k + off;
      }
    }
    if (found == 1) return cand;
    if (done >= max_iter) return kNaN;
    target = std::min(max_iter, 2 * done);
  }
}

RotationEstimate rotation_number(const Potential& v, double e,
                                 const Frequency& alpha,
                                 const RotationOptions& opt) {
  if (alpha.is_rational()) {
    const int64_t q = alpha.q();
    int grid = resolving_grid(v, opt.grid);
    return rational_average(q, grid, opt.max_circle_steps,
                            [&](double x, std::vector<Mat2r>& s, std::vector<double>& l) {
                              for (int64_t j = 0; j < q; ++j) {
                                double w = e - v(rational_orbit_point(alpha, x, j));
                                s[j] = schrodinger_matrix(w);
                                l[j] = schrodinger_lift(w);
                              }
                            });
  }
  require(opt.n >= 1000, ErrorCode::kParameter, "rotation_number: n must be >= 1000");
  // Schrodinger steps turn directions by an amount in (-pi/2, 3pi/2).
  double x = frac(opt.x0);
  const double a = alpha.value();
  double vx = std::cos(opt.y0), vy = std::sin(opt.y0);
  double ang = std::atan2(vy, vx);
  double total = 0, half_total = 0;
  const int64_t half = opt.n / 2;
  for (int64_t k = 0; k < opt.n; ++k) {
    double w = e - v(x);
    double nx = w * vx - vy;
    vy = vx;
    vx = nx;
    double r = std::abs(vx) + std::abs(vy);
    vx /= r;
    vy /= r;
    double na = std::atan2(vy, vx);
    double d = na - ang;
    if (d < -kPi / 2) d += kTwoPi;
    if (d >= 1.5 * kPi) d -= kTwoPi;
    total += d;
    ang = na;
    if (k + 1 == half) half_total = total;
    x += a;
    if (x >= 1.0) x -= 1.0;
  }
  RotationEstimate r;
  r.rho_bar = total / kTwoPi / static_cast<double>(opt.n);
  r.rho = frac(r.rho_bar);
  r.convergence_gap = std::abs(r.rho_bar - half_total / kTwoPi / static_cast<double>(half));
  r.n_steps = opt.n;
  r.method = RotationMethod::kOrbitLift;
  return r;
}

RotationEstimate rotation_number(const Loop& loop, const Frequency& alpha,
                                 const RotationOptions& opt) {
  LoopLift lift(loop, kLiftGrid);
  if (alpha.is_rational()) {
    const int64_t q = alpha.q();
    return rational_average(q, opt.grid, opt.max_circle_steps,
                            [&](double x, std::vector<Mat2r>& s, std::vector<double>& l) {
                              for (int64_t j = 0; j < q; ++j) {
                                double xj = rational_orbit_point(alpha, x, j);
                                s[j] = loop.at(xj);
                                l[j] = lift.lift(xj, rotation_angle(s[j]));
                              }
                            });
  }
  require(opt.n >= 1000, ErrorCode::kParameter, "rotation_number: n must be >= 1000");
  double x = frac(opt.x0);
  const double a = alpha.value();
  double vx = std::cos(opt.y0), vy = std::sin(opt.y0);
  double total = 0, half_total = 0;
  const int64_t half = opt.n / 2;
  for (int64_t k = 0; k < opt.n; ++k) {
    Mat2r m = loop.at(x);
    total += lifted_increment(m, lift.lift(x, rotation_angle(m)), vx, vy);
    m.apply(vx, vy);
    double r = std::abs(vx) + std::abs(vy);
    vx /= r;
    vy /= r;
    if (k + 1 == half) half_total = total;
    x += a;
    if (x >= 1.0) x -= 1.0;
  }
  RotationEstimate r;
  r.rho_bar = total / kTwoPi / static_cast<double>(opt.n);
  r.rho = frac(r.rho_bar);
  r.convergence_gap = std::abs(r.rho_bar - half_total / kTwoPi / static_cast<double>(half));
  r.n_steps = opt.n;
  r.method = RotationMethod::kOrbitLift;
  return r;
}

RotationEstimate elliptic_rotation_integral(const Potential& v, double e,
                                            const Frequency& pq, double tol) {
  require(pq.is_rational(), ErrorCode::kParameter,
          "elliptic_rotation_integral needs rational p/q");
  const int64_t q = pq.q();
  const int grid = resolving_grid(v, 4096);
  double worst = -1, worst_x = 0, best = 3, best_x = 0;
  for (int i = 0; i < grid; ++i) {
    double x = static_cast<double>(i) / grid;
    double t = std::abs(q_step(v, e, pq, x).trace());
    if (t > worst) {
      worst = t;
      worst_x = x;
    }
    if (t < best) {
      best = t;
      best_x = x;
    }
  }
  if (worst >= 2.0) {
    std::ostringstream os;
    os.precision(17);
    os << "q-step product is not totally elliptic: |tr| = " << worst << " at x = " << worst_x;
    fail(ErrorCode::kPrecondition, os.str());
  }
  using boost::math::quadrature::gauss_kronrod;
  double total = 0, err_total = 0;
  for (int64_t k = 0; k < q; ++k) {
    double lo = static_cast<double>(k) / q, hi = static_cast<double>(k + 1) / q;
    auto f = [&](double x) {
      double t = q_step(v, e, pq, x).trace() / 2.0;
      if (std::abs(t) >= 1.0) {
        std::ostringstream os;
        os.precision(17);
        os << "q-step product is not totally elliptic at x = " << x;
        fail(ErrorCode::kPrecondition, os.str());
      }
      return std::acos(t) / kTwoPi;
    };
    double err = 0;
    total += gauss_kronrod<double, 31>::integrate(f, lo, hi, 20, tol, &err);
    err_total += err;
  }
  // Fix the branch (sign and integer turn) at the most elliptic phase.
  std::vector<Mat2r> steps(q);
  std::vector<double> lifts(q);
  for (int64_t j = 0; j < q; ++j) {
    double w = e - v(rational_orbit_point(pq, best_x, j));
    steps[j] = schrodinger_matrix(w);
    lifts[j] = schrodinger_lift(w);
  }
  double turns = matrix_rotation_turns(steps, lifts, 1 << 20);
  require(!std::isnan(turns), ErrorCode::kNumerical,
          "could not resolve the rotation branch of the q-step product");
  double c = std::acos(q_step(v, e, pq, best_x).trace() / 2.0) / kTwoPi;
  double kp = std::nearbyint(turns - c), km = std::nearbyint(turns + c);
  double s, k;
  if (std::abs(turns - (kp + c)) <= std::abs(turns - (km - c))) {
    s = 1;
    k = kp;
  } else {
    s = -1;
    k = km;
  }
  RotationEstimate r;
  r.rho_bar = (k + s * total) / static_cast<double>(q);
  r.rho = frac(r.rho_bar);
  r.convergence_gap = err_total / static_cast<double>(q);
  r.method = RotationMethod::kEllipticIntegral;
  return r;
}

double density_of_states(const RotationEstimate& rho) {
  double tol = 1e-9;
  if (rho.method == RotationMethod::kOrbitLift && rho.n_steps > 0)
    tol += 1.0 / static_cast<double>(rho.n_steps);
  else
    tol += 1e-6;
  require(rho.rho_bar >= -tol && rho.rho_bar <= 0.5 + tol, ErrorCode::kConsistency,
          "rotation number outside [0, 1/2]: not a Schrodinger cocycle");
  return std::clamp(1.0 - 2.0 * rho.rho_bar, 0.0, 1.0);
}

}  // namespace cocycle
