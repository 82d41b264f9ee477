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


#include "cocycle/reduce.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>

#include "cocycle/error.hpp"

namespace cocycle {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap_pi(double a) { return a - 2 * kPi * std::nearbyint(a / (2 * kPi)); }

double dist_to_pi_z(double a) { return std::abs(a - kPi * std::nearbyint(a / kPi)); }

int round_grid(int n, int q) {
  int m = 2 * q;
  return ((std::max(n, 2) + m - 1) / m) * m;
}

int orbit_shift(const Frequency& pq, int n) {
  return static_cast<int>((static_cast<int64_t>(pq.p()) * (n / pq.q())) % n);
}

// q-fold product at p/q on the grid, using index shifts.
std::vector<Mat2r> grid_q_product(const std::vector<Mat2r>& a, int q, int s) {
  int n = static_cast<int>(a.size());
  std::vector<Mat2r> out(n);
  for (int i = 0; i < n; ++i) {
    Mat2r m = Mat2r::identity();
    for (int k = 0; k < q; ++k) m = a[(i + static_cast<int64_t>(k) * s) % n] * m;
    out[i] = m;
  }
  return out;
}

Mat2r loop_q_product(const Loop& loop, const Frequency& pq, double x) {
  Mat2r m = Mat2r::identity();
  for (int64_t k = 0; k < pq.q(); ++k) m = loop.at(frac(x + static_cast<double>(k * pq.p()) / pq.q())) * m;
  return m;
}

Mat2r conjugator_at(const Loop& loop, const Frequency& pq, double x) {
  double a;
  return elliptic_conjugator(loop_q_product(loop, pq, x), &a);
}

std::vector<double> unwrap_closed(const std::vector<double>& angle, const char* what) {
  int n = static_cast<int>(angle.size());
  std::vector<double> out(n);
  out[0] = angle[0];
  for (int i = 1; i < n; ++i) out[i] = out[i - 1] + wrap_pi(angle[i] - out[i - 1]);
  double close = out[n - 1] + wrap_pi(angle[0] - out[n - 1]) - out[0];
  if (std::abs(close) > 1e-6) {
    fail(ErrorCode::kUnsupported, std::string(what) + ": angle function has nonzero degree");
  }
  return out;
}

template <class F>
auto staged(const char* stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    std::string msg = e.what();
    if (msg.rfind(std::string(stage) + ":", 0) == 0) throw;
    throw Error(e.code(), std::string(stage) + ": " + msg);
  }
}

}  // namespace

void Sl2Field::set(int i, const Mat2r& m) {
  a[i] = 0.5 * (m.a - m.d);
  b[i] = m.b;
  c[i] = m.c;
}

Sl2Field Sl2Field::resampled(int m, double s) const {
  Sl2Field out;
  out.a = resample(a, m, s);
  out.b = resample(b, m, s);
  out.c = resample(c, m, s);
  return out;
}

Sl2Field Sl2Field::shifted(double s) const { return resampled(size(), s); }

double Sl2Field::norm(double r) const {
  return std::max({fourier_norm(a, r), fourier_norm(b, r), fourier_norm(c, r)});
}

double Sl2Field::sup() const {
  double m = 0;
  for (int i = 0; i < size(); ++i) m = std::max({m, std::abs(a[i]), std::abs(b[i]), std::abs(c[i])});
  return m;
}

Mat2r elliptic_conjugator(const Mat2r& m, double* angle) {
  double t = 0.5 * m.trace();
  if (!(std::abs(t) < 1)) {
    fail(ErrorCode::kEllipticityMargin, "elliptic_conjugator: |tr| >= 2");
  }
  double a = (m.c > 0 ? 1.0 : -1.0) * std::acos(t);
  double sa = std::sin(a);
  Mat2r nm{(m.a - t) / sa, m.b / sa, m.c / sa, (m.d - t) / sa};
  double beta = 1 / std::sqrt(nm.c);
  if (angle) *angle = a;
  return {beta, nm.a * beta, 0.0, 1 / beta};
}

EllipticLoopForm elliptic_loop_diagonalize(const Loop& loop, int grid_size) {
  require(grid_size >= 2, ErrorCode::kParameter, "elliptic_loop_diagonalize: grid too small");
  EllipticLoopForm f;
  int n = grid_size;
  f.x.resize(n);
  f.b.resize(n);
  f.a.resize(n);
  f.c.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double x = static_cast<double>(i) / n;
    Mat2r m = loop.at(x);
    if (!(std::abs(m.trace()) < 2)) {
      fail(ErrorCode::kEllipticityMargin,
           "elliptic_loop_diagonalize: not elliptic at x=" + std::to_string(x));
    }
    f.x[i] = x;
    f.b[i] = elliptic_conjugator(m, &f.a[i]);
    f.residual = std::max(f.residual, max_abs_diff(f.b[i].sl_inverse() * m * f.b[i], rotation(f.a[i])));
  }
  // The pointwise eigenbasis is a function of A(x) alone, so B(1) = B(0) and
  // the winding correction vanishes.
  double a1;
  f.periodicity_defect = max_abs_diff(elliptic_conjugator(loop.at(1.0), &a1), f.b[0]);
  return f;
}

PeriodicNormalForm periodic_normal_form(const Loop& loop, const Frequency& pq, int grid_size) {
  require(pq.is_rational(), ErrorCode::kParameter, "periodic_normal_form: needs rational p/q");
  const int q = static_cast<int>(pq.q());
  const int n = round_grid(grid_size, q);
  const int s = orbit_shift(pq, n);
  PeriodicNormalForm r;
  r.pq = pq;
  r.x.resize(n);
  std::vector<Mat2r> a(n);
  for (int i = 0; i < n; ++i) {
    r.x[i] = static_cast<double>(i) / n;
    a[i] = loop.at(r.x[i]);
  }
  std::vector<Mat2r> aq = grid_q_product(a, q, s);
  r.b.resize(n);
  for (int i = 0; i < n; ++i) {
    if (!(std::abs(aq[i].trace()) < 2)) {
      fail(ErrorCode::kPrecondition,
           "periodic_normal_form: q-step product not elliptic at x=" + std::to_string(r.x[i]));
    }
    double ang;
    r.b[i] = elliptic_conjugator(aq[i], &ang);
  }
  std::vector<double> raw(n);
  std::vector<Mat2r> cm(n);
  for (int i = 0; i < n; ++i) {
    cm[i] = r.b[(i + s) % n].sl_inverse() * a[i] * r.b[i];
    raw[i] = rotation_angle(cm[i]);
  }
  r.phi = unwrap_closed(raw, "periodic_normal_form");
  r.psi.assign(n, 0.0);
  r.delta = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    r.residual = std::max(r.residual, max_abs_diff(cm[i], rotation(r.phi[i])));
    for (int k = 0; k < q; ++k) r.psi[i] += r.phi[(i + static_cast<int64_t>(k) * s) % n];
    r.delta = std::min(r.delta, dist_to_pi_z(r.psi[i]));
  }
  if (r.residual > 1e-6) {
    fail(ErrorCode::kNumerical, "periodic_normal_form: residual " + std::to_string(r.residual));
  }
  return r;
}

CohomologicalSolution cohomological_solve(const RealFourier& phi, const Frequency& alpha,
                                          int cutoff, double divisor_floor) {
  if (alpha.is_rational()) {
    fail(ErrorCode::kUnsupported, "cohomological_solve: rational frequency " + alpha.str());
  }
  require(cutoff >= 1, ErrorCode::kParameter, "cohomological_solve: cutoff must be >= 1");
  int kmax = std::min(cutoff, phi.n / 2 - 1);
  CohomologicalSolution sol;
  sol.mean = phi.c[0].real();
  sol.theta.n = phi.n;
  sol.theta.c.assign(phi.c.size(), cplx(0, 0));
  sol.min_divisor = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= kmax; ++k) {
    cplx d = std::polar(1.0, 2 * kPi * k * alpha.value()) - 1.0;
    double m = std::abs(d);
    if (m < sol.min_divisor) {
      sol.min_divisor = m;
      sol.min_divisor_k = k;
    }
    if (m < divisor_floor) {
      fail(ErrorCode::kResonance, "cohomological_solve: small divisor at k=" + std::to_string(k));
    }
    sol.theta.c[k] = phi.c[k] / d;
  }
  return sol;
}

ReductionState cheap_trick_step(const ReductionState& st, double alpha, const Frequency& pq,
                                const StepOptions& opt) {
  const int n = static_cast<int>(st.phi.size());
  const int q = static_cast<int>(pq.q());
  require(n % (2 * q) == 0, ErrorCode::kParameter, "cheap_trick_step: grid not a multiple of 2q");
  const int s = orbit_shift(pq, n);
  double fnorm = st.f.norm(st.smoothness);
  if (fnorm > opt.f_threshold) {
    fail(ErrorCode::kPrecondition, "cheap_trick_step: |F| = " + std::to_string(fnorm) +
                                       " above threshold");
  }
  std::vector<Mat2r> d(n);
  for (int i = 0; i < n; ++i) d[i] = sl2_exp(st.f.at(i)) * rotation(st.phi[i]);
  std::vector<Mat2r> m = grid_q_product(d, q, s);

  ReductionState out;
  out.step = st.step + 1;
  out.phi0 = st.phi0;
  out.smoothness = st.smoothness;
  out.ledger = st.ledger;
  out.delta = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    double psi = 0;
    for (int k = 0; k < q; ++k) psi += st.phi[(i + static_cast<int64_t>(k) * s) % n];
    out.delta = std::min(out.delta, dist_to_pi_z(psi));
  }
  if (out.delta < opt.delta_floor) {
    fail(ErrorCode::kEllipticityMargin,
         "cheap_trick_step: psi within " + std::to_string(out.delta) + " of pi Z");
  }

  // Newton on P^-1 M P in SO(2), P = e^Y with Y symmetric traceless.
  out.y = Sl2Field(n);
  for (int i = 0; i < n; ++i) {
    Mat2r p = Mat2r::identity();
    bool done = false;
    for (int it = 0; it < opt.newton_max_iter; ++it) {
      Mat2r x = p.sl_inverse() * m[i] * p;
      double r1 = x.a - x.d, r2 = x.b + x.c;
      if (std::max(std::abs(r1), std::abs(r2)) < opt.newton_tol) {
        done = true;
        break;
      }
      double w = 2 * (x.c - x.b);
      double u = -r2 / w, v = r1 / w;
      p = p * sl2_exp(Mat2r{u, v, v, -u});
    }
    if (!done) {
      fail(ErrorCode::kNumerical,
           "cheap_trick_step: Newton did not converge at x=" + std::to_string(static_cast<double>(i) / n));
    }
    out.y.set(i, sl2_log(p));
  }

  out.phi.resize(n);
  out.rotation_residual = 0;
  for (int i = 0; i < n; ++i) {
    Mat2r w = sl2_exp(out.y.at((i + s) % n) * -1.0) * d[i] * sl2_exp(out.y.at(i));
    out.phi[i] = st.phi[i] + wrap_pi(rotation_angle(w * rotation(-st.phi[i])));
    out.rotation_residual = std::max(out.rotation_residual, max_abs_diff(w, rotation(out.phi[i])));
  }

  double pqv = static_cast<double>(pq.p()) / q;
  Sl2Field ya = out.y.shifted(alpha);
  Sl2Field yp = out.y.shifted(pqv);
  out.f = Sl2Field(n);
  for (int i = 0; i < n; ++i) {
    out.f.set(i, sl2_log(sl2_exp(ya.at(i) * -1.0) * sl2_exp(yp.at(i))));
  }

  LedgerRow row;
  row.step = out.step;
  std::vector<double> drift(n);
  for (int i = 0; i < n; ++i) drift[i] = out.phi[i] - out.phi0[i];
  row.norm_phi_drift = fourier_norm(drift, out.smoothness);
  row.norm_z = out.y.norm(out.smoothness);
  row.norm_f = out.f.norm(std::max(0.0, out.smoothness - out.step));
  row.residual = out.rotation_residual;
  out.ledger.push_back(row);
  return out;
}

namespace {

struct Conjugation {
  const Loop* loop;
  Frequency pq;
  std::vector<Sl2Field> ys;  // construction grid

  // B_j(x_i) and B_j(x_i + shift) on an m-point grid.
  std::vector<Mat2r> at(int m, double shift, size_t steps) const {
    std::vector<Mat2r> out(m);
    for (int i = 0; i < m; ++i) {
      out[i] = conjugator_at(*loop, pq, frac(static_cast<double>(i) / m + shift));
    }
    for (size_t j = 0; j < steps; ++j) {
      Sl2Field y = ys[j].resampled(m, shift);
      for (int i = 0; i < m; ++i) out[i] = out[i] * sl2_exp(y.at(i));
    }
    return out;
  }
};

}  // namespace

ReductionResult cheap_trick_reduce(const Loop& loop, const Frequency& alpha, const Frequency& pq,
                                   const ReduceOptions& opt) {
  require(opt.j_max >= 0 && opt.j_max <= 5, ErrorCode::kParameter,
          "cheap_trick_reduce: j_max must be in [0, 5]");
  require(pq.is_rational(), ErrorCode::kParameter, "cheap_trick_reduce: needs rational p/q");
  if (opt.eta > 0) {
    DiophantineCert c = dpq_membership(alpha, pq, opt.eta, opt.cert_cap);
    if (!c.member) {
      fail(ErrorCode::kPrecondition, "cheap_trick_reduce: alpha not in D_pq(eta)");
    }
  }
  const double a = alpha.value();
  PeriodicNormalForm pnf =
      staged("periodic_normal_form", [&] { return periodic_normal_form(loop, pq, opt.grid); });
  const int n = static_cast<int>(pnf.x.size());
  Conjugation conj{&loop, pq, {}};

  // Initial generator F0 = log(B(x + alpha)^-1 B(x + p/q)).
  ReductionState st;
  st.phi = pnf.phi;
  st.phi0 = pnf.phi;
  st.smoothness = opt.smoothness;
  st.delta = pnf.delta;
  st.f = Sl2Field(n);
  {
    std::vector<Mat2r> ba = conj.at(n, a, 0);
    int s = orbit_shift(pq, n);
    for (int i = 0; i < n; ++i) st.f.set(i, sl2_log(ba[i].sl_inverse() * pnf.b[(i + s) % n]));
  }

  std::vector<Mat2r> amat(n);
  for (int i = 0; i < n; ++i) amat[i] = loop.at(pnf.x[i]);
  auto direct_residual = [&](const ReductionState& state) {
    std::vector<Mat2r> b0 = conj.at(n, 0, conj.ys.size());
    std::vector<Mat2r> ba = conj.at(n, a, conj.ys.size());
    double r = 0;
    for (int i = 0; i < n; ++i) {
      r = std::max(r, max_abs_diff(ba[i].sl_inverse() * amat[i] * b0[i], rotation(state.phi[i])));
    }
    return r;
  };
  LedgerRow row0;
  row0.step = 0;
  row0.norm_f = st.f.norm(opt.smoothness);
  row0.residual = direct_residual(st);
  st.ledger.push_back(row0);

  for (int j = 1; j <= opt.j_max; ++j) {
    if (st.ledger.back().norm_f < 1e-3 * opt.target_tolerance) break;
    st = staged("cheap_trick_step", [&] { return cheap_trick_step(st, a, pq, opt.step); });
    conj.ys.push_back(st.y);
    st.ledger.back().residual = direct_residual(st);
  }

  int cutoff = opt.cutoff > 0 ? opt.cutoff : n / 2 - 1;
  CohomologicalSolution sol = staged("cohomological_solve", [&] {
    return cohomological_solve(to_fourier(st.phi), alpha, cutoff, opt.divisor_floor);
  });
  std::vector<double> theta = to_grid(sol.theta);

  ReductionResult res;
  res.theta0 = sol.mean;
  res.a0 = rotation(sol.mean);
  res.min_divisor = sol.min_divisor;
  res.delta = st.delta;
  res.ledger = st.ledger;

  auto residual_on = [&](int m, std::vector<Mat2r>* keep, double* det_defect) {
    std::vector<Mat2r> b0 = conj.at(m, 0, conj.ys.size());
    std::vector<Mat2r> ba = conj.at(m, a, conj.ys.size());
    std::vector<double> th0 = resample(theta, m, 0);
    std::vector<double> tha = resample(theta, m, a);
    double r = 0;
    for (int i = 0; i < m; ++i) {
      Mat2r x0 = b0[i] * rotation(th0[i]);
      Mat2r xa = ba[i] * rotation(tha[i]);
      double x = static_cast<double>(i) / m;
      r = std::max(r, max_abs_diff(xa.sl_inverse() * loop.at(x) * x0, res.a0));
      if (det_defect) *det_defect = std::max(*det_defect, std::abs(x0.det() - 1));
      if (keep) keep->push_back(x0);
    }
    return r;
  };
  res.x = pnf.x;
  res.construction_residual = residual_on(n, &res.b_total, nullptr);
  res.verification_grid = 2 * n;
  res.final_residual = residual_on(2 * n, nullptr, &res.det_defect);
  if (!std::isfinite(res.final_residual)) {
    fail(ErrorCode::kNumerical, "cheap_trick_reduce: non-finite residual");
  }
  return res;
}

ReductionResult cheap_trick_reduce(const Potential& v, double e, const Frequency& alpha,
                                   const Frequency& pq, const ReduceOptions& opt) {
  Loop l = Loop::from_function([v, e](double x) { return schrodinger_step(v, e, x); });
  return cheap_trick_reduce(l, alpha, pq, opt);
}

double rotation_lattice_defect(double rho, double theta0, double alpha, int kmax) {
  double base = rho - theta0 / (2 * kPi);
  double best = 1;
  for (int k = -kmax; k <= kmax; ++k) {
    double d = base - 0.5 * k * alpha;
    best = std::min(best, std::abs(d - std::nearbyint(d)));
  }
  return best;
}

void write_ledger_csv(std::ostream& os, const std::vector<LedgerRow>& ledger) {
  os << "step,norm_phi_drift,norm_Z,norm_F,residual\n";
  char buf[160];
  for (const LedgerRow& r : ledger) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g\n", r.step, r.norm_phi_drift,
                  r.norm_z, r.norm_f, r.residual);
    os << buf;
  }
}

namespace {

void put_le(std::ofstream& os, double v) {
  uint64_t u;
  std::memcpy(&u, &v, 8);
  unsigned char b[8];
  for (int k = 0; k < 8; ++k) b[k] = static_cast<unsigned char>(u >> (8 * k));
  os.write(reinterpret_cast<const char*>(b), 8);
}

double get_le(const unsigned char* b) {
  uint64_t u = 0;
  for (int k = 0; k < 8; ++k) u |= static_cast<uint64_t>(b[k]) << (8 * k);
  double v;
  std::memcpy(&v, &u, 8);
  return v;
}

}  // namespace

void write_conjugator_dump(const std::string& path, const std::vector<Mat2r>& b) {
  std::ofstream os(path, std::ios::binary);
  if (!os) fail(ErrorCode::kIo, "cannot open " + path);
  for (const Mat2r& m : b) {
    put_le(os, m.a);
    put_le(os, m.b);
    put_le(os, m.c);
    put_le(os, m.d);
  }
  if (!os) fail(ErrorCode::kIo, "write failed: " + path);
}

std::vector<Mat2r> read_conjugator_dump(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) fail(ErrorCode::kIo, "cannot open " + path);
  std::vector<Mat2r> out;
  unsigned char b[32];
  while (is.read(reinterpret_cast<char*>(b), 32)) {
    out.push_back({get_le(b), get_le(b + 8), get_le(b + 16), get_le(b + 24)});
  }
  if (is.gcount() != 0) fail(ErrorCode::kIo, "truncated conjugator dump: " + path);
  return out;
}

}  // namespace cocycle
