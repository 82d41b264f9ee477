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


// Acceptance run: one PASS/FAIL line per criterion. Exit status is the number
// of failed criteria (capped at 1 for ctest).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <numeric>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "cocycle/classify.hpp"
#include "cocycle/cocycle.hpp"
#include "cocycle/lab.hpp"
#include "cocycle/lyapunov.hpp"
#include "cocycle/reduce.hpp"
#include "cocycle/rotation.hpp"

using namespace cocycle;

namespace {

constexpr double kPi = std::numbers::pi;

// Pinned tolerances.
constexpr double kTraceRelTol = 1e-9;
constexpr double kTraceSeconds = 5;
constexpr double kFigLeFloor = 0.05;
constexpr double kFigLeZero = 0.01;
constexpr double kFigSeconds = 60;
constexpr double kHermanSigmas = 3;
constexpr double kZ0 = 0.990050;
constexpr double kZ0Tol = 1e-6;
constexpr double kProfileSigmas = 3;
constexpr double kSlopeRel = 0.05;
constexpr double kQuantTol = 0.1;
constexpr double kEllipticMargin = 0.01;
constexpr double kReduceResidual = 1e-6;
constexpr double kRotationDefect = 1e-4;
constexpr double kFreeRhoTol = 1e-4;
constexpr double kQCompatTol = 1e-5;
constexpr double kDensityFloor = 0.8;
constexpr double kDensitySigmas = 3;

const Potential kPeak = Potential::poisson_peak(10, 1e4);

unsigned threads() { return std::max(1u, std::thread::hardware_concurrency()); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

Outcome trace_oracle() {
  auto t0 = std::chrono::steady_clock::now();
  Potential v = Potential::peaky_bump(0.01, 0.11, 20);  // support length 0.1 < 1/8
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> ux(0, 1), ue(-3, 3);
  double worst = 0;
  for (int q = 1; q <= 8; ++q) {
    Frequency f = Frequency::rational(q == 1 ? 0 : 1, q);
    for (int t = 0; t < 1000; ++t) {
      double x = ux(rng), e = ue(rng);
      worst = std::max(worst, rel(trace_closed_form(v, e, q, x), q_step(v, e, f, x).trace()));
    }
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {worst < kTraceRelTol && secs < kTraceSeconds,
          "max rel err " + fmt("%.2e", worst) + ", " + fmt("%.2f s", secs)};
}

// Criterion 2 scan, reused by criterion 8 for DOS monotonicity.
struct PeakScan {
  std::vector<double> e, le, dos;
  double seconds = 0;
};

const PeakScan& peak_scan() {
  static PeakScan s = [] {
    PeakScan r;
    auto t0 = std::chrono::steady_clock::now();
    const int n = 512;
    r.e.resize(n);
    r.le.resize(n);
    r.dos.resize(n);
    parallel_for(n, threads(), [&](int64_t i) {
      r.e[i] = -3 + 13.0 * i / (n - 1);
      LEOptions o;
      o.n = 200000;
      o.seed = row_seed(2, i);
      r.le[i] = le_estimate(kPeak, r.e[i], Frequency::golden(), o).value;
      RotationOptions ro;
      ro.n = 100000;
      r.dos[i] = density_of_states(rotation_number(kPeak, r.e[i], Frequency::golden(), ro));
    });
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
  }();
  return s;
}

Outcome le_scan() {
  const PeakScan& s = peak_scan();
  double min_out = INFINITY, min_in = INFINITY;
  for (size_t i = 0; i < s.e.size(); ++i) {
    if (std::abs(s.e[i]) > 2.1) min_out = std::min(min_out, s.le[i]);
    if (std::abs(s.e[i]) <= 2) min_in = std::min(min_in, s.le[i]);
  }
  return {min_out > kFigLeFloor && min_in < kFigLeZero && s.seconds < kFigSeconds,
          "min LE |E|>2.1 = " + fmt("%.4f", min_out) + ", min LE in [-2,2] = " +
              fmt("%.2e", min_in) + ", " + fmt("%.1f s", s.seconds) + " on " +
              std::to_string(threads()) + " thread(s)"};
}

Outcome herman() {
  double z0 = pole_data(10, 1e4).z0;
  bool ok = std::abs(z0 - kZ0) < kZ0Tol;
  double worst = INFINITY;
  std::vector<double> margin(20);
  parallel_for(20, threads(), [&](int64_t i) {
    double e = 2.5 + 5.5 * i / 19;
    LEOptions o;
    o.n = 200000;
    o.seed = row_seed(3, i);
    LEEstimate est = le_estimate(kPeak, e, Frequency::golden(), o);
    margin[i] = est.value - (herman_lower_bound(10, 1e4, e).value - kHermanSigmas * est.stderr_);
  });
  for (double m : margin) worst = std::min(worst, m);
  ok = ok && worst >= 0;
  return {ok, "z0 = " + fmt("%.6f", z0) + ", min(LE - bound + 3 sd) = " + fmt("%.3e", worst)};
}

Outcome k_independence() {
  bool ok = true;
  for (double lambda : {1.0, 100.0, 1e4})
    for (double e : {-7.0, -2.5, 2.01, 3.0, 8.0, 25.0})
      ok = ok && herman_lower_bound(10, lambda, e).value == herman_lower_bound(100, lambda, e).value;
  return {ok, "18 (lambda, E) pairs compared bitwise"};
}

Outcome profile() {
  Frequency q1 = Frequency::rational(0, 1);
  Loop l = Loop::q_step(kPeak, 5, q1);
  RegularityResult reg = regularity_check(l, resolving_grid(kPeak, 1024));
  if (!reg.regular) return {false, "q=1 map at E=5 not certified regular"};
  std::vector<double> nus;
  for (int k = 1; k <= 16; ++k) nus.push_back(reg.h_prime * k / 16);
  LyapunovProfile p = le_profile(kPeak, 5, q1, nus, LEOptions{});
  EigenBranch b = eigen_branch(l, reg.h_prime / 2, 1024);
  double worst_d2 = 0;
  bool d2_ok = true;
  for (size_t i = 0; i < p.second_differences.size(); ++i) {
    double sd = std::sqrt(p.stderrs[i] * p.stderrs[i] + 4 * p.stderrs[i + 1] * p.stderrs[i + 1] +
                          p.stderrs[i + 2] * p.stderrs[i + 2]);
    // quadrature error floor: stderr reports the adaptive rule's error estimate
    sd = std::max(sd, 1e-12);
    worst_d2 = std::max(worst_d2, std::abs(p.second_differences[i]) / sd);
    d2_ok = d2_ok && std::abs(p.second_differences[i]) <= kProfileSigmas * sd;
  }
  double target = 2 * kPi * b.r_a;
  bool slope_ok = b.r_a != 0 && std::abs(p.slope - target) <= kSlopeRel * std::abs(target);
  double quant = std::abs(p.slope / (2 * kPi) - std::nearbyint(p.slope / (2 * kPi)));
  return {d2_ok && slope_ok && quant < kQuantTol,
          "h' = " + fmt("%.4e", reg.h_prime) + ", r_A = " + std::to_string(b.r_a) +
              ", slope/2pi = " + fmt("%.5f", p.slope / (2 * kPi)) + ", max |d2|/sd = " +
              fmt("%.2f", worst_d2)};
}

Outcome two_step_window() {
  double lo = INFINITY, hi = -INFINITY;
  for (double a : {0.25, 0.5, 0.75}) {
    for (int i = 0; i < 64; ++i) {
      double e = -0.15 + 0.05 * i / 63;
      for (int j = 0; j < 64; ++j) {
        double x = j / 64.0;
        double tr = (schrodinger_step(kPeak, e, frac(x + a)) * schrodinger_step(kPeak, e, x)).trace();
        lo = std::min(lo, tr);
        hi = std::max(hi, tr);
      }
    }
  }
  return {lo >= -2 + kEllipticMargin && hi <= 2 - kEllipticMargin,
          "traces in [" + fmt("%.5f", lo) + ", " + fmt("%.5f", hi) + "]"};
}

Outcome reduction() {
  const Frequency half = Frequency::rational(1, 2);
  const std::vector<double> energies{-0.14, -0.12, -0.105};
  struct Run {
    double e = 0, alpha = 0, residual = 0, defect = 0;
    bool monotone = false;
    std::string error;
  };
  std::vector<Run> runs(energies.size() * 2);
  parallel_for(static_cast<int64_t>(runs.size()), threads(), [&](int64_t i) {
    Run& r = runs[i];
    r.e = energies[i / 2];
    std::optional<double> a = sample_dpq(half, 1e-3, 10000, 2e-6, 2e-5, row_seed(7, i));
    if (!a) {
      r.error = "no D_pq sample";
      return;
    }
    r.alpha = *a;
    try {
      ReduceOptions o;
      o.j_max = 3;
      o.cert_cap = 10000;
      Frequency alpha = Frequency::irrational(*a);
      ReductionResult res = cheap_trick_reduce(kPeak, r.e, alpha, half, o);
      r.residual = res.final_residual;
      r.monotone = true;
      for (size_t k = 1; k < res.ledger.size(); ++k)
        r.monotone = r.monotone && res.ledger[k].norm_f <= res.ledger[k - 1].norm_f;
      RotationOptions ro;
      ro.n = 10'000'000;
      double rho = rotation_number(kPeak, r.e, alpha, ro).rho;
      r.defect = rotation_lattice_defect(rho, res.theta0, *a);
    } catch (const Error& e) {
      r.error = e.what();
    }
  });
  bool ok = true;
  double worst_res = 0, worst_def = 0;
  std::string err;
  for (const Run& r : runs) {
    if (!r.error.empty()) err = r.error;
    ok = ok && r.error.empty() && r.monotone && r.residual < kReduceResidual &&
         r.defect < kRotationDefect;
    worst_res = std::max(worst_res, r.residual);
    worst_def = std::max(worst_def, r.defect);
  }
  std::string d = std::to_string(runs.size()) + " runs, max residual " + fmt("%.2e", worst_res) +
                  ", max rotation defect " + fmt("%.2e", worst_def);
  if (!err.empty()) d += ", error: " + err;
  return {ok, d};
}

Loop iterate_loop(const Potential& v, double e, double alpha, int q) {
  return Loop::from_function([v, e, alpha, q](double x) {
    Mat2r m = Mat2r::identity();
    for (int j = 0; j < q; ++j) m = schrodinger_step(v, e, frac(x + j * alpha)) * m;
    return m;
  });
}

Outcome rotation_dos() {
  RotationOptions o;
  o.n = 1'000'000;
  double rho = rotation_number(Potential::zero(), std::sqrt(2.0), Frequency::golden(), o).rho;
  bool ok = std::abs(rho - 0.125) <= kFreeRhoTol;

  const PeakScan& s = peak_scan();
  bool mono = true;
  for (size_t i = 1; i < s.dos.size(); ++i) mono = mono && s.dos[i] >= s.dos[i - 1];
  ScanOptions so;
  so.e_count = 256;
  so.le.n = 1000;
  so.le.phases = 1;
  so.uh = false;
  std::vector<ScanRow> free = run_scan(Potential::zero(), Frequency::golden(), so, threads());
  for (size_t i = 1; i < free.size(); ++i) mono = mono && free[i].dos >= free[i - 1].dos;

  // q-iterates with a totally elliptic two-step product.
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> ua(0.3, 0.7), ue(-0.15, -0.1);
  double worst = 0;
  int samples = 0;
  while (samples < 50) {
    double a = ua(rng), e = ue(rng);
    Loop it = iterate_loop(kPeak, e, a, 2);
    bool elliptic = true;
    for (int j = 0; j < 256 && elliptic; ++j) elliptic = std::abs(it.at(j / 256.0).trace()) < 2;
    if (!elliptic) continue;
    ++samples;
    RotationOptions r1;
    r1.n = 200000;
    RotationOptions r2;
    r2.n = 100000;
    double d = 2 * rotation_number(kPeak, e, Frequency::irrational(a), r1).rho_bar -
               rotation_number(it, Frequency::irrational(frac(2 * a)), r2).rho_bar;
    worst = std::max(worst, std::abs(d - std::nearbyint(d)));
  }
  ok = ok && mono && worst < kQCompatTol;
  return {ok, "rho(sqrt 2) = " + fmt("%.6f", rho) + ", DOS monotone: " + (mono ? "yes" : "no") +
                  ", max q-compat defect " + fmt("%.2e", worst)};
}

Outcome diophantine_density() {
  DensityEstimate d = dpq_density(Frequency::rational(1, 2), 0.1, 100000, 10000, 9);
  return {d.fraction >= kDensityFloor - kDensitySigmas * d.binomial_sd,
          "fraction " + fmt("%.4f", d.fraction) + ", sd " + fmt("%.4f", d.binomial_sd)};
}

Outcome spectrum() {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  std::vector<double> alphas;
  while (alphas.size() < 3) {
    double a = u(rng);
    if (dc1_membership(Frequency::irrational(a), 0.01, 2, 10000).member) alphas.push_back(a);
  }
  bool ok = true;
  std::string d;
  for (double a : alphas) {
    SpectrumResult s = locate_spectrum(kPeak, Frequency::irrational(a), 3, 8, 64, UHOptions{}, threads());
    ok = ok && !s.non_uh.empty();
    d += fmt("alpha %.6f: ", a) + std::to_string(s.non_uh.size()) + " non-UH; ";
  }
  d.resize(d.size() - 2);
  return {ok, d};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"trace oracle equivalence", trace_oracle},
      {"LE scan reproduction", le_scan},
      {"Herman domination", herman},
      {"K-independence of the Herman bound", k_independence},
      {"complexified profile structure", profile},
      {"totally elliptic two-step window", two_step_window},
      {"reduction pipeline", reduction},
      {"rotation number and DOS", rotation_dos},
      {"Diophantine measure", diophantine_density},
      {"spectrum location", spectrum},
  };
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const Error& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("criterion %zu: %s  %s (%s)\n", i + 1, o.pass ? "PASS" : "FAIL",
                criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
