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


#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "cocycle/lab.hpp"

using namespace cocycle;

namespace {

std::string run(const std::string& sub, const std::string& text, unsigned threads) {
  Config cfg = Config::from_string(text, "test.cfg");
  std::ostringstream os;
  run_subcommand(sub, cfg, os, RunOptions{threads, std::nullopt});
  return os.str();
}

std::string config_error(const std::string& text, const std::string& sub = "scan") {
  try {
    run(sub, text, 1);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kConfig);
    return e.what();
  }
  FAIL("expected a config error");
  return {};
}

// Dense theta-grid solve of the three window inequalities near theta_k = pi k / q.
std::pair<double, double> oracle_window(double K, int q, int k) {
  double lo = INFINITY, hi = -INFINITY;
  const int n = 2'000'000;
  const double tk = std::numbers::pi * k / q, w = 0.5;
  for (int i = 0; i <= n; ++i) {
    double th = tk - w + 2 * w * i / n;
    double s = std::sin(q * th) / std::sin(th), c = std::cos(q * th);
    if (s * c > 0 && K * std::abs(s) < 0.5 && std::abs(2 * c) > 1.5 && std::abs(2 * c) < 2) {
      lo = std::min(lo, 2 * std::cos(th));
      hi = std::max(hi, 2 * std::cos(th));
    }
  }
  return {lo, hi};
}

}  // namespace

TEST_CASE("config diagnostics cite line and field") {
  std::string msg = config_error("[potential]\nkind = poisson-peak\nK = ten\n");
  CHECK(msg.find("test.cfg:3") != std::string::npos);
  CHECK(msg.find("potential.K") != std::string::npos);

  msg = config_error("[scan]\ne_count = 1\n");
  CHECK(msg.find("scan.e_count") != std::string::npos);
  msg = config_error("[scan]\nbogus = 1\n");
  CHECK(msg.find("scan.bogus") != std::string::npos);
  msg = config_error("[potential]\nnormalization = other\n");
  CHECK(msg.find("potential.normalization") != std::string::npos);
  msg = config_error("[frequency]\nalpha = 3/2\n");
  CHECK(msg.find("frequency.alpha") != std::string::npos);
  msg = config_error("[scan]\ne_min = 4\ne_max = 1\n");
  CHECK(msg.find("scan.e_max") != std::string::npos);
  CHECK_THROWS_AS(run("nonsense", "", 1), Error);
}

TEST_CASE("config builds potentials and frequencies") {
  Config c = Config::from_string("[potential]\nK = 10\nlambda = 400\nnormalization = lambda\n");
  Potential v = potential_from_config(c);
  CHECK(v.lambda() == doctest::Approx(100));
  CHECK(potential_from_config(Config::from_string("[potential]\nkind = zero\n")).kind() ==
        PotentialKind::kZero);

  Frequency a = frequency_from_config(Config::from_string("[frequency]\nalpha = 2/5\n"), 0);
  CHECK(a.is_rational());
  CHECK(a.q() == 5);
  a = frequency_from_config(Config::from_string("[frequency]\nalpha = golden\n"), 0);
  CHECK(a.value() == doctest::Approx((std::sqrt(5.0) - 1) / 2).epsilon(1e-15));

  Config d = Config::from_string("[frequency]\ndpq = 1/2\neta = 1e-3\ninner_lo = 2e-6\ninner_hi = 2e-5\n");
  Frequency s1 = frequency_from_config(d, 7), s2 = frequency_from_config(d, 7);
  CHECK(s1.value() == s2.value());
  double off = std::abs(s1.value() - 0.5);
  CHECK(off >= 2e-6);
  CHECK(off <= 2e-5);
  CHECK(dpq_membership(s1, Frequency::rational(1, 2), 1e-3, 10000).member);
}

TEST_CASE("exit code mapping") {
  CHECK(exit_code(ErrorCode::kConfig) == 2);
  CHECK(exit_code(ErrorCode::kParameter) == 2);
  CHECK(exit_code(ErrorCode::kIo) == 2);
  CHECK(exit_code(ErrorCode::kNumerical) == 3);
  CHECK(exit_code(ErrorCode::kResonance) == 3);
  CHECK(exit_code(ErrorCode::kEllipticityMargin) == 3);
}

TEST_CASE("parallel_for covers every index and rethrows") {
  std::vector<int> hit(1000, 0);
  parallel_for(1000, 4, [&](int64_t i) { hit[i] += 1; });
  for (int h : hit) CHECK(h == 1);
  CHECK_THROWS_AS(parallel_for(100, 3, [](int64_t i) {
                    if (i == 37) fail(ErrorCode::kNumerical, "boom");
                  }),
                  Error);
  CHECK(row_seed(1, 2) != row_seed(2, 1));
}

TEST_CASE("free cocycle scan") {
  ScanOptions o;
  o.e_min = -3;
  o.e_max = 3;
  o.e_count = 61;
  o.le.n = 20000;
  o.le.phases = 2;
  o.rotation.n = 100000;
  o.uh_options.orbit_length = 4096;
  o.uh_options.starts = 1;
  std::vector<ScanRow> rows = run_scan(Potential::zero(), Frequency::golden(), o, 2);
  REQUIRE(rows.size() == 61);
  for (size_t i = 0; i < rows.size(); ++i) {
    const ScanRow& r = rows[i];
    if (std::abs(r.e) < 1.9) CHECK(r.le.clamped() < 1e-3);
    if (std::abs(r.e) > 2.1) {
      CHECK(r.le.clamped() > 0.1);
      CHECK(r.uh.value());
    }
    if (std::abs(r.e) < 1.9) CHECK_FALSE(r.uh.value());
    CHECK_FALSE(r.herman.has_value());
    if (i > 0) {
      CHECK(r.rotation.rho <= rows[i - 1].rotation.rho + 1e-12);
      CHECK(r.dos >= rows[i - 1].dos - 1e-12);
    }
  }
  CHECK(std::abs(rows.front().rotation.rho - 0.5) < 1e-4);
  CHECK(std::abs(rows.back().rotation.rho) < 1e-4);
}

TEST_CASE("subcommand output is deterministic across thread counts") {
  const std::string cfg =
      "[run]\nseed = 42\n[potential]\nK = 10\nlambda = 1e4\n[frequency]\nalpha = golden\n"
      "[scan]\ne_min = -3\ne_max = 10\ne_count = 9\nn_steps = 5000\nphases = 2\n"
      "rotation_steps = 5000\n[uh]\norbit_length = 2048\nstarts = 1\n";
  std::string a = run("scan", cfg, 1), b = run("scan", cfg, 3);
  CHECK(a == b);
  CHECK(a.rfind("# cocycle-lab v1\n", 0) == 0);
  CHECK(a.find("E,nu,alpha,n,LE,") != std::string::npos);
  CHECK(run("scan", cfg, 2) == a);
  std::string other = run("scan", cfg + "[run]\n", 1);  // duplicate section is fine
  CHECK(other == a);
}

TEST_CASE("ac window for q=2 matches the dense theta solve") {
  const double K = 10;
  Potential v = Potential::poisson_peak(K, 1e4);
  WindowOptions o;
  o.spectrum = false;
  o.pp_samples = 1;
  o.alpha_offset = 0;
  o.grid = 512;
  WindowReport r = find_windows(v, Frequency::rational(1, 2), o);
  auto oracle = oracle_window(K, 2, 1);
  // frozen oracle output
  CHECK(oracle.first == doctest::Approx(-0.05).epsilon(1e-4));
  CHECK(oracle.second < 0);
  bool found = false;
  for (const WindowSample& s : r.samples) {
    if (s.k != 1 || s.window.rfind("ac", 0) != 0) continue;
    found = true;
    CHECK(s.e_lo > -0.05);
    CHECK(s.e_hi < 0);
    CHECK(s.e_lo == doctest::Approx(oracle.first).epsilon(1e-3));
    CHECK(s.e_hi == doctest::Approx(oracle.second).epsilon(1e-3));
    CHECK(s.margin_sign > 0);
    CHECK(s.margin_amp > 0);
  }
  CHECK(found);
}

TEST_CASE("window soundness for the poisson peak at q=2") {
  Potential v = Potential::poisson_peak(10, 1e4);
  WindowOptions o;
  o.spectrum = false;
  o.ac_samples = 3;
  o.pp_samples = 3;
  o.le.n = 200000;
  o.le.phases = 4;
  WindowReport r = find_windows(v, Frequency::rational(1, 2), o);
  int ac = 0, pp = 0, two_step = 0;
  for (const WindowSample& s : r.samples) {
    if (s.window == "ac") {
      ++ac;
      if (s.k == 0) ++two_step;
      CHECK(s.verdict == "totally-elliptic");
      CHECK(s.delta >= s.delta_k - 1e-12);
      REQUIRE(s.rho_integral.has_value());
      CHECK(std::abs(*s.rho_integral - *s.rho_rational) < 1e-5);
    }
    if (s.window == "pp") {
      ++pp;
      CHECK(s.regularity == "regular");
      CHECK(s.verdict == "mixed");
      REQUIRE(s.le.has_value());
      CHECK(*s.le >= 0.1);
      REQUIRE(s.r_a.has_value());
      CHECK(*s.r_a >= 0);
    }
  }
  CHECK(two_step == 3);
  CHECK(ac >= 3);
  CHECK(pp == 3);
  std::ostringstream os;
  write_windows_csv(os, r);
  CHECK(os.str().rfind("window,k,E_lo,E_hi,delta_k", 0) == 0);
}

TEST_CASE("peaky bump pp window at K=20") {
  Potential v = Potential::peaky_bump(0.1, 0.4, 20);
  WindowOptions o;
  o.spectrum = false;
  o.alpha_offset = 0;
  WindowReport r = find_windows(v, Frequency::rational(0, 1), o);
  int pp = 0;
  for (const WindowSample& s : r.samples) {
    if (s.window != "pp") continue;
    ++pp;
    CHECK(s.e == 10);
    CHECK(s.verdict == "mixed");
    CHECK(s.regularity == "transversal");
    CHECK(s.min_transversal_derivative > 0);
  }
  CHECK(pp == 1);
}

TEST_CASE("spectrum location") {
  UHOptions u;
  u.orbit_length = 8192;
  u.starts = 2;
  SpectrumResult free = locate_spectrum(Potential::zero(), Frequency::golden(), -3, 3, 61, u, 2);
  for (size_t i = 0; i < free.e.size(); ++i) {
    double e = free.e[i];
    if (std::abs(e) < 1.9) CHECK_FALSE(free.uh[i].uniformly_hyperbolic);
    if (std::abs(e) > 2.1) CHECK(free.uh[i].uniformly_hyperbolic);
  }

  Potential v = Potential::poisson_peak(10, 1e4);
  SpectrumResult s = locate_spectrum(v, Frequency::golden(), 3, 8, 64, UHOptions{}, 2);
  CHECK(s.guarantee_applies);
  CHECK(s.guarantee_ok);
  CHECK_FALSE(s.non_uh.empty());

  // ||H|| <= 2 + max V keeps E = 20 out of the spectrum
  SpectrumResult far = locate_spectrum(v, Frequency::golden(), 19.5, 20.5, 5, UHOptions{}, 1);
  CHECK(far.non_uh.empty());
  CHECK_THROWS_AS(locate_spectrum(v, Frequency::rational(1, 2), 3, 8, 4, u, 1), Error);
}

TEST_CASE("profile, reduce and dc-sample subcommands") {
  std::string p = run("profile",
                      "[potential]\nK = 10\nlambda = 1e4\n[frequency]\nalpha = 0/1\n"
                      "[profile]\ne = 5\nnu_count = 6\n",
                      1);
  CHECK(p.find("# r_A=1\n") != std::string::npos);
  CHECK(p.find("nu,L,stderr,second_difference\n") != std::string::npos);

  std::string r = run("reduce",
                      "[run]\nseed = 3\n[potential]\nK = 10\nlambda = 1e4\n"
                      "[frequency]\ndpq = 1/2\neta = 1e-3\ninner_lo = 5e-6\ninner_hi = 1e-5\n"
                      "[reduce]\ne = -0.12\nrotation_steps = 0\n",
                      1);
  CHECK(r.find("step,norm_phi_drift,norm_Z,norm_F,residual\n") != std::string::npos);
  auto pos = r.find("# final_residual=");
  REQUIRE(pos != std::string::npos);
  CHECK(std::stod(r.substr(pos + 17)) < 1e-6);

  std::string d = run("dc-sample", "[dc-sample]\nsamples = 2000\ncount = 3\n", 1);
  pos = d.find("# fraction=");
  REQUIRE(pos != std::string::npos);
  CHECK(std::stod(d.substr(pos + 11)) > 0.7);
  CHECK(d.find("index,alpha,offset,dc1_eta,checked_up_to\n") != std::string::npos);
}
