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


#include "cocycle/lab.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

#include "cocycle/cocycle.hpp"
#include "cocycle/reduce.hpp"

namespace cocycle {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }
std::string fmt(const std::optional<int>& v) { return v ? std::to_string(*v) : std::string(); }
std::string fmt(const std::optional<bool>& v) { return v ? (*v ? "1" : "0") : std::string(); }

Frequency parse_fraction(const Config& cfg, const std::string& key, const std::string& s) {
  size_t slash = s.find('/');
  if (slash == std::string::npos) cfg.bad(key, "expected p/q, got '" + s + "'");
  try {
    size_t a = 0, b = 0;
    int64_t p = std::stoll(s.substr(0, slash), &a);
    int64_t q = std::stoll(s.substr(slash + 1), &b);
    if (a != slash || b != s.size() - slash - 1) throw std::invalid_argument(s);
    return Frequency::rational(p, q);
  } catch (const Error& e) {
    cfg.bad(key, e.what());
  } catch (const std::exception&) {
    cfg.bad(key, "expected p/q, got '" + s + "'");
  }
}

template <class T>
T require_range(const Config& cfg, const std::string& key, T v, T lo, T hi) {
  if (!(v >= lo && v <= hi)) {
    cfg.bad(key, "value " + fmt(static_cast<double>(v)) + " outside [" +
                     fmt(static_cast<double>(lo)) + ", " + fmt(static_cast<double>(hi)) + "]");
  }
  return v;
}

double ranged(const Config& cfg, const std::string& key, double def, double lo, double hi) {
  return require_range(cfg, key, cfg.num(key, def), lo, hi);
}

int64_t ranged_int(const Config& cfg, const std::string& key, int64_t def, int64_t lo, int64_t hi) {
  return require_range(cfg, key, cfg.integer(key, def), lo, hi);
}

uint64_t seed_of(const Config& cfg, const RunOptions& opt) {
  return opt.seed ? *opt.seed : cfg.u64("run.seed", 0);
}

LEOptions le_options(const Config& cfg, const std::string& sec, int64_t n, int phases) {
  LEOptions o;
  o.n = ranged_int(cfg, sec + ".n_steps", n, 1000, 4'000'000'000LL);
  o.phases = static_cast<int>(ranged_int(cfg, sec + ".phases", phases, 1, 4096));
  o.nu = ranged(cfg, sec + ".nu", 0, 0, 10);
  return o;
}

UHOptions uh_options(const Config& cfg) {
  UHOptions o;
  o.n = ranged_int(cfg, "uh.block", o.n, 8, 1 << 20);
  o.margin = ranged(cfg, "uh.margin", o.margin, 1e-6, 0.5);
  o.orbit_length = ranged_int(cfg, "uh.orbit_length", o.orbit_length, 256, 1LL << 30);
  o.starts = static_cast<int>(ranged_int(cfg, "uh.starts", o.starts, 1, 1024));
  return o;
}

void header(std::ostream& os, const std::string& sub, const Config& cfg, uint64_t seed) {
  os << kCsvVersion << "\n# subcommand=" << sub << "\n# seed=" << seed << "\n";
  for (const std::string& k : cfg.keys()) {
    if (k == "run.threads" || k == "run.seed") continue;
    os << "# " << k << "=" << cfg.str(k, "") << "\n";
  }
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> s{"scan", "windows", "spectrum", "profile", "reduce", "dc-sample"};
  return s;
}

const std::vector<std::string>& known_config_keys() {
  static const std::vector<std::string> k{
      "run.seed", "run.threads",
      "potential.kind", "potential.K", "potential.lambda", "potential.normalization",
      "potential.support_lo", "potential.support_hi", "potential.sharpness", "potential.values",
      "frequency.alpha", "frequency.cap", "frequency.dpq", "frequency.eta",
      "frequency.inner_lo", "frequency.inner_hi", "frequency.cert_cap",
      "scan.e_min", "scan.e_max", "scan.e_count", "scan.n_steps", "scan.phases", "scan.nu",
      "scan.rotation_steps", "scan.uh",
      "uh.block", "uh.margin", "uh.orbit_length", "uh.starts",
      "windows.p", "windows.q", "windows.theta_grid", "windows.grid", "windows.ac_samples",
      "windows.pp_samples", "windows.alpha_offset", "windows.n_steps", "windows.phases",
      "windows.spectrum", "windows.spectrum_count",
      "spectrum.e_min", "spectrum.e_max", "spectrum.e_count",
      "profile.e", "profile.nu_count", "profile.nu_max", "profile.n_steps", "profile.phases",
      "profile.fit_lo", "profile.fit_hi", "profile.grid",
      "reduce.e", "reduce.p", "reduce.q", "reduce.grid", "reduce.j_max",
      "reduce.target_tolerance", "reduce.cutoff", "reduce.divisor_floor", "reduce.smoothness",
      "reduce.eta", "reduce.cert_cap", "reduce.rotation_steps", "reduce.dump",
      "dc-sample.p", "dc-sample.q", "dc-sample.eta", "dc-sample.samples", "dc-sample.cap",
      "dc-sample.count", "dc-sample.inner_lo", "dc-sample.inner_hi",
  };
  return k;
}

Potential potential_from_config(const Config& cfg) {
  std::string kind = cfg.str("potential.kind", "poisson-peak");
  if (kind == "zero") return Potential::zero();
  double K = ranged(cfg, "potential.K", 10, 1e-12, 1e12);
  if (kind == "poisson-peak") {
    double lambda = ranged(cfg, "potential.lambda", 1e4, 1e-12, 1e12);
    std::string norm = cfg.str("potential.normalization", "4lambda");
    if (norm == "lambda") {
      lambda /= 4;  // K / (1 + lambda sin^2) == K / (1 + 4 (lambda/4) sin^2)
    } else if (norm != "4lambda") {
      cfg.bad("potential.normalization", "expected 4lambda or lambda, got '" + norm + "'");
    }
    return Potential::poisson_peak(K, lambda);
  }
  if (kind == "peaky-bump") {
    double lo = ranged(cfg, "potential.support_lo", 0.1, 0, 1);
    double hi = ranged(cfg, "potential.support_hi", 0.4, 0, 1);
    double sharp = ranged(cfg, "potential.sharpness", 1, 1e-6, 1e6);
    try {
      return Potential::peaky_bump(lo, hi, K, sharp);
    } catch (const Error& e) {
      cfg.bad("potential.support_lo", e.what());
    }
  }
  if (kind == "tabulated") {
    std::vector<double> vals;
    std::stringstream ss(cfg.str("potential.values", ""));
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      try {
        vals.push_back(std::stod(tok));
      } catch (const std::exception&) {
        cfg.bad("potential.values", "bad number '" + tok + "'");
      }
    }
    try {
      return Potential::tabulated(vals);
    } catch (const Error& e) {
      cfg.bad("potential.values", e.what());
    }
  }
  cfg.bad("potential.kind", "unknown kind '" + kind + "'");
}

Frequency frequency_from_config(const Config& cfg, uint64_t seed) {
  int64_t cap = ranged_int(cfg, "frequency.cap", 10'000'000, 1, 1LL << 40);
  if (cfg.has("frequency.dpq")) {
    if (cfg.has("frequency.alpha")) cfg.bad("frequency.alpha", "conflicts with frequency.dpq");
    Frequency pq = parse_fraction(cfg, "frequency.dpq", cfg.str("frequency.dpq", ""));
    double eta = ranged(cfg, "frequency.eta", 1e-3, 1e-12, 0.5);
    double lo = ranged(cfg, "frequency.inner_lo", 0, 0, eta);
    double hi = ranged(cfg, "frequency.inner_hi", eta, lo, eta);
    int64_t ccap = ranged_int(cfg, "frequency.cert_cap", 10000, 1, 1LL << 40);
    std::optional<double> a = sample_dpq(pq, eta, ccap, lo, hi, seed);
    if (!a) fail(ErrorCode::kNumerical, "frequency: no D_pq sample found in the inner window");
    return Frequency::irrational(*a, cap);
  }
  std::string s = cfg.str("frequency.alpha", "golden");
  if (s == "golden") return Frequency::golden();
  if (s.find('/') != std::string::npos) return parse_fraction(cfg, "frequency.alpha", s);
  double v = cfg.num("frequency.alpha", 0);
  if (!(v > 0 && v < 1)) cfg.bad("frequency.alpha", "must lie in (0, 1)");
  return Frequency::irrational(v, cap);
}

void parallel_for(int64_t n, unsigned threads, const std::function<void(int64_t)>& f) {
  unsigned workers = static_cast<unsigned>(std::max<int64_t>(1, std::min<int64_t>(n, threads)));
  std::atomic<int64_t> next{0};
  std::exception_ptr err;
  std::mutex m;
  auto body = [&] {
    for (;;) {
      int64_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        f(i);
      } catch (...) {
        std::lock_guard<std::mutex> g(m);
        if (!err) err = std::current_exception();
        next.store(n);
        return;
      }
    }
  };
  if (workers == 1) {
    body();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(body);
    for (std::thread& t : pool) t.join();
  }
  if (err) std::rethrow_exception(err);
}

uint64_t row_seed(uint64_t seed, uint64_t index) {
  // splitmix64 of the pair
  uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::vector<ScanRow> run_scan(const Potential& v, const Frequency& alpha, const ScanOptions& opt,
                              unsigned threads) {
  require(opt.e_count >= 2, ErrorCode::kConfig, "scan: e_count must be >= 2");
  require(opt.e_min < opt.e_max, ErrorCode::kConfig, "scan: e_min must be < e_max");
  std::vector<ScanRow> rows(opt.e_count);
  parallel_for(opt.e_count, threads, [&](int64_t i) {
    ScanRow& r = rows[i];
    r.e = opt.e_min + (opt.e_max - opt.e_min) * static_cast<double>(i) / (opt.e_count - 1);
    r.nu = opt.le.nu;
    r.alpha = alpha.value();
    LEOptions lo = opt.le;
    lo.seed = row_seed(opt.le.seed, i);
    r.le = le_estimate(v, r.e, alpha, lo);
    if (v.kind() == PotentialKind::kPoissonPeak && std::abs(r.e) > 2) {
      r.herman = herman_lower_bound(v.K(), v.lambda(), r.e).value;
    }
    if (opt.uh && !alpha.is_rational()) {
      UHOptions u = opt.uh_options;
      u.seed = row_seed(opt.le.seed ^ 0x5555, i);
      r.uh = uh_test(v, r.e, alpha, u).uniformly_hyperbolic;
    }
    r.rotation = rotation_number(v, r.e, alpha, opt.rotation);
    r.dos = density_of_states(r.rotation);
  });
  return rows;
}

void write_scan_csv(std::ostream& os, const std::vector<ScanRow>& rows) {
  os << "E,nu,alpha,n,LE,LE_raw,stderr,convergence_gap,herman_bound,uh_flag,rho,rho_bar,"
        "rho_gap,dos,method\n";
  for (const ScanRow& r : rows) {
    os << fmt(r.e) << ',' << fmt(r.nu) << ',' << fmt(r.alpha) << ',' << r.le.n_steps << ','
       << fmt(r.le.clamped()) << ',' << fmt(r.le.value) << ',' << fmt(r.le.stderr_) << ','
       << fmt(r.le.convergence_gap) << ',' << fmt(r.herman) << ',' << fmt(r.uh) << ','
       << fmt(r.rotation.rho) << ',' << fmt(r.rotation.rho_bar) << ','
       << fmt(r.rotation.convergence_gap) << ',' << fmt(r.dos) << ','
       << rotation_method_name(r.rotation.method) << '\n';
  }
}

namespace {

struct ThetaRun {
  int k;
  double th_lo, th_hi;
  double delta_k, m_sign, m_amp, m_cos;
};

std::vector<ThetaRun> theta_windows(double K, int64_t q, int grid) {
  std::vector<ThetaRun> out;
  const double w = std::acos(0.75) / q;
  for (int64_t k = 1; k <= 2 * q - 1; ++k) {
    double tk = kPi * k / q;
    bool in = false;
    ThetaRun cur{};
    auto close = [&] {
      if (in) out.push_back(cur);
      in = false;
    };
    for (int i = 0; i <= grid; ++i) {
      double th = tk - w + 2 * w * i / grid;
      double sn = std::sin(th);
      bool ok = std::abs(sn) > 1e-12 && th != tk;
      double s = 0, c = 0;
      if (ok) {
        s = std::sin(q * th) / sn;
        c = std::cos(q * th);
        ok = s * c > 0 && K * std::abs(s) < 0.5 && std::abs(2 * c) > 1.5 && std::abs(2 * c) < 2;
      }
      if (!ok) {
        close();
        continue;
      }
      double amp = 0.5 - K * std::abs(s);
      double cm = std::min(2 - 2 * std::abs(c), 2 * std::abs(c) - 1.5);
      if (!in) {
        cur = {static_cast<int>(k), th, th, 2 - 2 * std::abs(c), s * c, amp, cm};
        in = true;
      } else {
        cur.th_hi = th;
        cur.delta_k = std::min(cur.delta_k, 2 - 2 * std::abs(c));
        cur.m_sign = std::min(cur.m_sign, s * c);
        cur.m_amp = std::min(cur.m_amp, amp);
        cur.m_cos = std::min(cur.m_cos, cm);
      }
    }
    close();
  }
  return out;
}

void classify_sample(const Potential& v, const Frequency& pq, int grid, WindowSample& s) {
  EllipticityReport rep = ellipticity_report(v, s.e, pq, grid);
  s.verdict = verdict_name(rep.verdict);
  s.delta = rep.delta;
  s.min_transversal_derivative = rep.min_transversal_derivative;
}

}  // namespace

WindowReport find_windows(const Potential& v, const Frequency& pq, const WindowOptions& opt,
                          unsigned threads) {
  require(pq.is_rational(), ErrorCode::kParameter, "find_windows: needs rational p/q");
  const double K = v.K();
  const int64_t q = pq.q();
  WindowReport rep;

  struct Ac {
    ThetaRun run;
    double e_lo, e_hi;
    std::string label;
  };
  std::vector<Ac> acs;
  for (const ThetaRun& r : theta_windows(K, q, opt.theta_grid)) {
    double a = 2 * std::cos(r.th_lo), b = 2 * std::cos(r.th_hi);
    double lo = std::min(a, b), hi = std::max(a, b);
    // theta_k and theta_{2q-k} map to the same energies
    bool seen = std::any_of(acs.begin(), acs.end(), [&](const Ac& o) {
      return std::abs(o.e_lo - lo) < 1e-9 && std::abs(o.e_hi - hi) < 1e-9;
    });
    if (!seen) acs.push_back({r, lo, hi, "ac"});
  }
  if (v.kind() == PotentialKind::kPoissonPeak && q == 2 && K > 0) {
    ThetaRun two{0, 0, 0, 1 / (K * K), NAN, NAN, NAN};
    acs.push_back({two, -3 / (2 * K), -1 / K, "ac"});
  }

  std::vector<WindowSample> ac_samples;
  for (const Ac& a : acs) {
    int m = std::max(1, opt.ac_samples);
    for (int i = 0; i < m; ++i) {
      WindowSample s;
      s.window = a.label;
      s.k = a.run.k;
      s.e_lo = a.e_lo;
      s.e_hi = a.e_hi;
      s.delta_k = a.run.delta_k;
      s.margin_sign = a.run.m_sign;
      s.margin_amp = a.run.m_amp;
      s.margin_cos = a.run.m_cos;
      s.e = m == 1 ? 0.5 * (a.e_lo + a.e_hi) : a.e_lo + (a.e_hi - a.e_lo) * i / (m - 1);
      s.q = q;
      ac_samples.push_back(s);
    }
  }
  parallel_for(static_cast<int64_t>(ac_samples.size()), threads, [&](int64_t i) {
    WindowSample& s = ac_samples[i];
    classify_sample(v, pq, opt.grid, s);
    s.regularity = "not-regular";
    if (s.verdict == verdict_name(Verdict::kTotallyElliptic)) {
      s.rho_integral = elliptic_rotation_integral(v, s.e, pq).rho;
      s.rho_rational = rotation_number(v, s.e, pq).rho;
    }
  });
  // A window is reported only if every sample certifies delta >= delta_k.
  for (size_t i = 0; i < ac_samples.size();) {
    size_t j = i;
    bool ok = true;
    while (j < ac_samples.size() && ac_samples[j].k == ac_samples[i].k &&
           ac_samples[j].e_lo == ac_samples[i].e_lo) {
      const WindowSample& s = ac_samples[j];
      ok = ok && s.verdict == verdict_name(Verdict::kTotallyElliptic) &&
           s.delta >= s.delta_k - 1e-12;
      ++j;
    }
    for (size_t t = i; t < j; ++t) {
      if (!ok) ac_samples[t].window = "ac-rejected";
      rep.samples.push_back(ac_samples[t]);
    }
    i = j;
  }

  // pp window
  double pp_lo, pp_hi;
  if (v.kind() == PotentialKind::kPoissonPeak) {
    pp_lo = 2.5;
    pp_hi = K - 2;
  } else {
    pp_lo = 10;
    pp_hi = K - 10;
  }
  std::vector<WindowSample> pp;
  if (pp_hi >= pp_lo) {
    int m = pp_hi > pp_lo ? std::max(1, opt.pp_samples) : 1;
    for (int i = 0; i < m; ++i) {
      WindowSample s;
      s.window = "pp";
      s.e_lo = pp_lo;
      s.e_hi = pp_hi;
      s.e = m == 1 ? pp_lo : pp_lo + (pp_hi - pp_lo) * i / (m - 1);
      s.q = q;
      pp.push_back(s);
    }
  }
  const double alpha_le = static_cast<double>(pq.p()) / q + opt.alpha_offset;
  parallel_for(static_cast<int64_t>(pp.size()), threads, [&](int64_t i) {
    WindowSample& s = pp[i];
    classify_sample(v, pq, opt.grid, s);
    Loop l = Loop::q_step(v, s.e, pq);
    if (l.analytic()) {
      RegularityResult reg = regularity_check(l, resolving_grid(v, opt.grid));
      s.regularity = reg.regular ? "regular" : "not-regular";
      if (reg.regular) {
        s.h_prime = reg.h_prime;
        EigenBranch b = eigen_branch(l, 0.5 * reg.h_prime, opt.grid);
        s.r_a = b.r_a;
        s.re_theta_bar = b.theta_bar.real();
      }
    } else {
      EllipticityReport r = ellipticity_report(v, s.e, pq, opt.grid);
      bool mixed = r.verdict == Verdict::kMixed && !r.crossings.empty();
      s.regularity = mixed && r.transversal ? "transversal" : "not-regular";
    }
    if (opt.alpha_offset != 0 && alpha_le > 0 && alpha_le < 1) {
      LEOptions lo = opt.le;
      lo.seed = row_seed(opt.le.seed, 1000 + i);
      s.le = le_estimate(v, s.e, Frequency::irrational(alpha_le), lo).value;
    }
  });
  for (WindowSample& s : pp) rep.samples.push_back(s);

  if (opt.spectrum && opt.spectrum_alpha && !opt.spectrum_alpha->is_rational() && K - 2 >= 3) {
    SpectrumResult sp = locate_spectrum(v, *opt.spectrum_alpha, 3, K - 2, opt.spectrum_count,
                                        opt.uh_options, threads);
    rep.spectrum_hits = sp.non_uh;
    for (size_t i = 0; i < sp.e.size(); ++i) {
      WindowSample s;
      s.window = "spectrum";
      s.e_lo = 3;
      s.e_hi = K - 2;
      s.e = sp.e[i];
      s.uh = sp.uh[i].uniformly_hyperbolic;
      rep.samples.push_back(s);
    }
  }
  return rep;
}

void write_windows_csv(std::ostream& os, const WindowReport& r) {
  os << "window,k,E_lo,E_hi,delta_k,margin_sign,margin_amp,margin_cos,E,q,verdict,delta,"
        "min_transversal_derivative,h_prime,r_A,re_theta_bar,regularity,rho_integral,"
        "rho_rational,LE,uh_flag\n";
  for (const WindowSample& s : r.samples) {
    bool cls = s.window != "spectrum";
    bool ac = s.window.rfind("ac", 0) == 0;
    os << s.window << ',' << (ac ? std::to_string(s.k) : "") << ',' << fmt(s.e_lo) << ','
       << fmt(s.e_hi) << ',' << (ac ? fmt(s.delta_k) : "") << ','
       << (ac && s.k > 0 ? fmt(s.margin_sign) : "") << ','
       << (ac && s.k > 0 ? fmt(s.margin_amp) : "") << ','
       << (ac && s.k > 0 ? fmt(s.margin_cos) : "") << ',' << fmt(s.e) << ','
       << (cls ? std::to_string(s.q) : "") << ',' << s.verdict << ','
       << (cls ? fmt(s.delta) : "") << ',' << (cls ? fmt(s.min_transversal_derivative) : "")
       << ',' << fmt(s.h_prime) << ',' << fmt(s.r_a) << ',' << fmt(s.re_theta_bar) << ','
       << s.regularity << ',' << fmt(s.rho_integral) << ',' << fmt(s.rho_rational) << ','
       << fmt(s.le) << ',' << fmt(s.uh) << '\n';
  }
}

SpectrumResult locate_spectrum(const Potential& v, const Frequency& alpha, double e_lo,
                               double e_hi, int count, const UHOptions& opt, unsigned threads) {
  if (alpha.is_rational()) fail(ErrorCode::kUnsupported, "locate_spectrum: needs irrational alpha");
  require(count >= 2 && e_lo < e_hi, ErrorCode::kParameter, "locate_spectrum: bad energy grid");
  SpectrumResult r;
  r.e.resize(count);
  r.uh.resize(count);
  parallel_for(count, threads, [&](int64_t i) {
    r.e[i] = e_lo + (e_hi - e_lo) * static_cast<double>(i) / (count - 1);
    UHOptions o = opt;
    o.seed = row_seed(opt.seed, i);
    r.uh[i] = uh_test(v, r.e[i], alpha, o);
  });
  const double K = v.K();
  r.guarantee_applies = K >= 5 && e_lo <= 3 && e_hi >= K - 2;
  for (int i = 0; i < count; ++i) {
    if (r.uh[i].uniformly_hyperbolic) continue;
    r.non_uh.push_back(r.e[i]);
    if (r.e[i] >= 3 && r.e[i] <= K - 2) r.guarantee_ok = true;
  }
  return r;
}

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::kConfig:
    case ErrorCode::kParameter:
    case ErrorCode::kDomain:
    case ErrorCode::kUnsupported:
    case ErrorCode::kPrecondition:
    case ErrorCode::kIo:
      return 2;
    default:
      return 3;
  }
}

namespace {

void run_scan_cmd(const Config& cfg, std::ostream& out, const RunOptions& ro, uint64_t seed) {
  Potential v = potential_from_config(cfg);
  Frequency alpha = frequency_from_config(cfg, seed);
  ScanOptions o;
  o.e_min = cfg.num("scan.e_min", o.e_min);
  o.e_max = cfg.num("scan.e_max", o.e_max);
  o.e_count = ranged_int(cfg, "scan.e_count", o.e_count, 2, 1 << 24);
  if (!(o.e_min < o.e_max)) cfg.bad("scan.e_max", "must exceed scan.e_min");
  o.le = le_options(cfg, "scan", 100000, 8);
  o.le.seed = seed;
  o.rotation.n = ranged_int(cfg, "scan.rotation_steps", 100000, 1000, 4'000'000'000LL);
  o.uh = cfg.flag("scan.uh", true);
  o.uh_options = uh_options(cfg);
  std::vector<ScanRow> rows = run_scan(v, alpha, o, ro.threads);
  header(out, "scan", cfg, seed);
  out << "# alpha=" << alpha.str() << "\n";
  write_scan_csv(out, rows);
}

void run_windows_cmd(const Config& cfg, std::ostream& out, const RunOptions& ro, uint64_t seed) {
  Potential v = potential_from_config(cfg);
  int64_t q = ranged_int(cfg, "windows.q", 2, 1, 64);
  int64_t p = ranged_int(cfg, "windows.p", q == 1 ? 0 : 1, 0, q - 1);
  Frequency pq = Frequency::rational(p, q);
  WindowOptions o;
  o.theta_grid = static_cast<int>(ranged_int(cfg, "windows.theta_grid", o.theta_grid, 100, 1 << 24));
  o.grid = static_cast<int>(ranged_int(cfg, "windows.grid", o.grid, 256, 1 << 22));
  o.ac_samples = static_cast<int>(ranged_int(cfg, "windows.ac_samples", o.ac_samples, 1, 4096));
  o.pp_samples = static_cast<int>(ranged_int(cfg, "windows.pp_samples", o.pp_samples, 1, 4096));
  o.alpha_offset = ranged(cfg, "windows.alpha_offset", o.alpha_offset, -0.5, 0.5);
  o.le = le_options(cfg, "windows", 100000, 4);
  o.le.seed = seed;
  o.spectrum = cfg.flag("windows.spectrum", true);
  o.spectrum_count = static_cast<int>(ranged_int(cfg, "windows.spectrum_count", 64, 2, 1 << 20));
  o.uh_options = uh_options(cfg);
  o.uh_options.seed = seed;
  if (o.spectrum) {
    Frequency a = frequency_from_config(cfg, seed);
    if (!a.is_rational()) o.spectrum_alpha = a;
  }
  WindowReport r = find_windows(v, pq, o, ro.threads);
  header(out, "windows", cfg, seed);
  write_windows_csv(out, r);
}

void run_spectrum_cmd(const Config& cfg, std::ostream& out, const RunOptions& ro, uint64_t seed) {
  Potential v = potential_from_config(cfg);
  Frequency alpha = frequency_from_config(cfg, seed);
  double lo = cfg.num("spectrum.e_min", 3);
  double hi = cfg.num("spectrum.e_max", std::max(4.0, v.K() - 2));
  if (!(lo < hi)) cfg.bad("spectrum.e_max", "must exceed spectrum.e_min");
  int count = static_cast<int>(ranged_int(cfg, "spectrum.e_count", 64, 2, 1 << 24));
  UHOptions u = uh_options(cfg);
  u.seed = seed;
  SpectrumResult r = locate_spectrum(v, alpha, lo, hi, count, u, ro.threads);
  header(out, "spectrum", cfg, seed);
  out << "# alpha=" << alpha.str() << "\n# non_uh_count=" << r.non_uh.size()
      << "\n# guarantee_applies=" << r.guarantee_applies << "\n# guarantee_ok=" << r.guarantee_ok
      << "\n";
  out << "E,uh_flag,min_angle,min_log_growth,worst_inclusion\n";
  for (size_t i = 0; i < r.e.size(); ++i) {
    out << fmt(r.e[i]) << ',' << (r.uh[i].uniformly_hyperbolic ? 1 : 0) << ','
        << fmt(r.uh[i].min_angle) << ',' << fmt(r.uh[i].min_log_growth) << ','
        << fmt(r.uh[i].worst_inclusion) << '\n';
  }
}

void run_profile_cmd(const Config& cfg, std::ostream& out, const RunOptions&, uint64_t seed) {
  Potential v = potential_from_config(cfg);
  Frequency alpha = frequency_from_config(cfg, seed);
  double e = cfg.num("profile.e", 5);
  int count = static_cast<int>(ranged_int(cfg, "profile.nu_count", 16, 3, 1 << 16));
  LEOptions lo = le_options(cfg, "profile", 100000, 8);
  lo.seed = seed;
  int grid = static_cast<int>(ranged_int(cfg, "profile.grid", 1024, 256, 1 << 22));
  std::optional<double> h_prime;
  std::optional<int> r_a;
  std::optional<double> re_theta;
  double nu_max = cfg.num("profile.nu_max", 0);
  if (alpha.is_rational()) {
    Loop l = Loop::q_step(v, e, alpha);
    if (l.analytic()) {
      RegularityResult reg = regularity_check(l, resolving_grid(v, grid));
      if (reg.regular) {
        h_prime = reg.h_prime;
        EigenBranch b = eigen_branch(l, 0.5 * reg.h_prime, grid);
        r_a = b.r_a;
        re_theta = b.theta_bar.real();
      }
    }
  }
  if (nu_max <= 0) nu_max = h_prime ? *h_prime : 0.9 * v.strip_halfwidth();
  if (!std::isfinite(nu_max)) nu_max = 1;
  if (nu_max > v.strip_halfwidth()) cfg.bad("profile.nu_max", "exceeds the potential's strip");
  std::vector<double> nus(count);
  for (int i = 0; i < count; ++i) nus[i] = nu_max * (i + 1) / count;
  double fit_lo = cfg.num("profile.fit_lo", 1);
  double fit_hi = cfg.num("profile.fit_hi", 0);
  LyapunovProfile p = le_profile(v, e, alpha, nus, lo, fit_lo, fit_hi);
  header(out, "profile", cfg, seed);
  out << "# alpha=" << alpha.str() << "\n# slope=" << fmt(p.slope) << "\n# intercept="
      << fmt(p.intercept) << "\n# acceleration=" << fmt(p.acceleration)
      << "\n# quantization_residual=" << fmt(p.quantization_residual) << "\n# h_prime="
      << fmt(h_prime) << "\n# r_A=" << fmt(r_a) << "\n# re_theta_bar=" << fmt(re_theta) << "\n";
  if (r_a && *r_a != 0) {
    out << "# slope_vs_2pi_rA=" << fmt(p.slope / (2 * kPi * *r_a) - 1) << "\n";
  }
  out << "nu,L,stderr,second_difference\n";
  for (size_t i = 0; i < p.nu.size(); ++i) {
    std::optional<double> d2;
    if (i >= 1 && i + 1 < p.nu.size()) d2 = p.second_differences[i - 1];
    out << fmt(p.nu[i]) << ',' << fmt(p.values[i]) << ',' << fmt(p.stderrs[i]) << ',' << fmt(d2)
        << '\n';
  }
}

void run_reduce_cmd(const Config& cfg, std::ostream& out, const RunOptions&, uint64_t seed) {
  Potential v = potential_from_config(cfg);
  Frequency alpha = frequency_from_config(cfg, seed);
  double e = cfg.num("reduce.e", -0.12);
  int64_t q = ranged_int(cfg, "reduce.q", 2, 1, 64);
  int64_t p = ranged_int(cfg, "reduce.p", q == 1 ? 0 : 1, 0, q - 1);
  Frequency pq = Frequency::rational(p, q);
  ReduceOptions o;
  o.grid = static_cast<int>(ranged_int(cfg, "reduce.grid", o.grid, 64, 1 << 22));
  o.j_max = static_cast<int>(ranged_int(cfg, "reduce.j_max", o.j_max, 0, 5));
  o.target_tolerance = ranged(cfg, "reduce.target_tolerance", o.target_tolerance, 0, 1);
  o.cutoff = static_cast<int>(ranged_int(cfg, "reduce.cutoff", 0, 0, 1 << 21));
  o.divisor_floor = ranged(cfg, "reduce.divisor_floor", o.divisor_floor, 0, 1);
  o.smoothness = ranged(cfg, "reduce.smoothness", 0, 0, 10);
  o.eta = ranged(cfg, "reduce.eta", 0, 0, 0.5);
  o.cert_cap = ranged_int(cfg, "reduce.cert_cap", o.cert_cap, 1, 1LL << 40);
  int64_t rho_n = ranged_int(cfg, "reduce.rotation_steps", 10'000'000, 0, 4'000'000'000LL);
  ReductionResult r = cheap_trick_reduce(v, e, alpha, pq, o);
  header(out, "reduce", cfg, seed);
  out << "# alpha=" << fmt(alpha.value()) << "\n# theta0=" << fmt(r.theta0)
      << "\n# construction_residual=" << fmt(r.construction_residual)
      << "\n# final_residual=" << fmt(r.final_residual)
      << "\n# verification_grid=" << r.verification_grid << "\n# det_defect=" << fmt(r.det_defect)
      << "\n# min_divisor=" << fmt(r.min_divisor) << "\n# delta=" << fmt(r.delta) << "\n";
  if (rho_n > 0 && !alpha.is_rational()) {
    RotationOptions ro;
    ro.n = rho_n;
    double rho = rotation_number(v, e, alpha, ro).rho;
    out << "# rho=" << fmt(rho) << "\n# rotation_defect="
        << fmt(rotation_lattice_defect(rho, r.theta0, alpha.value())) << "\n";
  }
  if (cfg.has("reduce.dump")) {
    std::string path = cfg.str("reduce.dump", "");
    write_conjugator_dump(path, r.b_total);
    out << "# dump=" << path << " (" << r.b_total.size() << " blocks)\n";
  }
  write_ledger_csv(out, r.ledger);
}

void run_dc_cmd(const Config& cfg, std::ostream& out, const RunOptions&, uint64_t seed) {
  int64_t q = ranged_int(cfg, "dc-sample.q", 2, 1, 1LL << 30);
  int64_t p = ranged_int(cfg, "dc-sample.p", q == 1 ? 0 : 1, 0, q - 1);
  Frequency pq = Frequency::rational(p, q);
  double eta = ranged(cfg, "dc-sample.eta", 0.1, 1e-12, 0.5);
  int64_t samples = ranged_int(cfg, "dc-sample.samples", 100000, 1, 1LL << 32);
  int64_t cap = ranged_int(cfg, "dc-sample.cap", 10000, 1, 1LL << 40);
  int64_t count = ranged_int(cfg, "dc-sample.count", 10, 0, 1 << 24);
  double lo = ranged(cfg, "dc-sample.inner_lo", 0, 0, eta);
  double hi = ranged(cfg, "dc-sample.inner_hi", eta, lo, eta);
  DensityEstimate d = dpq_density(pq, eta, samples, cap, seed);
  header(out, "dc-sample", cfg, seed);
  out << "# fraction=" << fmt(d.fraction) << "\n# binomial_sd=" << fmt(d.binomial_sd)
      << "\n# members=" << d.members << "\n# samples=" << d.samples
      << "\n# lower_bound=" << fmt(1 - 2 * eta) << "\n";
  out << "index,alpha,offset,dc1_eta,checked_up_to\n";
  for (int64_t i = 0; i < count; ++i) {
    std::optional<double> a = sample_dpq(pq, eta, cap, lo, hi, row_seed(seed, i));
    if (!a) fail(ErrorCode::kNumerical, "dc-sample: rejection sampling found no member");
    DiophantineCert c = dpq_membership(Frequency::irrational(*a), pq, eta, cap);
    out << i << ',' << fmt(*a) << ',' << fmt(*a - pq.value()) << ',' << fmt(c.eta) << ','
        << c.checked_up_to << '\n';
  }
}

}  // namespace

void run_subcommand(const std::string& name, const Config& cfg, std::ostream& out,
                    const RunOptions& opt) {
  cfg.check_known(known_config_keys());
  uint64_t seed = seed_of(cfg, opt);
  if (name == "scan") return run_scan_cmd(cfg, out, opt, seed);
  if (name == "windows") return run_windows_cmd(cfg, out, opt, seed);
  if (name == "spectrum") return run_spectrum_cmd(cfg, out, opt, seed);
  if (name == "profile") return run_profile_cmd(cfg, out, opt, seed);
  if (name == "reduce") return run_reduce_cmd(cfg, out, opt, seed);
  if (name == "dc-sample") return run_dc_cmd(cfg, out, opt, seed);
  fail(ErrorCode::kConfig, "unknown subcommand '" + name + "'");
}

}  // namespace cocycle
