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

#include "cocycle/arithmetic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "cocycle/error.hpp"

namespace cocycle {
namespace {

// Brute-force range for DC1 before switching to convergent denominators.
constexpr int64_t kBruteRange = 1000;

double dist_to_int(double x) { return std::abs(x - std::nearbyint(x)); }

}  // namespace

std::vector<Convergent> convergents(double alpha, int64_t cap) {
  require(std::isfinite(alpha) && alpha > 0 && alpha < 1, ErrorCode::kParameter,
          "convergents: alpha must lie in (0,1)");
  require(cap >= 1, ErrorCode::kParameter, "convergents: cap must be >= 1");
  std::vector<Convergent> out;
  // theta_n = |q_n alpha - p_n| recomputed from the integers each step, which
  // is far more stable than iterating x -> 1/(x - a).
  int64_t p_prev = 1, q_prev = 0;  // n = -1
  int64_t p = 0, q = 1;            // n = 0 (a0 = 0)
  double th_prev = 1.0, th = alpha;
  const double tol = 8.0 * std::numeric_limits<double>::epsilon();
  while (true) {
    double ratio = th_prev / th;
    // Nudge so that exact integer ratios are not floored down by rounding.
    auto a = static_cast<int64_t>(std::floor(ratio * (1.0 + 1e-12)));
    if (a < 1) a = 1;
    if (q > 0 && a > (cap - q_prev) / q) break;
    int64_t pn = a * p + p_prev, qn = a * q + q_prev;
    if (qn > cap) break;
    p_prev = p; q_prev = q; p = pn; q = qn;
    out.push_back({p, q});
    th_prev = th;
    th = std::abs(std::fma(static_cast<double>(q), alpha, -static_cast<double>(p)));
    if (th <= tol * static_cast<double>(q)) break;  // alpha reached
  }
  return out;
}

Frequency Frequency::rational(int64_t p, int64_t q) {
  require(q >= 1 && p >= 0 && p < q, ErrorCode::kParameter,
          "rational frequency needs 0 <= p < q");
  require(std::gcd(p, q) == 1, ErrorCode::kParameter,
          "rational frequency needs gcd(p, q) = 1");
  Frequency f;
  f.rational_ = true;
  f.p_ = p;
  f.q_ = q;
  f.value_ = static_cast<double>(p) / static_cast<double>(q);
  if (p > 0) f.conv_ = convergents(f.value_, q);
  return f;
}

Frequency Frequency::irrational(double value, int64_t cap) {
  require(std::isfinite(value) && value > 0 && value < 1, ErrorCode::kParameter,
          "frequency must lie in (0,1)");
  Frequency f;
  f.value_ = value;
  f.conv_ = convergents(value, cap);
  return f;
}

Frequency Frequency::golden() { return irrational((std::sqrt(5.0) - 1.0) / 2.0); }

std::string Frequency::str() const {
  std::ostringstream os;
  if (rational_) {
    os << p_ << "/" << q_;
  } else {
    os.precision(17);
    os << value_;
  }
  return os.str();
}

const char* diophantine_class_name(DiophantineClass c) {
  switch (c) {
    case DiophantineClass::kDC1: return "DC1";
    case DiophantineClass::kDSAlpha: return "DS_alpha";
    case DiophantineClass::kDpq: return "D_pq";
  }
  return "unknown";
}

DiophantineCert dc1_membership(const Frequency& alpha, double eta, double sigma,
                               int64_t cap) {
  require(eta > 0 && std::isfinite(eta), ErrorCode::kParameter, "dc1: eta must be > 0");
  require(sigma >= 2, ErrorCode::kParameter, "dc1: sigma must be >= 2");
  require(cap >= 1, ErrorCode::kParameter, "dc1: cap must be >= 1");
  DiophantineCert cert;
  cert.cls = DiophantineClass::kDC1;
  cert.eta = eta;
  cert.sigma = sigma;
  cert.checked_up_to = cap;
  cert.member = true;

  auto violates = [&](int64_t k, int64_t l) {
    double ld = static_cast<double>(l);
    double d;
    if (alpha.is_rational()) {
      // |p l - k q| / (q l), exact in the integers.
      __int128 num = static_cast<__int128>(alpha.p()) * l -
                     static_cast<__int128>(k) * alpha.q();
      if (num < 0) num = -num;
      d = static_cast<double>(num) / (static_cast<double>(alpha.q()) * ld);
    } else {
      d = std::abs(std::fma(ld, alpha.value(), -static_cast<double>(k))) / ld;
    }
    return d < eta / std::pow(ld, sigma);
  };
  auto check = [&](int64_t l) {
    auto k = static_cast<int64_t>(std::nearbyint(static_cast<double>(l) * alpha.value()));
    if (violates(k, l)) {
      cert.member = false;
      cert.witness = Witness{k, l};
      return false;
    }
    return true;
  };

  int64_t brute = std::min(cap, kBruteRange);
  for (int64_t l = 1; l <= brute; ++l)
    if (!check(l)) return cert;
  if (cap > brute) {
    if (alpha.is_rational()) {
      if (alpha.q() <= cap && !check(alpha.q())) return cert;
    } else {
      for (const Convergent& c : convergents(alpha.value(), cap)) {
        if (c.q <= brute) continue;
        if (violates(c.p, c.q)) {
          cert.member = false;
          cert.witness = Witness{c.p, c.q};
          return cert;
        }
      }
    }
  }
  return cert;
}

DiophantineCert dpq_membership(const Frequency& alpha, const Frequency& pq,
                               double eta, int64_t cap) {
  require(pq.is_rational(), ErrorCode::kParameter, "dpq: p/q must be rational");
  require(eta > 0 && eta < 0.5, ErrorCode::kParameter, "dpq: eta must lie in (0,1/2)");
  double gap = std::abs(alpha.value() - pq.value());
  if (!(gap < eta)) {
    DiophantineCert cert;
    cert.cls = DiophantineClass::kDpq;
    cert.eta = eta;
    cert.sigma = 3;
    cert.checked_up_to = cap;
    cert.member = false;
    cert.outside_interval = true;
    cert.witness = Witness{pq.p(), pq.q()};
    return cert;
  }
  DiophantineCert cert = dc1_membership(alpha, eta * eta, 3.0, cap);
  cert.cls = DiophantineClass::kDpq;
  cert.eta = eta;
  return cert;
}

DiophantineCert ds_membership(double rho, const Frequency& alpha, double kappa,
                              int64_t cap, double exponent) {
  require(!alpha.is_rational(), ErrorCode::kUnsupported,
          "DS_alpha is only defined for irrational-kind alpha");
  require(kappa > 0, ErrorCode::kParameter, "ds: kappa must be > 0");
  require(cap >= 1, ErrorCode::kParameter, "ds: cap must be >= 1");
  DiophantineCert cert;
  cert.cls = DiophantineClass::kDSAlpha;
  cert.eta = kappa;
  cert.sigma = exponent;
  cert.checked_up_to = cap;
  cert.member = true;
  for (int64_t k = 1; k <= cap; ++k) {
    double bound = kappa / std::pow(static_cast<double>(k), exponent);
    for (int64_t sk : {k, -k}) {
      double x = 2.0 * rho - static_cast<double>(sk) * alpha.value();
      if (dist_to_int(x) < bound) {
        cert.member = false;
        cert.witness = Witness{sk, static_cast<int64_t>(std::nearbyint(x))};
        return cert;
      }
    }
  }
  return cert;
}

DensityEstimate dpq_density(const Frequency& pq, double eta, int64_t samples,
                            int64_t cap, uint64_t seed) {
  require(samples >= 1, ErrorCode::kParameter, "density: samples must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(pq.value() - eta, pq.value() + eta);
  DensityEstimate est;
  est.samples = samples;
  for (int64_t i = 0; i < samples; ++i) {
    double a = u(rng);
    if (a <= 0 || a >= 1 || a == pq.value()) continue;
    if (dpq_membership(Frequency::irrational(a, 1), pq, eta, cap).member)
      ++est.members;
  }
  double p = static_cast<double>(est.members) / static_cast<double>(samples);
  est.fraction = p;
  est.binomial_sd = std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
  return est;
}

std::optional<double> sample_dpq(const Frequency& pq, double eta, int64_t cap,
                                 double inner_lo, double inner_hi,
                                 uint64_t seed, int max_tries) {
  require(0 <= inner_lo && inner_lo < inner_hi && inner_hi <= eta,
          ErrorCode::kParameter, "sample_dpq: need 0 <= lo < hi <= eta");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> mag(inner_lo, inner_hi);
  std::bernoulli_distribution side(0.5);
  for (int i = 0; i < max_tries; ++i) {
    double d = mag(rng);
    if (d == 0) continue;
    double a = pq.value() + (side(rng) ? d : -d);
    if (a <= 0 || a >= 1) continue;
    if (dpq_membership(Frequency::irrational(a, 1), pq, eta, cap).member) return a;
  }
  return std::nullopt;
}

}  // namespace cocycle
