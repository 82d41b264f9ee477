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

#ifndef COCYCLE_ARITHMETIC_HPP_
#define COCYCLE_ARITHMETIC_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cocycle {

struct Convergent {
  int64_t p = 0;
  int64_t q = 1;
  double value() const { return static_cast<double>(p) / static_cast<double>(q); }
};

// Continued-fraction convergents p_n/q_n of alpha in (0,1) with q_n <= cap,
// starting at the first one with q_n >= 1 and p_n >= 1 (so 0/1 is dropped).
// Stops early when alpha is reached to floating-point resolution.
std::vector<Convergent> convergents(double alpha, int64_t cap);

class Frequency {
 public:
  static Frequency rational(int64_t p, int64_t q);
  static Frequency irrational(double value, int64_t cap = 10'000'000);
  static Frequency golden();

  double value() const { return value_; }
  bool is_rational() const { return rational_; }
  int64_t p() const { return p_; }
  int64_t q() const { return q_; }
  const std::vector<Convergent>& convergent_list() const { return conv_; }
  std::string str() const;

 private:
  Frequency() = default;
  double value_ = 0;
  bool rational_ = false;
  int64_t p_ = 0, q_ = 1;
  std::vector<Convergent> conv_;
};

enum class DiophantineClass { kDC1, kDSAlpha, kDpq };

const char* diophantine_class_name(DiophantineClass c);

struct Witness {
  int64_t k = 0;
  int64_t l = 0;
};

struct DiophantineCert {
  DiophantineClass cls = DiophantineClass::kDC1;
  double eta = 0;      // eta for DC1 / D_pq, kappa for DS_alpha
  double sigma = 2;    // exponent (sigma, or the |k| exponent for DS_alpha)
  int64_t checked_up_to = 0;
  bool member = false;
  std::optional<Witness> witness;
  bool outside_interval = false;  // D_pq: failed the interval test
};

// |alpha - k/l| >= eta / l^sigma for all 1 <= l <= cap.
DiophantineCert dc1_membership(const Frequency& alpha, double eta,
                               double sigma, int64_t cap);

// ]p/q - eta, p/q + eta[ intersected with DC1(eta^2, 3).
DiophantineCert dpq_membership(const Frequency& alpha, const Frequency& pq,
                               double eta, int64_t cap);

// |2 rho - k alpha - l| >= kappa / |k|^exponent for all 1 <= |k| <= cap.
DiophantineCert ds_membership(double rho, const Frequency& alpha, double kappa,
                              int64_t cap, double exponent = 2.0);

struct DensityEstimate {
  double fraction = 0;
  double binomial_sd = 0;
  int64_t samples = 0;
  int64_t members = 0;
};

// Monte-Carlo density of D_{p/q}(eta) inside its interval.
DensityEstimate dpq_density(const Frequency& pq, double eta, int64_t samples,
                            int64_t cap, uint64_t seed);

// Uniform sample from D_{p/q}(eta) restricted to |alpha - p/q| in
// [inner_lo, inner_hi]; rejection sampling.
std::optional<double> sample_dpq(const Frequency& pq, double eta, int64_t cap,
                                 double inner_lo, double inner_hi,
                                 uint64_t seed, int max_tries = 10000);

}  // namespace cocycle

#endif  // COCYCLE_ARITHMETIC_HPP_
