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


#ifndef COCYCLE_LAB_HPP_
#define COCYCLE_LAB_HPP_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cocycle/arithmetic.hpp"
#include "cocycle/classify.hpp"
#include "cocycle/config.hpp"
#include "cocycle/error.hpp"
#include "cocycle/lyapunov.hpp"
#include "cocycle/potential.hpp"
#include "cocycle/rotation.hpp"

namespace cocycle {

inline constexpr const char* kCsvVersion = "# cocycle-lab v1";

struct RunOptions {
  unsigned threads = 1;
  std::optional<uint64_t> seed;  // overrides run.seed
};

const std::vector<std::string>& known_config_keys();

Potential potential_from_config(const Config& cfg);
Frequency frequency_from_config(const Config& cfg, uint64_t seed);

// Runs f(0..n-1) on up to `threads` workers; rethrows the first error.
void parallel_for(int64_t n, unsigned threads, const std::function<void(int64_t)>& f);

// Deterministic per-row seed.
uint64_t row_seed(uint64_t seed, uint64_t index);

struct ScanOptions {
  double e_min = -3;
  double e_max = 10;
  int64_t e_count = 512;
  LEOptions le;
  RotationOptions rotation;
  bool uh = true;
  UHOptions uh_options;
};

struct ScanRow {
  double e = 0;
  double nu = 0;
  double alpha = 0;
  LEEstimate le;
  std::optional<double> herman;
  std::optional<bool> uh;
  RotationEstimate rotation;
  double dos = 0;
};

std::vector<ScanRow> run_scan(const Potential& v, const Frequency& alpha,
                              const ScanOptions& opt, unsigned threads);
void write_scan_csv(std::ostream& os, const std::vector<ScanRow>& rows);

struct WindowSample {
  std::string window;  // ac, ac-rejected, pp, spectrum
  int k = 0;
  double e_lo = 0, e_hi = 0;
  double delta_k = 0;
  double margin_sign = 0, margin_amp = 0, margin_cos = 0;
  double e = 0;
  int64_t q = 0;
  std::string verdict;
  double delta = 0;
  double min_transversal_derivative = 0;
  std::optional<double> h_prime;
  std::optional<int> r_a;
  std::optional<double> re_theta_bar;
  std::string regularity;  // regular, transversal, not-regular
  std::optional<double> rho_integral, rho_rational;
  std::optional<double> le;
  std::optional<bool> uh;
};

struct WindowOptions {
  int theta_grid = 20000;
  int grid = 1024;
  int ac_samples = 5;
  int pp_samples = 9;
  double alpha_offset = 7.3e-4;  // LE check at p/q + offset
  LEOptions le;
  bool spectrum = true;
  std::optional<Frequency> spectrum_alpha;
  int spectrum_count = 64;
  UHOptions uh_options;
};

struct WindowReport {
  std::vector<WindowSample> samples;
  std::vector<double> spectrum_hits;
};

WindowReport find_windows(const Potential& v, const Frequency& pq, const WindowOptions& opt,
                          unsigned threads = 1);
void write_windows_csv(std::ostream& os, const WindowReport& r);

struct SpectrumResult {
  std::vector<double> e;
  std::vector<UHResult> uh;
  std::vector<double> non_uh;
  bool guarantee_applies = false;  // K >= 5 and [3, K-2] inside the window
  bool guarantee_ok = false;
};

SpectrumResult locate_spectrum(const Potential& v, const Frequency& alpha, double e_lo,
                               double e_hi, int count, const UHOptions& opt, unsigned threads);

// Maps an error to the CLI exit status: 2 for configuration and input
// errors, 3 for numerical failures.
int exit_code(ErrorCode code);

// Runs a subcommand and writes its CSV to `out`. Throws Error.
void run_subcommand(const std::string& name, const Config& cfg, std::ostream& out,
                    const RunOptions& opt);

const std::vector<std::string>& subcommands();

}  // namespace cocycle

#endif  // COCYCLE_LAB_HPP_
