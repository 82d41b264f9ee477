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


#include "cocycle/fourier.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include "cocycle/error.hpp"

namespace cocycle {

namespace {

// FFTW planning is not thread safe; execution on distinct arrays is.
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

std::vector<cplx> forward(const std::vector<double>& in) {
  int n = static_cast<int>(in.size());
  std::vector<double> buf(in);
  std::vector<cplx> out(n / 2 + 1);
  fftw_plan p;
  {
    std::lock_guard<std::mutex> g(plan_mutex());
    p = fftw_plan_dft_r2c_1d(n, buf.data(), reinterpret_cast<fftw_complex*>(out.data()),
                             FFTW_ESTIMATE);
  }
  fftw_execute(p);
  {
    std::lock_guard<std::mutex> g(plan_mutex());
    fftw_destroy_plan(p);
  }
  for (cplx& z : out) z /= n;
  return out;
}

std::vector<double> backward(std::vector<cplx> c, int n) {
  std::vector<double> out(n);
  fftw_plan p;
  {
    std::lock_guard<std::mutex> g(plan_mutex());
    p = fftw_plan_dft_c2r_1d(n, reinterpret_cast<fftw_complex*>(c.data()), out.data(),
                             FFTW_ESTIMATE);
  }
  fftw_execute(p);
  {
    std::lock_guard<std::mutex> g(plan_mutex());
    fftw_destroy_plan(p);
  }
  return out;
}

}  // namespace

RealFourier to_fourier(const std::vector<double>& samples) {
  require(samples.size() >= 2 && samples.size() % 2 == 0, ErrorCode::kParameter,
          "to_fourier: grid size must be even and >= 2");
  return {static_cast<int>(samples.size()), forward(samples)};
}

std::vector<double> to_grid(const RealFourier& f) { return backward(f.c, f.n); }

double evaluate(const RealFourier& f, double x) {
  double s = f.c[0].real();
  int kmax = f.n / 2;
  for (int k = 1; k < kmax; ++k) {
    double t = 2 * std::numbers::pi * k * x;
    s += 2 * (f.c[k].real() * std::cos(t) - f.c[k].imag() * std::sin(t));
  }
  return s;
}

std::vector<double> resample(const std::vector<double>& samples, int m, double s) {
  int n = static_cast<int>(samples.size());
  require(m >= n && m % 2 == 0, ErrorCode::kParameter, "resample: target grid too small");
  std::vector<cplx> c = forward(samples);
  std::vector<cplx> out(m / 2 + 1, cplx(0, 0));
  for (int k = 0; k < n / 2; ++k) {
    out[k] = c[k] * std::polar(1.0, 2 * std::numbers::pi * k * s);
  }
  return backward(std::move(out), m);
}

double fourier_norm(const RealFourier& f, double r) {
  double s = std::abs(f.c[0]);
  for (int k = 1; k < static_cast<int>(f.c.size()); ++k) {
    double w = r == 0 ? 1.0 : std::pow(static_cast<double>(k), r);
    s += (k == f.n / 2 ? 1.0 : 2.0) * w * std::abs(f.c[k]);
  }
  return s;
}

double fourier_norm(const std::vector<double>& samples, double r) {
  return fourier_norm(to_fourier(samples), r);
}

double tail_magnitude(const RealFourier& f, int k0) {
  double m = 0;
  for (int k = std::max(k0, 0); k < static_cast<int>(f.c.size()); ++k) {
    m = std::max(m, std::abs(f.c[k]));
  }
  return m;
}

}  // namespace cocycle
