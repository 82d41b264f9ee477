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


#ifndef COCYCLE_FOURIER_HPP_
#define COCYCLE_FOURIER_HPP_

#include <vector>

#include "cocycle/mat2.hpp"

namespace cocycle {

// Coefficients f^(k), k = 0..n/2, of a real function sampled at x_j = j/n,
// normalised so that f(x) = sum_k f^(k) e^{2 pi i k x}.
struct RealFourier {
  int n = 0;
  std::vector<cplx> c;
};

RealFourier to_fourier(const std::vector<double>& samples);
std::vector<double> to_grid(const RealFourier& f);

// Trigonometric interpolant evaluated at x.
double evaluate(const RealFourier& f, double x);

// Samples of f(x_j + s) on an m-point grid (m >= n), Nyquist mode dropped.
std::vector<double> resample(const std::vector<double>& samples, int m, double s = 0);
inline std::vector<double> shifted(const std::vector<double>& samples, double s) {
  return resample(samples, static_cast<int>(samples.size()), s);
}

// sum over k in Z of max(1, |k|)^r |f^(k)|.
double fourier_norm(const RealFourier& f, double r = 0);
double fourier_norm(const std::vector<double>& samples, double r = 0);

// Largest |f^(k)| over |k| >= k0; a resolution diagnostic.
double tail_magnitude(const RealFourier& f, int k0);

}  // namespace cocycle

#endif  // COCYCLE_FOURIER_HPP_
