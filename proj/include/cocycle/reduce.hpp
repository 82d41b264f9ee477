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


#ifndef COCYCLE_REDUCE_HPP_
#define COCYCLE_REDUCE_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include "cocycle/arithmetic.hpp"
#include "cocycle/cocycle.hpp"
#include "cocycle/fourier.hpp"
#include "cocycle/mat2.hpp"
#include "cocycle/potential.hpp"

namespace cocycle {

// Grid samples of a traceless field [[a, b], [c, -a]].
struct Sl2Field {
  std::vector<double> a, b, c;

  explicit Sl2Field(int n = 0) : a(n, 0.0), b(n, 0.0), c(n, 0.0) {}
  int size() const { return static_cast<int>(a.size()); }
  Mat2r at(int i) const { return {a[i], b[i], c[i], -a[i]}; }
  void set(int i, const Mat2r& m);
  Sl2Field shifted(double s) const;
  Sl2Field resampled(int m, double s = 0) const;
  double norm(double r = 0) const;  // max component Fourier norm
  double sup() const;
};

// Closed-form conjugator of an elliptic matrix: B^-1 M B = R_angle with
// angle in (-pi, pi) carrying the sign of M21.
Mat2r elliptic_conjugator(const Mat2r& m, double* angle);

struct EllipticLoopForm {
  std::vector<double> x;
  std::vector<Mat2r> b;
  std::vector<double> a;
  std::vector<double> c;  // winding correction
  double periodicity_defect = 0;
  int homotopy_k = 0;
  double residual = 0;
};

EllipticLoopForm elliptic_loop_diagonalize(const Loop& loop, int grid_size);

struct PeriodicNormalForm {
  Frequency pq = Frequency::rational(0, 1);
  std::vector<double> x;
  std::vector<Mat2r> b;
  std::vector<double> phi;
  std::vector<double> psi;  // sum_k phi(x + k p/q)
  double delta = 0;         // min distance of psi to pi Z
  double residual = 0;
};

// The grid size is rounded up to a multiple of 2q.
PeriodicNormalForm periodic_normal_form(const Loop& loop, const Frequency& pq,
                                        int grid_size);

struct CohomologicalSolution {
  RealFourier theta;
  double mean = 0;
  double min_divisor = 0;
  int min_divisor_k = 0;
};

CohomologicalSolution cohomological_solve(const RealFourier& phi, const Frequency& alpha,
                                          int cutoff, double divisor_floor);

struct LedgerRow {
  int step = 0;
  double norm_phi_drift = 0;
  double norm_z = 0;
  double norm_f = 0;
  double residual = 0;
};

struct ReductionState {
  int step = 0;
  std::vector<double> phi;
  std::vector<double> phi0;
  Sl2Field f;
  Sl2Field y;  // generator of the last step
  double delta = 0;
  double rotation_residual = 0;  // max |W - R_phi~| of the last step
  double smoothness = 0;         // r, ledger metadata
  std::vector<LedgerRow> ledger;
};

struct StepOptions {
  double f_threshold = 0.5;
  double delta_floor = 1e-3;
  int newton_max_iter = 50;
  double newton_tol = 1e-12;
};

ReductionState cheap_trick_step(const ReductionState& state, double alpha,
                                const Frequency& pq, const StepOptions& opt = {});

struct ReduceOptions {
  int grid = 16384;
  int j_max = 3;
  double target_tolerance = 1e-6;
  int cutoff = 0;  // 0: grid / 2 - 1
  double divisor_floor = 1e-10;
  double smoothness = 0;
  double eta = 0;  // > 0: require alpha in D_{p/q}(eta)
  int64_t cert_cap = 10000;
  StepOptions step;
};

struct ReductionResult {
  std::vector<double> x;
  std::vector<Mat2r> b_total;
  double theta0 = 0;
  Mat2r a0;
  double construction_residual = 0;
  double final_residual = 0;  // on the verification grid
  int verification_grid = 0;
  double det_defect = 0;
  double min_divisor = 0;
  double delta = 0;
  std::vector<LedgerRow> ledger;
};

ReductionResult cheap_trick_reduce(const Loop& loop, const Frequency& alpha,
                                   const Frequency& pq, const ReduceOptions& opt = {});
ReductionResult cheap_trick_reduce(const Potential& v, double e, const Frequency& alpha,
                                   const Frequency& pq, const ReduceOptions& opt = {});

// Distance of rho - theta0 / 2pi to the lattice {k alpha / 2 mod 1}, |k| <= kmax.
double rotation_lattice_defect(double rho, double theta0, double alpha, int kmax = 8);

void write_ledger_csv(std::ostream& os, const std::vector<LedgerRow>& ledger);
// Row-major 2x2 blocks, little-endian doubles.
void write_conjugator_dump(const std::string& path, const std::vector<Mat2r>& b);
std::vector<Mat2r> read_conjugator_dump(const std::string& path);

}  // namespace cocycle

#endif  // COCYCLE_REDUCE_HPP_
