#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cocycle/error.hpp"
#include "cocycle/potential.hpp"

using namespace cocycle;

namespace {

// Bisection root of lam z^2 - (2 lam + 1) z + lam on [lo, hi].
double quadratic_root(double lam, double lo, double hi) {
  auto f = [lam](double z) { return lam * z * z - (2 * lam + 1) * z + lam; };
  double flo = f(lo);
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    double fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("poisson peak values") {
  Potential v = Potential::poisson_peak(10, 1e4);
  CHECK(v(0.0) == 10.0);
  CHECK(v(0.5) == doctest::Approx(10.0 / (1 + 4e4)).epsilon(1e-14));
  CHECK(v.K() == 10.0);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 100; ++i) {
    double x = u(rng);
    CHECK(v(x) == doctest::Approx(v(1.0 - x)).epsilon(1e-12));
  }
}

TEST_CASE("pole data against root finding") {
  PoleData p = pole_data(10, 1e4);
  double z0 = quadratic_root(1e4, 0.5, 1.0);
  double z1 = quadratic_root(1e4, 1.0, 2.0);
  CHECK(p.z0 == doctest::Approx(z0).epsilon(1e-13));
  CHECK(p.z1 == doctest::Approx(z1).epsilon(1e-13));
  CHECK(p.z0 == doctest::Approx(0.990050).epsilon(1e-6));
  CHECK(p.z1 == doctest::Approx(1.010050).epsilon(1e-6));
  CHECK(0 < p.z0);
  CHECK(p.z0 < 1);
  CHECK(1 < p.z1);
  CHECK(p.C == -10.0 / 1e4);
  double lam = 1e4;
  for (double z : {p.z0, p.z1})
    CHECK(std::abs(lam * z * z - (2 * lam + 1) * z + lam) / lam < 1e-12);
  CHECK(std::abs(p.z0 * p.z1 - 1.0) < 1e-12);
}

TEST_CASE("strip half-width and complex evaluation") {
  Potential v = Potential::poisson_peak(10, 1e4);
  double h = v.strip_halfwidth();
  CHECK(h == doctest::Approx(0.9 * std::log(v.poles()->z1) / (2 * std::numbers::pi)));
  cplx mid = v(cplx(0, h / 2));
  CHECK(std::isfinite(mid.real()));
  CHECK(std::isfinite(mid.imag()));
  CHECK_THROWS_AS(v(cplx(0.2, 1.01 * h)), Error);
  try {
    v(cplx(0.2, 2 * h));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kStripViolation);
  }
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ux(0, 1), uy(-h, h);
  for (int i = 0; i < 100; ++i) {
    cplx z(ux(rng), uy(rng));
    cplx a = v(std::conj(z)), b = std::conj(v(z));
    CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)));
  }
}

TEST_CASE("factored rational extension agrees") {
  const double K = 10, lam = 1e4;
  Potential v = Potential::poisson_peak(K, lam);
  PoleData p = *v.poles();
  double h = v.strip_halfwidth();
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ux(0, 1), uy(-h, h);
  for (int i = 0; i < 1000; ++i) {
    cplx x(ux(rng), uy(rng));
    cplx z = std::exp(cplx(0, 2 * std::numbers::pi) * x);
    cplx f1 = K / (1.0 + lam * (2.0 - z - 1.0 / z));
    cplx f2 = p.C * z / ((z - p.z0) * (z - p.z1));
    cplx f3 = v(x);
    CHECK(std::abs(f1 - f2) <= 1e-10 * std::abs(f1));
    CHECK(std::abs(f3 - f2) <= 1e-10 * std::abs(f2));
  }
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(Potential::poisson_peak(0, 1), Error);
  CHECK_THROWS_AS(Potential::poisson_peak(1, -1), Error);
  CHECK_THROWS_AS(Potential::peaky_bump(0.0, 0.4, 20), Error);
  CHECK_THROWS_AS(Potential::peaky_bump(0.1, 1.0, 20), Error);
  CHECK_THROWS_AS(Potential::peaky_bump(0.1, 0.4, -2), Error);
}

TEST_CASE("peaky bump shape") {
  Potential v = Potential::peaky_bump(0.1, 0.4, 20);
  CHECK(v(0.25) == doctest::Approx(20).epsilon(1e-15));
  CHECK(v(0.05) == 0.0);
  CHECK(v(0.45) == 0.0);
  CHECK(v.support_length() == doctest::Approx(0.3));
  CHECK(v.support_length() < 1.0 / 3);
  CHECK_FALSE(v.analytic());
  CHECK_THROWS_AS(v(cplx(0.2, 1e-3)), Error);
  PotentialValidation r = validate_potential(v);
  CHECK(r.valid);
  CHECK(r.derivative_sign_changes == 1);
  CHECK(r.grid_min >= 0);
  // Analytic derivative against central differences.
  for (double x : {0.12, 0.2, 0.3, 0.38}) {
    double h = 1e-6;
    double fd = (v(x + h) - v(x - h)) / (2 * h);
    CHECK(v.derivative(x) == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("poisson peak grid invariants") {
  Potential v = Potential::poisson_peak(10, 1e4);
  PotentialValidation r = validate_potential(v);
  CHECK(r.valid);
  CHECK(r.max_relative_error < 1e-10);
  for (double x : {0.001, 0.01, 0.3, 0.7}) {
    double h = 1e-7;
    double fd = (v(x + h) - v(x - h)) / (2 * h);
    CHECK(v.derivative(x) == doctest::Approx(fd).epsilon(1e-5));
  }
}

TEST_CASE("tabulated support and interpolation") {
  std::vector<double> s(16, 0.0);
  s[3] = 1;
  s[4] = 2;
  s[5] = 1;
  Potential v = Potential::tabulated(s);
  CHECK(v.K() == 2);
  CHECK(v(4.0 / 16) == 2);
  CHECK(v(4.5 / 16) == doctest::Approx(1.5));
  CHECK(v.support().start == doctest::Approx(2.0 / 16));
  CHECK(v.support_length() == doctest::Approx(4.0 / 16));
  CHECK(v(1.0 / 16) == 0);
  CHECK(v(7.0 / 16) == 0);
}

TEST_CASE("zero potential and descriptors") {
  Potential z = Potential::zero();
  CHECK(z(0.3) == 0);
  CHECK(z(cplx(0.3, 5.0)) == cplx(0, 0));
  CHECK(z.support_length() == 0);
  auto d = Potential::poisson_peak(10, 1e4).describe();
  CHECK(d["kind"] == "poisson-peak");
  CHECK(d["K"] == "10");
  CHECK(d["lambda"] == "10000");
}
