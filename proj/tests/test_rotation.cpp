#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cocycle/error.hpp"
#include "cocycle/lyapunov.hpp"
#include "cocycle/rotation.hpp"

using namespace cocycle;

namespace {

constexpr double kPi = std::numbers::pi;

RotationOptions ropt(int64_t n) {
  RotationOptions o;
  o.n = n;
  return o;
}

// Orbit loop for the q-fold iterate (q alpha, A_q).
Loop iterate_loop(const Potential& v, double e, double alpha, int q) {
  return Loop::from_function([v, e, alpha, q](double x) {
    Mat2r m = Mat2r::identity();
    for (int j = 0; j < q; ++j) m = schrodinger_step(v, e, frac(x + j * alpha)) * m;
    return m;
  });
}

}  // namespace

TEST_CASE("free cocycle rotation") {
  Potential z = Potential::zero();
  Frequency g = Frequency::golden();
  RotationEstimate r = rotation_number(z, std::sqrt(2.0), g, ropt(1000000));
  CHECK(std::abs(r.rho - 0.125) < 1e-4);
  CHECK(r.method == RotationMethod::kOrbitLift);
  CHECK(density_of_states(rotation_number(z, 0.0, g, ropt(100000))) ==
        doctest::Approx(0.5).epsilon(1e-4));
  CHECK(density_of_states(rotation_number(z, 2.5, g, ropt(100000))) ==
        doctest::Approx(1.0).epsilon(1e-4));
  CHECK(density_of_states(rotation_number(z, -2.5, g, ropt(100000))) <= 1e-4);
  CHECK_THROWS_AS(rotation_number(z, 0.0, g, ropt(10)), Error);
}

TEST_CASE("constant rotation loop") {
  for (double phi : {0.3, 1.0, 2.5, -1.2}) {
    Loop l = Loop::constant(rotation(phi));
    RotationEstimate r = rotation_number(l, Frequency::golden(), ropt(1000));
    CHECK(r.rho == doctest::Approx(frac(phi / (2 * kPi))).epsilon(1e-12));
  }
}

TEST_CASE("rational frequency, free cocycle") {
  Potential z = Potential::zero();
  RotationEstimate r = rotation_number(z, 1.0, Frequency::rational(1, 2));
  CHECK(r.method == RotationMethod::kRationalAverage);
  CHECK(r.rho == doctest::Approx(1.0 / 6).epsilon(1e-14));
  CHECK(r.excluded == 0);
  // Oracle: eigenvalue argument of C_1 is pi/3.
  CHECK(r.rho == doctest::Approx(std::acos(0.5) / (2 * kPi)).epsilon(1e-14));
}

TEST_CASE("matrix rotation candidates") {
  std::vector<Mat2r> s{rotation(0.4)};
  std::vector<double> l{0.4};
  CHECK(matrix_rotation_turns(s, l, 10000) == doctest::Approx(0.4 / (2 * kPi)));
  std::vector<Mat2r> h{Mat2r{2.0, 0, 0, 0.5}};
  std::vector<double> hl{0.0};
  CHECK(matrix_rotation_turns(h, hl, 10000) == 0.0);
  std::vector<Mat2r> p{Mat2r{1.0, 1.0, 0, 1.0}};
  CHECK(std::isnan(matrix_rotation_turns(p, hl, 10000)));
}

TEST_CASE("elliptic integral on the two-step window") {
  Potential v = Potential::poisson_peak(10, 1e4);
  Frequency half = Frequency::rational(1, 2);
  double prev = -1;
  bool varies = false;
  for (double e : {-0.15, -0.13, -0.11, -0.1}) {
    RotationEstimate a = elliptic_rotation_integral(v, e, half);
    RotationEstimate b = rotation_number(v, e, half);
    CHECK(a.method == RotationMethod::kEllipticIntegral);
    CHECK(std::abs(a.rho - b.rho) < 1e-6);
    if (prev >= 0 && std::abs(a.rho - prev) > 1e-6) varies = true;
    prev = a.rho;
  }
  CHECK(varies);
  // Constant trace 2 cos psi0 gives psi0 / (2 pi q).
  Potential z = Potential::zero();
  RotationEstimate c = elliptic_rotation_integral(z, 2 * std::cos(0.3), Frequency::rational(0, 1));
  CHECK(c.rho == doctest::Approx(0.3 / (2 * kPi)).epsilon(1e-12));
  try {
    elliptic_rotation_integral(v, 3.0, half);
    CHECK(false);
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::kPrecondition);
  }
}

TEST_CASE("elliptic integral agrees with the rational average") {
  Potential b = Potential::peaky_bump(0.05, 0.25, 1.5);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ue(-1.0, 1.0);
  int tested = 0;
  for (int t = 0; t < 40 && tested < 10; ++t) {
    int q = 2 + t % 3;
    Frequency pq = Frequency::rational(1, q);
    double e = ue(rng);
    RotationEstimate a;
    try {
      a = elliptic_rotation_integral(b, e, pq);
    } catch (const Error&) {
      continue;
    }
    RotationEstimate r = rotation_number(b, e, pq);
    CHECK(std::abs(a.rho_bar - r.rho_bar) < 1e-6);
    ++tested;
  }
  CHECK(tested >= 5);
}

TEST_CASE("DOS is monotone over an energy grid") {
  Potential v = Potential::poisson_peak(10, 1e4);
  Frequency g = Frequency::golden();
  double prev = -1;
  for (int i = 0; i < 80; ++i) {
    double e = -3 + 13.0 * i / 79;
    double n = density_of_states(rotation_number(v, e, g, ropt(20000)));
    CHECK(n >= 0);
    CHECK(n <= 1);
    CHECK(n >= prev - 1e-9);
    prev = n;
  }
}

TEST_CASE("DOS consistency error") {
  RotationEstimate r;
  r.rho_bar = 0.7;
  r.n_steps = 100000;
  CHECK_THROWS_AS(density_of_states(r), Error);
}

TEST_CASE("q-compatibility") {
  Potential v = Potential::poisson_peak(3, 100);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ua(0.05, 0.95), ue(-1.5, 1.5);
  for (int t = 0; t < 50; ++t) {
    int q = 2 + t % 3;
    double a = ua(rng), e = ue(rng);
    RotationOptions o = ropt(4000 * q);
    RotationEstimate r1 = rotation_number(v, e, Frequency::irrational(a), o);
    o.n = 4000;
    RotationEstimate rq =
        rotation_number(iterate_loop(v, e, a, q), Frequency::irrational(frac(q * a)), o);
    double d = q * r1.rho_bar - rq.rho_bar;
    CHECK(std::abs(d - std::nearbyint(d)) < 1e-5);
  }
}

TEST_CASE("continuity in alpha") {
  Potential v = Potential::poisson_peak(10, 1e4);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> ua(0.1, 0.9), ue(-3, 10);
  for (int t = 0; t < 50; ++t) {
    double a = ua(rng), e = ue(rng);
    double r1 = rotation_number(v, e, Frequency::irrational(a), ropt(20000)).rho_bar;
    double r2 = rotation_number(v, e, Frequency::irrational(a + 5e-5), ropt(20000)).rho_bar;
    CHECK(std::abs(r1 - r2) < 0.01);
  }
}

TEST_CASE("non-identity-homotopic loop is rejected") {
  Loop l = Loop::from_function([](double x) { return rotation(2 * kPi * x); });
  CHECK_THROWS_AS(rotation_number(l, Frequency::golden(), ropt(1000)), Error);
}

TEST_CASE("UH soundness: certified energies have LE > 0 and locally constant rho") {
  Potential v = Potential::poisson_peak(10, 1e4);
  Frequency g = Frequency::golden();
  LEOptions lo;
  lo.n = 20000;
  lo.phases = 2;
  int certified = 0;
  for (double e : {-2.6, 2.3, 12.0, 20.0}) {
    UHResult u = uh_test(v, e, g);
    if (!u.uniformly_hyperbolic) continue;
    ++certified;
    CHECK(le_estimate(v, e, g, lo).value > 0);
    // In a gap the rotation number is pinned to the lattice {k alpha / 2}.
    double r0 = rotation_number(v, e, g, ropt(1000000)).rho_bar;
    for (double d : {-1e-4, 1e-4}) {
      double r1 = rotation_number(v, e + d, g, ropt(1000000)).rho_bar;
      CHECK(std::abs(r1 - r0) < 1e-5);
    }
  }
  CHECK(certified >= 2);
}
