#include <cmath>
#include <random>

#include "../support/oracles.hpp"
#include "bohm/errors.hpp"
#include "bohm/modes.hpp"
#include "bohm/scalar.hpp"
#include "doctest.h"

using namespace bohm;

namespace {
FieldSample plane(double k, double x, double t) {
  const ModeSet s({{k, 1.0}});
  return eval_psi(s, x, t);
}
ModeSet demo_state() { return ModeSet({{0.0, 1.0}, {0.7, cplx(0.5, 0.3)}, {-1.2, cplx(0.2, -0.4)}}); }
}  // namespace

TEST_CASE("density examples") {
  CHECK(density_rho(plane(0.0, 0.3, 1.1)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(density_rho(FieldSample{0.7, 0.1, -0.4}) == 0.0);
  // cos2 negative tail is covered in the nw tests
}

TEST_CASE("current examples") {
  const FieldSample s = plane(0.75, 0.2, 0.4);
  CHECK(current_j(s) == doctest::Approx(0.6 * density_rho(s)).epsilon(1e-14));
  CHECK(current_j(FieldSample{0.7, 0.1, -0.4}) == 0.0);
  const ModeSet pm({{0.5, 1.0}, {-0.5, 1.0}});
  CHECK(std::abs(current_j(eval_psi(pm, 0.0, 0.8))) < 1e-15);
}

TEST_CASE("velocity examples") {
  CHECK(velocity(plane(0.75, 0.0, 0.0)).value == doctest::Approx(0.6).epsilon(1e-14));
  const ModeSet pm({{0.5, 1.0}, {-0.5, 1.0}});
  CHECK(std::abs(velocity(eval_psi(pm, 0.0, 0.3)).value) < 1e-15);
}

TEST_CASE("velocity flags the zero of rho in the three-mode state") {
  const ModeSet s = ModeSet::rest_frame({0, 400, -400}, 0, 0.9);
  const double t = 0.006;
  double a = -0.005, b = 0.005;
  // find a sign change on a scan, then bisect
  double fa = density_rho(eval_psi(s, a, t));
  bool found = false;
  for (int i = 1; i <= 400 && !found; ++i) {
    const double x = -0.005 + 0.01 * i / 400.0, fx = density_rho(eval_psi(s, x, t));
    if ((fx < 0) != (fa < 0)) {
      b = x;
      found = true;
    } else {
      a = x;
      fa = fx;
    }
  }
  REQUIRE(found);
  for (int i = 0; i < 200 && b - a > 0; ++i) {
    const double m = 0.5 * (a + b);
    if (m == a || m == b) break;
    ((density_rho(eval_psi(s, m, t)) < 0) == (fa < 0) ? a : b) = m;
  }
  CHECK(velocity(eval_psi(s, a, t)).divergent);
  // |v| grows without bound on the approach
  const double near = std::abs(velocity(eval_psi(s, a - 1e-9, t), 0).value);
  const double far = std::abs(velocity(eval_psi(s, a - 1e-5, t), 0).value);
  CHECK(near > 100 * far);
}

TEST_CASE("polar decomposition reproduces psi") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-3, 3);
  const ModeSet s = demo_state();
  for (int i = 0; i < 100; ++i) {
    const FieldSample f = eval_psi(s, u(rng), u(rng));
    const ScalarPolar p = polar(f);
    CHECK(p.A >= 0);
    CHECK(std::abs(std::polar(p.A, p.S) - f.psi) < 1e-14 * std::max(1.0, p.A));
  }
}

TEST_CASE("quantum potential examples") {
  CHECK(std::abs(quantum_potential([](double, double) { return 2.5; }, 0.3, 0.1, 1e-3)) < 1e-10);
  const double phi0 = quantum_potential_static([](double x) { return std::exp(-0.5 * x * x); }, 0.0, 1e-4);
  CHECK(phi0 == doctest::Approx(0.5).epsilon(1e-6));
  const double phi1 = quantum_potential_static([](double x) { return std::exp(-0.5 * x * x); }, 1.3, 1e-4);
  CHECK(phi1 == doctest::Approx(-0.5 * (1.3 * 1.3 - 1.0)).epsilon(1e-6));
  CHECK_THROWS_AS(quantum_potential_static([](double x) { return x; }, 0.0, 1e-3), DomainError);
  // plane wave: A constant, Phi = 0 and mu0^2 = 1
  const FieldSample s = plane(0.4, 0.2, 0.1);
  CHECK(effective_mass_sq(s) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("mass identity mu0^2 = 1 + 2 Phi converges as h^2") {
  const ModeSet s = demo_state();
  auto A = [&](double x, double t) { return std::abs(eval_psi(s, x, t).psi); };
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-2, 2);
  double r1 = 0, r2 = 0;
  for (int i = 0; i < 30; ++i) {
    const double x = u(rng), t = u(rng);
    if (A(x, t) < 0.3) continue;
    const double m2 = effective_mass_sq(eval_psi(s, x, t));
    r1 = std::max(r1, std::abs(m2 - 1 - 2 * quantum_potential(A, x, t, 2e-3)));
    r2 = std::max(r2, std::abs(m2 - 1 - 2 * quantum_potential(A, x, t, 1e-3)));
  }
  CHECK(r1 < 1e-4);
  CHECK(r1 / r2 == doctest::Approx(4.0).epsilon(0.25));
}

TEST_CASE("continuity equation") {
  const ModeSet s = demo_state();
  const double h = 1e-4;
  for (double x : {-1.0, 0.2, 1.7})
    for (double t : {0.0, 0.9}) {
      const double rt = (density_rho(eval_psi(s, x, t + h)) - density_rho(eval_psi(s, x, t - h))) / (2 * h);
      const double jx = (current_j(eval_psi(s, x + h, t)) - current_j(eval_psi(s, x - h, t))) / (2 * h);
      CHECK(std::abs(rt + jx) < 1e-7);
    }
}

TEST_CASE("velocity equals -S_x / S_t") {
  const ModeSet s = demo_state();
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int i = 0; i < 50; ++i) {
    const FieldSample f = eval_psi(s, u(rng), u(rng));
    const double n = std::norm(f.psi);
    const double Sx = (std::conj(f.psi) * f.dpsi_dx).imag() / n, St = (std::conj(f.psi) * f.dpsi_dt).imag() / n;
    const Velocity v = velocity(f);
    if (v.divergent) continue;
    CHECK(v.value == doctest::Approx(-Sx / St).epsilon(1e-12));
  }
}

TEST_CASE("parity: real even amplitudes give v(0, t) = 0") {
  const ModeSet s({{0.0, 1.0}, {0.8, 0.6}, {-0.8, 0.6}, {2.0, 0.2}, {-2.0, 0.2}});
  for (double t : {0.0, 0.37, 1.5, 8.0}) CHECK(std::abs(velocity(eval_psi(s, 0.0, t)).value) < 1e-14);
}
