#include <cmath>
#include <numbers>
#include <random>

#include "../support/oracles.hpp"
#include "bohm/errors.hpp"
#include "bohm/nw.hpp"
#include "doctest.h"

using namespace bohm;
using namespace bohm::nw;

namespace {
const PacketField& cos2_field() {
  static const PacketField f(PacketSpec::cos2(1.0));
  return f;
}
const PacketField& gauss_field() {
  static const PacketField f(PacketSpec::gaussian(0.1, 0.3));
  return f;
}
}  // namespace

TEST_CASE("packet validation") {
  CHECK_THROWS_AS(PacketSpec::cos2(0.0).validate(), ConfigError);
  CHECK_THROWS_AS(PacketSpec::cos2(-1.0).validate(), ConfigError);
  CHECK_THROWS_AS(PacketSpec::gaussian(0.0, 0.0).validate(), ConfigError);
  CHECK_NOTHROW(PacketSpec::gaussian(0.3, 0.05).validate());
}

TEST_CASE("cos2 NW amplitude at t = 0") {
  for (double a : {1.0, 2.0}) {
    const PacketSpec p = PacketSpec::cos2(a);
    const QuadratureSpec q = default_quadrature(p);
    const double N = std::sqrt(8.0 / (3.0 * a));
    for (double x : {0.0, 0.3 * a, 0.77 * a, 0.98 * a, 1.2 * a, 3.0 * a}) {
      const double want = std::abs(x) < a ? N * std::pow(std::cos(std::numbers::pi * x / (2 * a)), 2) : 0.0;
      const NwResult r = psi_nw(p, x, 0.0, q);
      CHECK(r.error < 1e-5);
      CHECK(std::abs(r.chi - want) < 2 * r.error + 1e-9);
      CHECK(std::abs(r.chi.imag()) < 1e-9);
    }
    CHECK(p.nw_mass() == doctest::Approx(2.0));
  }
}

TEST_CASE("cos2 packet is even") {
  const PacketSpec p = PacketSpec::cos2(1.0);
  const QuadratureSpec q = default_quadrature(p);
  CHECK(p.even());
  for (double t : {0.0, 0.7}) {
    for (double x : {0.2, 0.9, 1.6}) {
      const PsiResult l = psi_xt(p, -x, t, q), r = psi_xt(p, x, t, q);
      CHECK(std::abs(l.f.psi - r.f.psi) < 1e-9);
      CHECK(std::abs(density_rho(l.f) - density_rho(r.f)) < 1e-9);
      CHECK(std::abs(current_j(l.f) + current_j(r.f)) < 1e-9);
    }
  }
}

TEST_CASE("gaussian psi agrees with a midpoint sum") {
  const double k0 = 0.1, sk = 0.3;
  const PacketSpec p = PacketSpec::gaussian(k0, sk);
  const QuadratureSpec q = default_quadrature(p);
  // independent normalization: 2 pi int |A|^2 dk = 1
  const double N = std::sqrt(std::sqrt(2 * std::numbers::pi) / sk);
  auto amp = [&](double k) { return N / (2 * std::numbers::pi) * std::exp(-(k - k0) * (k - k0) / (4 * sk * sk)); };
  CHECK(p.amplitude(0.37) == doctest::Approx(amp(0.37)).epsilon(1e-12));
  for (double x : {-3.0, 0.0, 1.1})
    for (double t : {0.0, 0.8, 2.5}) {
      const cplx want = oracle::riemann(
          [&](double k) {
            const double w = oracle::omega(k);
            return cplx(amp(k) / std::sqrt(w)) * std::exp(cplx(0, k * x - w * t));
          },
          k0 - 14 * sk, k0 + 14 * sk, 20000);
      const PsiResult r = psi_xt(p, x, t, q);
      CHECK(std::abs(r.f.psi - want) < 1e-8);
      CHECK(r.error < 1e-8);
    }
}

TEST_CASE("packet table matches adaptive quadrature") {
  const PacketField& f = cos2_field();
  const QuadratureSpec q = default_quadrature(f.packet());
  for (double x : {0.0, 0.5, 1.3})
    for (double t : {0.0, 0.6}) {
      const PsiResult r = psi_xt(f.packet(), x, t, q);
      CHECK(std::abs(f.sample(x, t).psi - r.f.psi) < 1e-7);
      CHECK(std::abs(f.nw(x, t) - psi_nw(f.packet(), x, t, q).chi) < 1e-7);
    }
  CHECK(f.charge() == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(gauss_field().charge() == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("densities: rho_NW is nonnegative and rho_NW0 is |rho| rescaled") {
  const PacketField& f = cos2_field();
  std::vector<double> xs;
  for (int i = 0; i <= 60; ++i) xs.push_back(-3 + 0.1 * i);
  for (double t : {0.0, 0.5}) {
    const DensityProfile d = densities(f, xs, t);
    REQUIRE(d.rows.size() == xs.size());
    const double scale = f.packet().nw_mass() / d.abs_rho_mass;
    bool negative = false;
    for (const auto& r : d.rows) {
      CHECK(r.rho_nw >= 0);
      CHECK(r.rho_nw0 == doctest::Approx(std::abs(r.rho) * scale));
      negative = negative || r.rho < 0;
    }
    CHECK(negative);  // the cos2 packet has negative rho in its tails
  }
  // the rescaled |rho| is close to rho_NW near the centre, rho itself is not
  const DensityProfile c = densities(f, xs, 0.0);
  for (const auto& r : c.rows)
    if (std::abs(r.x) < 0.11) CHECK(std::abs(r.rho_nw0 - r.rho_nw) < 0.02 * r.rho_nw);
}

TEST_CASE("charge is conserved and continuity holds") {
  const PacketField& f = cos2_field();
  const double q0 = integrate_x(f, 0.0, [&](double x) { return density_rho(f.sample(x, 0.0)); });
  const double q1 = integrate_x(f, 1.0, [&](double x) { return density_rho(f.sample(x, 1.0)); });
  CHECK(q0 == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(q1 == doctest::Approx(q0).epsilon(1e-8));
  const double nw1 = integrate_x(f, 1.0, [&](double x) { return std::norm(f.nw(x, 1.0)); });
  CHECK(nw1 == doctest::Approx(2.0).epsilon(1e-6));
  const double h = 1e-4;
  for (double x : {0.1, 0.56, 0.9, 1.4})
    for (double t : {0.2, 0.7}) {
      const double rt = (density_rho(f.sample(x, t + h)) - density_rho(f.sample(x, t - h))) / (2 * h);
      const double jx = (current_j(f.sample(x + h, t)) - current_j(f.sample(x - h, t))) / (2 * h);
      CHECK(std::abs(rt + jx) < 1e-6);
    }
}

TEST_CASE("acausal probability") {
  const PacketField& f = cos2_field();
  CHECK(acausal_probability(f, 0.0) < 1e-9);
  for (double t : {0.1, 0.5, 1.0}) {
    const double P = acausal_probability(f, t);
    CHECK(P > 0);
    CHECK(P < 1);
  }
  CHECK_THROWS_AS(acausal_probability(gauss_field(), 1.0), ConfigError);
}

TEST_CASE("F kernel and the continuous integral of motion") {
  for (double k : {-1.0, 0.0, 0.4})
    for (double x : {0.3, -1.2})
      for (double t : {0.0, 0.9}) {
        const double diag = F_kernel(k, k, x, t);
        CHECK(diag == doctest::Approx(-(x - k / oracle::omega(k) * t)).epsilon(1e-14));
        CHECK(F_kernel(k, k + 1e-7, x, t) == doctest::Approx(diag).epsilon(1e-5).scale(1.0));
      }
  const PacketField& f = cos2_field();
  const double h = 1e-4, Q = f.charge();
  for (double t : {0.0, 0.4}) {
    CHECK(std::abs(f.F(0.0, t)) < 1e-12);
    for (double x : {0.2, 0.7, 1.3}) {
      const double dFdx = (f.F(x + h, t) - f.F(x - h, t)) / (2 * h);
      const double dFdt = (f.F(x, t + h) - f.F(x, t - h)) / (2 * h);
      CHECK(dFdx == doctest::Approx(density_rho(f.sample(x, t)) / Q).epsilon(1e-6).scale(1.0));
      CHECK(dFdt == doctest::Approx(-current_j(f.sample(x, t)) / Q).epsilon(1e-6).scale(1.0));
      CHECK(f.F(-x, t) == doctest::Approx(-f.F(x, t)).epsilon(1e-12));
    }
  }
}

TEST_CASE("annihilation fronts: class flips come in pairs on closed lines") {
  const PacketField& f = cos2_field();
  const TrajectorySet ts = annihilation_fronts(f, Grid2D{0, 3, 41, 0, 2, 31}, 12);
  CHECK_FALSE(ts.lines.empty());
  for (const auto& l : ts.lines) {
    if (!l.closed) continue;
    std::size_t flips = 0;
    for (std::size_t i = 0; i < l.segments.size(); ++i)
      flips += l.segments[i] != l.segments[(i + 1) % l.segments.size()];
    CHECK(flips % 2 == 0);
  }
  for (const auto& e : ts.events) CHECK(e.x >= 0);
}

TEST_CASE("local Lambert model solves its ODE") {
  const LambertLocalModel m{-1.1, 0.74, -0.4, 1.0};
  const double C = m.invariant(0.7, 0.05);
  const double h = 1e-6;
  int solved = 0;
  for (int branch : {0, -1})
    for (double t : {0.0, 0.02, 0.04}) {
      double x;
      try {
        x = m.solve(branch, C, t);
      } catch (const DomainError&) {
        continue;
      }
      ++solved;
      CHECK(m.invariant(x, t) == doctest::Approx(C).epsilon(1e-12));
      const double dxdt = (m.solve(branch, C, t + h) - m.solve(branch, C, t - h)) / (2 * h);
      CHECK(std::abs(dxdt - m.velocity(x)) < 1e-6 * std::max(1.0, std::abs(m.velocity(x))));
    }
  CHECK(solved >= 4);
  CHECK_THROWS_AS(m.solve(0, C, 10.0), DomainError);
}

TEST_CASE("local Lambert family: degenerate case is a straight line") {
  const std::vector<double> ts{0.0, 0.1, 0.2};
  const LocalTrajectoryFamily fam = lambert_local_trajectories(-1.0, 0.5, -0.3, 0.5, 0.1, ts);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    CHECK(fam.x_w0[i] == doctest::Approx(0.5 + 0.3 * ts[i] + 0.1));
    CHECK(fam.x_wm1[i] == doctest::Approx(fam.x_w0[i]));
  }
  const LocalTrajectoryFamily beyond = lambert_local_trajectories(-1.1, 0.74, -0.4, 1.0, 5.0, {0.0});
  CHECK(std::isnan(beyond.x_w0[0]));
}
