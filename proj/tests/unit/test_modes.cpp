#include <algorithm>
#include <cmath>
#include <random>

#include "../support/oracles.hpp"
#include "bohm/errors.hpp"
#include "bohm/modes.hpp"
#include "doctest.h"

using namespace bohm;

namespace {

std::vector<std::pair<double, cplx>> as_pairs(const ModeSet& s) {
  std::vector<std::pair<double, cplx>> v;
  for (const Mode& m : s.modes()) v.push_back({m.k, m.phi});
  return v;
}

ModeSet random_state(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> k(-5, 5), c(-1, 1);
  std::vector<Mode> m;
  while (m.size() < n) {
    const double kk = k(rng);
    bool dup = false;
    for (const auto& e : m) dup = dup || std::abs(e.k - kk) < 0.05;
    if (!dup) m.push_back({kk, cplx(c(rng), c(rng))});
  }
  return ModeSet(std::move(m));
}

// Velocity for the oracle, flagged well before the true divergence so that
// RK4 never steps across a zero of rho.
oracle::VelocityFn oracle_velocity(const ModeSet& s) {
  const auto modes = as_pairs(s);
  return [modes](double x, double t) {
    const oracle::Psi p = oracle::naive_psi(modes, x, t);
    const double rho = oracle::naive_rho(p);
    const double scale = std::abs(p.psi) * std::max(std::abs(p.dx), std::abs(p.dt));
    return oracle::VelocitySample{oracle::naive_j(p) / rho, std::abs(rho) < 1e-2 * scale};
  };
}

double dist_to_polyline(double x, double t, const TrajPolyline& l) {
  double best = 1e300;
  const auto& v = l.vertices;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    const double dx = v[i + 1].x - v[i].x, dt = v[i + 1].t - v[i].t, n2 = dx * dx + dt * dt;
    const double u = n2 > 0 ? std::clamp(((x - v[i].x) * dx + (t - v[i].t) * dt) / n2, 0.0, 1.0) : 0.0;
    best = std::min(best, std::hypot(v[i].x + u * dx - x, v[i].t + u * dt - t));
  }
  return best;
}

}  // namespace

TEST_CASE("mode set validation") {
  CHECK_THROWS_AS(ModeSet({}), ConfigError);
  CHECK_THROWS_AS(ModeSet({{0.3, 1.0}, {0.3, 2.0}}), ConfigError);
  CHECK_THROWS_AS(ModeSet({{0.3, 0.0}, {0.5, 0.0}}), ConfigError);
  CHECK_THROWS_AS(ModeSet({{NAN, 1.0}}), ConfigError);
}

TEST_CASE("eval_psi examples") {
  const ModeSet one({{0.0, 1.0}});
  for (double t : {0.0, 0.7, 3.0}) {
    const FieldSample f = eval_psi(one, 1.3, t);
    CHECK(std::abs(f.psi - std::exp(cplx(0, -t))) < 1e-15);
  }
  const double k = 0.6, w = std::sqrt(1 + k * k);
  const ModeSet pm({{k, cplx(0.3, 0.2)}, {-k, cplx(0.3, 0.2)}});
  const FieldSample f = eval_psi(pm, 0, 0);
  CHECK(std::abs(f.psi - 2.0 / std::sqrt(w) * cplx(0.3, 0.2)) < 1e-15);
  CHECK(std::abs(f.dpsi_dx) < 1e-15);

  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-4, 4);
  const ModeSet s3 = random_state(rng, 3);
  for (int i = 0; i < 50; ++i) {
    const double z = u(rng), t = u(rng);
    const FieldSample a = eval_psi(s3, z, t);
    const oracle::Psi b = oracle::naive_psi(as_pairs(s3), z, t);
    CHECK(std::abs(a.psi - b.psi) < 1e-14);
    CHECK(std::abs(a.dpsi_dx - b.dx) < 1e-13);
    CHECK(std::abs(a.dpsi_dt - b.dt) < 1e-13);
  }
}

TEST_CASE("velocity_discrete agrees with the bilinears") {
  const ModeSet one({{0.75, 1.0}});
  CHECK(velocity_discrete(one, 0.4, 0.9).value == doctest::Approx(0.6).epsilon(1e-14));
  const ModeSet pm({{0.4, 1.0}, {-0.4, 1.0}});
  CHECK(std::abs(velocity_discrete(pm, 0.0, 1.3).value) < 1e-15);
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int rep = 0; rep < 10; ++rep) {
    const ModeSet s = random_state(rng, 2 + rep % 3);
    for (int i = 0; i < 20; ++i) {
      const double z = u(rng), t = u(rng);
      const Velocity a = velocity_discrete(s, z, t), b = velocity(eval_psi(s, z, t));
      if (a.divergent || b.divergent) continue;
      CHECK(a.value == doctest::Approx(b.value).epsilon(1e-10).scale(1.0));
    }
  }
}

TEST_CASE("integral_F examples") {
  const ModeSet one({{0.75, 1.0}});
  CHECK(integral_F(one, 0.3, 0.5) == doctest::Approx(0.3 - 0.6 * 0.5).epsilon(1e-14));
  const ModeSet s({{0.0, 1.0}, {0.9, 0.5}});
  CHECK(integral_F(s, 0.4, 0.0) - integral_F(s, 0.4, 0.0) == 0.0);
}

TEST_CASE("double sum is pure imaginary") {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int rep = 0; rep < 20; ++rep) {
    const ModeSet s = random_state(rng, 2 + rep % 3);
    for (int i = 0; i < 20; ++i) {
      const FParts p = integral_F_parts(s, u(rng), u(rng));
      CHECK(std::abs(p.re_sum) < 1e-12 * std::abs(p.im_sum) + 1e-14);
    }
  }
}

TEST_CASE("F is constant along ODE trajectories") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1, 1);
  const double window = 2.0;
  int checked = 0;
  for (int rep = 0; rep < 8; ++rep) {
    const ModeSet s = random_state(rng, 2 + rep % 3);
    const double x0 = u(rng);
    const oracle::Path p = oracle::rk4(oracle_velocity(s), x0, 0.0, 1.0, 2e-4);
    if (p.x.size() < 10) continue;
    const double F0 = integral_F(s, p.x.front(), p.t.front());
    double drift = 0;
    for (std::size_t i = 0; i < p.x.size(); i += 50) drift = std::max(drift, std::abs(integral_F(s, p.x[i], p.t[i]) - F0));
    CHECK(drift < 1e-8 * window);
    ++checked;
  }
  CHECK(checked >= 4);
}

TEST_CASE("mean rest frame") {
  CHECK(mean_rest_frame_check(ModeSet({{0.0, 1.0}})) == 0.0);
  CHECK(std::abs(mean_rest_frame_check(ModeSet({{0.8, 1.0}, {-0.8, 1.0}}))) < 1e-16);
  const ModeSet f1 = ModeSet::rest_frame({0, 400, -400}, 0, 0.9);
  CHECK(std::abs(mean_rest_frame_check(f1)) < 1e-12);
  CHECK(std::norm(f1.modes()[0].phi) / f1.norm() == doctest::Approx(0.9));
  const ModeSet asym = ModeSet::rest_frame({0.1, 300, -50}, 0, 0.8);
  CHECK(std::abs(mean_rest_frame_check(asym)) < 1e-12);
  CHECK_THROWS_AS(ModeSet::rest_frame({0, 1}, 0, 0.9), ConfigError);
  CHECK_THROWS_AS(ModeSet::rest_frame({0, 1, 2}, 0, 0.9), ConfigError);  // all moving the same way
}

TEST_CASE("single mode gives straight parallel contours") {
  const ModeSet one({{0.75, 1.0}});
  const TrajectorySet ts = trajectories(one, Grid2D{0, 1, 21, 0, 1, 21}, 6);
  CHECK(ts.events.empty());
  REQUIRE(ts.lines.size() == 6);
  for (const auto& l : ts.lines) {
    for (const auto& v : l.vertices) CHECK(std::abs(v.x - 0.6 * v.t - l.level) < 1e-12);
    for (SegmentClass c : l.segments) CHECK(c == SegmentClass::particle);
  }
}

TEST_CASE("three-mode state shows pair structure in a 0.01 window") {
  const ModeSet s = ModeSet::rest_frame({0, 400, -400}, 0, 0.9);
  const TrajectorySet ts = trajectories(s, Grid2D{-0.005, 0.005, 81, 0, 0.02, 81}, 20);
  CHECK_FALSE(ts.resolution_warning);
  std::size_t closed = 0;
  for (const auto& l : ts.lines) closed += l.closed;
  CHECK(ts.events.size() + closed >= 1);
  // classification flips only where rho changes sign, and class follows time direction
  for (const auto& l : ts.lines) {
    const std::size_t n = l.vertices.size();
    for (std::size_t i = 0; i < l.segments.size(); ++i) {
      const auto& a = l.vertices[i];
      const auto& b = l.vertices[(i + 1) % n];
      if (a.rho_sign == b.rho_sign && a.rho_sign != 0)
        CHECK(static_cast<int>(l.segments[i]) == a.rho_sign);
      if (l.segments[i] == SegmentClass::particle) CHECK(b.t >= a.t - 1e-12);
      if (l.segments[i] == SegmentClass::antiparticle) CHECK(b.t <= a.t + 1e-12);
    }
  }
}

TEST_CASE("mild two-mode state has no sign change and single-valued contours") {
  const ModeSet s({{0.0, 1.0}, {0.1, 1.0}});
  const TrajectorySet ts = trajectories(s, Grid2D{-0.005, 0.005, 41, 0, 20, 41}, 10);
  CHECK(ts.events.empty());
  for (double r : ts.rho.v) CHECK(r > 0);
  for (const auto& l : ts.lines)
    for (std::size_t i = 0; i + 1 < l.vertices.size(); ++i) CHECK(l.vertices[i + 1].t > l.vertices[i].t);
}

TEST_CASE("contours are shadowed by ODE trajectories") {
  const ModeSet s({{0.0, 1.0}, {0.6, 0.5}});
  const Grid2D g{-3, 3, 121, 0, 4, 81};
  const TrajectorySet ts = trajectories(s, g, 8);
  for (double r : ts.rho.v) REQUIRE(r > 0);
  const double cell = std::max(g.dx(), g.dt());
  for (const auto& l : ts.lines) {
    const auto& v0 = l.vertices.front();
    if (v0.t > 1e-12) continue;  // launched from the bottom edge
    const oracle::Path p = oracle::rk4(oracle_velocity(s), v0.x, 0.0, 4.0, 1e-3);
    for (std::size_t i = 0; i < p.x.size(); i += 100) {
      if (p.x[i] < g.x_min || p.x[i] > g.x_max) break;
      CHECK(dist_to_polyline(p.x[i], p.t[i], l) < cell);
    }
  }
}

TEST_CASE("boost: rho and J transform as a 4-vector and F stays constant") {
  const ModeSet s({{0.0, 1.0}, {0.5, cplx(0.4, 0.1)}});
  const double eta = 0.6, ch = std::cosh(eta), sh = std::sinh(eta);
  const ModeSet b = s.boosted(eta);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int i = 0; i < 30; ++i) {
    const double x = u(rng), t = u(rng);
    const Event e = boost_event(eta, x, t);
    const FieldSample f = eval_psi(s, x, t), fb = eval_psi(b, e.x, e.t);
    CHECK(std::abs(fb.psi - f.psi) < 1e-13);
    CHECK(density_rho(fb) == doctest::Approx(ch * density_rho(f) - sh * current_j(f)).epsilon(1e-11));
    CHECK(current_j(fb) == doctest::Approx(ch * current_j(f) - sh * density_rho(f)).epsilon(1e-11));
  }
  const oracle::Path p = oracle::rk4(oracle_velocity(s), 0.3, 0.0, 2.0, 1e-3);
  REQUIRE_FALSE(p.halted);
  const Event e0 = boost_event(eta, p.x.front(), p.t.front());
  const double F0 = integral_F(b, e0.x, e0.t);
  for (std::size_t i = 0; i < p.x.size(); i += 100) {
    const Event e = boost_event(eta, p.x[i], p.t[i]);
    CHECK(std::abs(integral_F(b, e.x, e.t) - F0) < 1e-8);
  }
}

TEST_CASE("three-mode state has both signs of rho in every sampled frame") {
  const ModeSet s = ModeSet::rest_frame({0, 400, -400}, 0, 0.9);
  const Grid2D g{-0.005, 0.005, 41, 0, 0.02, 41};
  for (double eta : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
    const ModeSet b = s.boosted(eta);
    int pos = 0, neg = 0;
    for (std::size_t j = 0; j < g.n_t; ++j)
      for (std::size_t i = 0; i < g.n_x; ++i) {
        const Event e = boost_event(eta, g.x(i), g.t(j));
        const double r = pair_densities(b, e.x, e.t).rho_n;
        pos += r > 0;
        neg += r < 0;
      }
    CHECK(pos > 0);
    CHECK(neg > 0);
  }
}
