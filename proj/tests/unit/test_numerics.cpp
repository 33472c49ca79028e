#include <cmath>
#include <numbers>
#include <random>

#include "../support/oracles.hpp"
#include "bohm/contour.hpp"
#include "bohm/dispersion.hpp"
#include "bohm/errors.hpp"
#include "bohm/grid.hpp"
#include "bohm/lambert_w.hpp"
#include "bohm/quadrature.hpp"
#include "doctest.h"

using namespace bohm;
using cplx = std::complex<double>;

TEST_CASE("omega and group velocity") {
  CHECK(omega(0.0) == 1.0);
  CHECK(omega(0.75) == doctest::Approx(1.25).epsilon(1e-15));
  CHECK(omega(-0.75) == omega(0.75));
  CHECK(group_velocity(0.0) == 0.0);
  CHECK(group_velocity(0.75) == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(group_velocity(-0.75) == -group_velocity(0.75));
  CHECK(std::abs(group_velocity(1e6) - 1.0) < 1e-10);
  CHECK(group_velocity(1e6) < 1.0);
}

TEST_CASE("omega^2 differences are exact") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-20, 20);
  for (int i = 0; i < 1000; ++i) {
    const double k = u(rng), kp = u(rng);
    const double lhs = omega(k) * omega(k) - omega(kp) * omega(kp), rhs = k * k - kp * kp;
    CHECK(std::abs(lhs - rhs) <= 8 * std::numeric_limits<double>::epsilon() * (1 + k * k + kp * kp));
  }
}

TEST_CASE("integrate_1d examples") {
  QuadratureSpec q;
  q.abs_tol = 1e-12;
  q.rel_tol = 1e-12;
  auto one = integrate_1d([](double) { return cplx(1.0); }, 0, 1, q);
  CHECK(one.converged);
  CHECK(std::abs(one.value - 1.0) < q.abs_tol);
  auto wave = integrate_1d([](double k) { return std::exp(cplx(0, k)); }, -std::numbers::pi, std::numbers::pi, q);
  CHECK(std::abs(wave.value) < q.abs_tol);
  auto lor = integrate_1d([](double k) { return cplx(1.0 / (1 + k * k)); }, -50, 50, q);
  // arctan antiderivative
  CHECK(std::abs(lor.value.real() - 2 * std::atan(50.0)) < 1e-10);
  CHECK(std::abs(lor.value.real() - std::numbers::pi) < 0.05);
}

TEST_CASE("integrate_1d is linear, additive and deterministic") {
  QuadratureSpec q;
  auto f = [](double x) { return cplx(std::sin(3 * x) * std::exp(-x), std::cos(x * x)); };
  auto g = [](double x) { return cplx(x * x, -x); };
  const auto a = integrate_1d(f, 0, 4, q).value, b = integrate_1d(g, 0, 4, q).value;
  const auto ab = integrate_1d([&](double x) { return 2.0 * f(x) - 3.0 * g(x); }, 0, 4, q).value;
  CHECK(std::abs(ab - (2.0 * a - 3.0 * b)) < 1e-9);
  const auto left = integrate_1d(f, 0, 1.3, q).value, right = integrate_1d(f, 1.3, 4, q).value;
  CHECK(std::abs(left + right - a) < 1e-9);
  const auto again = integrate_1d(f, 0, 4, q).value;
  CHECK(again == a);
}

TEST_CASE("integrate_1d reports non-convergence") {
  QuadratureSpec q;
  q.abs_tol = 1e-14;
  q.rel_tol = 1e-14;
  q.max_subdivisions = 3;
  const auto r = integrate_1d([](double x) { return cplx(std::sin(200 * x)); }, 0, 10, q);
  CHECK_FALSE(r.converged);
}

TEST_CASE("quadrature spec validation") {
  QuadratureSpec q;
  q.abs_tol = 0;
  CHECK_THROWS_AS(q.validate(), ConfigError);
}

TEST_CASE("lambert_w examples") {
  CHECK(lambert_w(0, 0.0) == 0.0);
  CHECK(lambert_w(0, -1.0 / std::numbers::e) == doctest::Approx(-1.0).epsilon(1e-7));
  CHECK(lambert_w(-1, -1.0 / std::numbers::e) == doctest::Approx(-1.0).epsilon(1e-7));
  CHECK(std::abs(lambert_w(0, 1.0) - oracle::lambert_newton(0, 1.0)) < 1e-12);
  CHECK(std::abs(lambert_w(0, 1.0) - 0.5671432904097838) < 1e-6);
  CHECK_THROWS_AS(lambert_w(0, -0.5), DomainError);
  CHECK_THROWS_AS(lambert_w(-1, 0.1), DomainError);
  CHECK_THROWS_AS(lambert_w(-1, 0.0), DomainError);
  CHECK_THROWS_AS(lambert_w(1, 0.5), DomainError);
}

TEST_CASE("lambert_w round trip on both branches") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0, 1);
  const double ie = 1.0 / std::numbers::e;
  for (int i = 0; i < 2000; ++i) {
    const double y0 = -ie + (1e3 + ie) * u(rng) * u(rng) * u(rng);
    const double w0 = lambert_w(0, y0);
    CHECK(std::abs(w0 * std::exp(w0) - y0) <= 1e-12 * std::max(1.0, std::abs(y0)));
    CHECK(w0 >= -1.0);
    const double ym = -ie * u(rng);
    if (ym >= 0 || ym < -ie) continue;
    const double wm = lambert_w(-1, ym);
    CHECK(std::abs(wm * std::exp(wm) - ym) <= 1e-12 * std::max(1.0, std::abs(ym)));
    CHECK(wm <= -1.0);
  }
  for (double y : {-0.3678, -0.2, -1e-3, 0.5, 10.0, 1e5})
    CHECK(lambert_w(0, y) == doctest::Approx(oracle::lambert_newton(0, y)).epsilon(1e-10));
  for (double y : {-0.3678, -0.2, -1e-3, -1e-8})
    CHECK(lambert_w(-1, y) == doctest::Approx(oracle::lambert_newton(-1, y)).epsilon(1e-10));
}

namespace {
GridField sample(const Grid2D& g, const std::function<double(double, double)>& f) {
  GridField F{g, std::vector<double>(g.n_x * g.n_t)};
  for (std::size_t j = 0; j < g.n_t; ++j)
    for (std::size_t i = 0; i < g.n_x; ++i) F.v[j * g.n_x + i] = f(g.x(i), g.t(j));
  return F;
}
}  // namespace

TEST_CASE("grid validation") {
  CHECK_THROWS_AS((Grid2D{1, 0, 5, 0, 1, 5}.validate()), ConfigError);
  CHECK_THROWS_AS((Grid2D{0, 1, 1, 0, 1, 5}.validate()), ConfigError);
  CHECK_THROWS_AS((Grid2D{0, 1, 5, 0, 0, 5}.validate()), ConfigError);
  CHECK_NOTHROW((Grid2D{0, 1, 2, 0, 1, 2}.validate()));
}

TEST_CASE("contours of an affine field") {
  const Grid2D g{0, 1, 11, 0, 2, 7};
  const double lv[] = {0.5};
  auto lines = extract_contours(sample(g, [](double x, double) { return x; }), lv);
  REQUIRE(lines.size() == 1);
  CHECK_FALSE(lines[0].closed);
  for (const auto& p : lines[0].pts) CHECK(std::abs(p.x - 0.5) < 1e-14);
  CHECK(lines[0].pts.size() == g.n_t);

  const double lv2[] = {0.37, 1.2};
  auto tilted = extract_contours(sample(g, [](double x, double t) { return 2 * x - 0.3 * t; }), lv2);
  REQUIRE(tilted.size() == 2);
  for (const auto& l : tilted)
    for (const auto& p : l.pts) CHECK(std::abs(2 * p.x - 0.3 * p.t - l.level) < 1e-13);
}

TEST_CASE("contour of the unit circle") {
  const Grid2D g{-1.5, 1.5, 61, -1.5, 1.5, 61};
  const double lv[] = {1.0};
  auto lines = extract_contours(sample(g, [](double x, double t) { return x * x + t * t; }), lv);
  REQUIRE(lines.size() == 1);
  CHECK(lines[0].closed);
  const double diag = std::hypot(g.dx(), g.dt());
  for (const auto& p : lines[0].pts) CHECK(std::abs(std::hypot(p.x, p.t) - 1.0) < diag);
}

TEST_CASE("unbracketed level gives an empty result") {
  const Grid2D g{0, 1, 5, 0, 1, 5};
  const double lv[] = {7.0};
  CHECK(extract_contours(sample(g, [](double x, double) { return x; }), lv).empty());
}

TEST_CASE("saddle cells are resolved consistently") {
  // x t has a saddle at the origin; the level 0 lines are the axes
  const Grid2D g{-1, 1, 4, -1, 1, 4};
  const double lv[] = {0.05};
  auto lines = extract_contours(sample(g, [](double x, double t) { return x * t; }), lv);
  CHECK(lines.size() == 2);
  for (const auto& l : lines)
    for (const auto& p : l.pts) CHECK(p.x * p.t > 0);
}
