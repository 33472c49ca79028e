#include <cmath>
#include <vector>

#include "bohm/nearnr.hpp"
#include "doctest.h"

using namespace bohm;

namespace {
std::vector<double> span(double a, double b, int n) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(a + (b - a) * i / (n - 1));
  return v;
}
// max |rho - rho_NW| / max rho over +-6 sigma_x at t = 0
double relative_correction(double k0, double sk) {
  const nw::PacketField f(nw::PacketSpec::gaussian(k0, sk));
  const double sx = 1 / (2 * sk);
  double md = 0, mr = 0;
  for (double x : span(-6 * sx, 6 * sx, 241)) {
    md = std::max(md, std::abs(nearnr::w_exact_table(f, x, 0).d2W));
    mr = std::max(mr, density_rho(f.sample(x, 0)));
  }
  return md / mr;
}
}  // namespace

TEST_CASE("W is even for an even packet and d2W is its second derivative") {
  const nw::PacketField f(nw::PacketSpec::gaussian(0.0, 0.2));
  const double h = 1e-2;
  for (double x : {0.0, 1.0, 3.5}) {
    const auto l = nearnr::w_exact_table(f, -x, 0.3), r = nearnr::w_exact_table(f, x, 0.3);
    CHECK(l.W == doctest::Approx(r.W).epsilon(1e-10));
    const double fd = (nearnr::w_exact_table(f, x + h, 0.3).W - 2 * r.W + nearnr::w_exact_table(f, x - h, 0.3).W) / (h * h);
    CHECK(fd == doctest::Approx(r.d2W).epsilon(1e-3).scale(1e-3 * std::abs(r.d2W) + 1e-14));
  }
}

TEST_CASE("rho - rho_NW = d2W on the table") {
  const nw::PacketField f(nw::PacketSpec::gaussian(0.1, 0.05));
  for (double x : span(-50, 50, 11))
    for (double t : {0.0, 2.0}) {
      const SpectralSample s = f.sample_full(x, t);
      const double lhs = density_rho(s.f) - std::norm(s.nw);
      CHECK(std::abs(lhs - nearnr::w_exact_table(f, x, t).d2W) < 1e-15);
    }
  const nearnr::IdentityCheck id = nearnr::check_density_identity(f, span(-40, 40, 41), 0.0);
  CHECK(id.max_ratio < 2.0);
}

TEST_CASE("charge and first moment of rho and rho_NW agree") {
  const nw::PacketField f(nw::PacketSpec::gaussian(0.1, 0.05));
  const nearnr::Moments m = nearnr::moments(f, 0.0);
  CHECK(m.m0_rho == doctest::Approx(m.m0_nw).epsilon(1e-8));
  CHECK(m.m0_rho == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(m.m1_rho == doctest::Approx(m.m1_nw).epsilon(1e-6).scale(1.0));
}

TEST_CASE("time form of the density difference in the narrow regime") {
  const nw::PacketField f(nw::PacketSpec::gaussian(0.1, 0.05));
  std::vector<nearnr::TimeForm> tf;
  double peak = 0;
  for (double x : span(-40, 40, 41)) {
    tf.push_back(nearnr::density_difference_timeform(f, x, 0.0));
    peak = std::max(peak, std::abs(tf.back().lhs));
  }
  std::size_t significant = 0;
  for (const auto& r : tf) {
    CHECK_FALSE(r.step_conflict);
    CHECK(std::abs(r.rhs27a - r.rhs27b) < 1e-3 * peak);
    if (std::abs(r.lhs) < 0.1 * peak) continue;
    ++significant;
    CHECK(std::abs(r.lhs - r.rhs27b) < 0.1 * std::abs(r.lhs));
  }
  CHECK(significant >= 10);
}

TEST_CASE("w_approx tracks W for a narrow packet") {
  const nw::PacketField f(nw::PacketSpec::gaussian(0.1, 0.05));
  double num = 0, den = 0;
  for (double x : span(-60, 60, 241)) {
    const double W = nearnr::w_exact_table(f, x, 0).W, a = nearnr::w_approx(f, x, 0);
    num += (a - W) * (a - W);
    den += W * W;
  }
  CHECK(std::sqrt(num / den) < 0.05);
}

TEST_CASE("position map") {
  const nw::PacketField f(nw::PacketSpec::gaussian(0.0, 0.05));
  CHECK(std::abs(nearnr::nw_position_map(f, 0.0, 0.0).f) < 1e-12);
  for (double x : {2.0, 7.0, 15.0}) {
    const auto l = nearnr::nw_position_map(f, -x, 0.0), r = nearnr::nw_position_map(f, x, 0.0);
    CHECK(l.f == doctest::Approx(-r.f).epsilon(1e-8));
    CHECK(r.x_nw == doctest::Approx(x + r.f));
  }
  const nearnr::CorrectionField cf = nearnr::correction_field(nw::PacketField(nw::PacketSpec::gaussian(0.1, 0.05)),
                                                              span(-60, 60, 241), 0.0);
  const nearnr::Pushforward pf = nearnr::pushforward_l1(cf);
  CHECK(pf.monotone);
  CHECK(pf.improvement > 5);
}

TEST_CASE("relative correction is quartic in the momentum spread at k0 = 0") {
  const double r = relative_correction(0.0, 0.05) / relative_correction(0.0, 0.025);
  CHECK(r == doctest::Approx(16.0).epsilon(0.3));
}
