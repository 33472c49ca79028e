#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "bohm/dispersion.hpp"
#include "bohm/errors.hpp"
#include "bohm/nw.hpp"
#include "bohm/simd.hpp"

namespace bohm::nw {

namespace {

constexpr double pi = std::numbers::pi;

double sinc_a(double d, double a) {
  // sin(d a) / d
  const double z = d * a;
  if (std::abs(z) < 1e-4) return a * (1.0 - z * z / 6.0);
  return std::sin(z) / d;
}

}  // namespace

PacketSpec PacketSpec::cos2(double a) {
  PacketSpec p;
  p.shape = Shape::cos2;
  p.a = a;
  p.validate();
  return p;
}

PacketSpec PacketSpec::gaussian(double k0, double sigma_k) {
  PacketSpec p;
  p.shape = Shape::gaussian;
  p.k0 = k0;
  p.sigma_k = sigma_k;
  p.validate();
  return p;
}

void PacketSpec::validate() const {
  if (shape == Shape::cos2) {
    if (!(a > 0) || !std::isfinite(a)) throw ConfigError("packet: cos2 half-width a must be > 0");
  } else {
    if (!(sigma_k > 0) || !std::isfinite(sigma_k)) throw ConfigError("packet: sigma_k must be > 0");
    if (!std::isfinite(k0)) throw ConfigError("packet: k0 must be finite");
  }
}

double PacketSpec::s(double k) const {
  if (shape == Shape::gaussian) {
    const double d = k - k0;
    return std::exp(-d * d / (4.0 * sigma_k * sigma_k));
  }
  const double q = pi / a;
  const double ak = std::abs(k);
  if (ak < 1e-6) return a * (1.0 - (ak * a) * (ak * a) / 6.0) / (1.0 - ak * ak / (q * q));
  const double d = ak - q;
  if (std::abs(d) < 1e-3) {
    // s = sin(k a) / (k (1 - k^2/q^2)) rewritten around k = q, where
    // sin(k a) = -sin(d a) and 1 - k^2/q^2 = -d (2q + d) / q^2.
    return sinc_a(d, a) * q * q / (ak * (2.0 * q + d));
  }
  return std::sin(ak * a) / (ak * (1.0 - ak * ak / (q * q)));
}

double PacketSpec::norm() const {
  if (shape == Shape::cos2) return std::sqrt(8.0 / (3.0 * a));
  return std::sqrt(std::sqrt(2.0 * pi) / sigma_k);
}

double PacketSpec::amplitude(double k) const { return norm() * s(k) / (2.0 * pi); }

double PacketSpec::nw_mass() const { return shape == Shape::cos2 ? 2.0 : 1.0; }

bool PacketSpec::even() const { return shape == Shape::cos2 || k0 == 0.0; }

double PacketSpec::tail_envelope(double k) const {
  const double ak = std::abs(k);
  if (shape == Shape::gaussian) return std::abs(s(k)) * std::sqrt(omega(k));
  const double q = pi / a;
  if (ak <= 1.5 * q) return a * std::sqrt(omega(k));
  return std::sqrt(omega(k)) / (ak * std::abs(1.0 - ak * ak / (q * q)));
}

double PacketSpec::k_hi(double rel) const {
  if (shape == Shape::gaussian) return k0 + 2.0 * sigma_k * std::sqrt(-std::log(rel));
  // envelope of s w^{-1/2}: 1 / (k |1 - k^2 a^2/pi^2| sqrt(w)), peak a at k = 0
  const double q = pi / a;
  auto env = [&](double k) { return 1.0 / (k * std::abs(1.0 - k * k / (q * q)) * std::sqrt(omega(k))); };
  double lo = 2.0 * q, hi = 2.0 * q;
  while (env(hi) > rel * a) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-9 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (env(mid) > rel * a ? lo : hi) = mid;
  }
  return hi;
}

double PacketSpec::k_lo(double rel) const {
  if (shape == Shape::gaussian) return k0 - 2.0 * sigma_k * std::sqrt(-std::log(rel));
  return -k_hi(rel);
}

double PacketSpec::x_extent(double t) const {
  if (shape == Shape::cos2) return a + std::abs(t) + 12.0;
  const double sx = 1.0 / (2.0 * sigma_k);
  return 14.0 * sx + 8.0 * sigma_k * std::abs(t) + 1.0;
}

double PacketSpec::x_centre(double t) const {
  if (shape == Shape::cos2) return 0.0;
  return group_velocity(k0) * t;
}

QuadratureSpec default_quadrature(const PacketSpec& p) {
  QuadratureSpec q;
  q.k_cut = std::max(std::abs(p.k_lo()), std::abs(p.k_hi()));
  q.abs_tol = 1e-11;
  q.rel_tol = 1e-10;
  q.max_subdivisions = 400000;
  return q;
}

namespace {

struct KRange {
  double lo, hi;
  bool folded;  // integrate over [0, hi] using evenness
};

KRange k_range(const PacketSpec& p, const QuadratureSpec& q) {
  if (p.shape == Shape::cos2) {
    const double K = q.k_cut > 0 ? q.k_cut : p.k_hi();
    return {0.0, K, true};
  }
  double lo = p.k_lo(), hi = p.k_hi();
  if (q.k_cut > 0) {
    lo = std::max(lo, p.k0 - q.k_cut);
    hi = std::min(hi, p.k0 + q.k_cut);
  }
  return {lo, hi, false};
}

QuadratureSpec oscillation_capped(const PacketSpec& p, const QuadratureSpec& q, double x, double t) {
  QuadratureSpec s = q;
  const double freq = std::abs(x) + std::abs(t) + (p.shape == Shape::cos2 ? p.a : 0.0) + 1e-3;
  s.max_panel = std::min(q.max_panel, 0.25 * 2.0 * pi / freq);
  return s;
}

// Oscillatory tail beyond the cut, estimated from the integrand size at the
// cut over the slowest phase rate; used only for cos2 where the tail is
// algebraic.
double truncation_estimate(const PacketSpec& p, double K, double x, double t, double extra_power) {
  if (p.shape != Shape::cos2) return 0.0;
  const double env = p.norm() / (2.0 * pi) * p.tail_envelope(K) * std::pow(omega(K), extra_power);
  double kap = 1e300;
  for (double s1 : {-1.0, 1.0})
    for (double s2 : {-1.0, 1.0}) kap = std::min(kap, std::abs(std::abs(x) + s1 * p.a + s2 * t));
  kap = std::max(kap, 1.0 / K);
  return 2.0 * env / kap;
}

}  // namespace

PsiResult psi_xt(const PacketSpec& p, double x, double t, const QuadratureSpec& q) {
  p.validate();
  q.validate();
  const KRange r = k_range(p, q);
  const QuadratureSpec qs = oscillation_capped(p, q, x, t);
  const cplx I{0.0, 1.0};
  QuadResultN res;
  if (r.folded) {
    auto f = [&](double k, cplx* out) {
      const double w = omega(k), sw = std::sqrt(w), A = p.amplitude(k);
      const cplx e = (2.0 * A) * std::polar(1.0, -w * t);
      const double c = std::cos(k * x), s = std::sin(k * x);
      out[0] = e * (c / sw);
      out[1] = e * (-k * s / sw);
      out[2] = -I * e * (c * sw);
    };
    res = integrate_1d(IntegrandN(f), 3, r.lo, r.hi, qs);
  } else {
    auto f = [&](double k, cplx* out) {
      const double w = omega(k), sw = std::sqrt(w), A = p.amplitude(k);
      const cplx e = A * std::polar(1.0, k * x - w * t);
      out[0] = e / sw;
      out[1] = I * k * e / sw;
      out[2] = -I * sw * e;
    };
    res = integrate_1d(IntegrandN(f), 3, r.lo, r.hi, qs);
  }
  if (!res.converged)
    throw NonConvergence("psi_xt: quadrature did not converge at x = " + std::to_string(x) +
                         ", t = " + std::to_string(t));
  const double trunc = truncation_estimate(p, r.hi, x, t, 0.0);
  return {{res.value[0], res.value[1], res.value[2]}, res.error + trunc};
}

NwResult psi_nw(const PacketSpec& p, double x, double t, const QuadratureSpec& q) {
  p.validate();
  q.validate();
  const KRange r = k_range(p, q);
  const QuadratureSpec qs = oscillation_capped(p, q, x, t);
  QuadResult res;
  if (r.folded) {
    res = integrate_1d(
        [&](double k) { return (2.0 * p.amplitude(k)) * std::polar(1.0, -omega(k) * t) * std::cos(k * x); }, r.lo, r.hi, qs);
  } else {
    res = integrate_1d([&](double k) { return p.amplitude(k) * std::polar(1.0, k * x - omega(k) * t); }, r.lo, r.hi, qs);
  }
  if (!res.converged)
    throw NonConvergence("psi_nw: quadrature did not converge at x = " + std::to_string(x) +
                         ", t = " + std::to_string(t));
  return {res.value, res.error + truncation_estimate(p, r.hi, x, t, -0.5)};
}

double default_dk(const PacketSpec& p) { return p.shape == Shape::cos2 ? 0.2 : p.sigma_k / 40.0; }

double F_kernel(double k, double kp, double x, double t) {
  const double w = omega(k), wp = omega(kp);
  if (k == kp) return -(x - k / w * t);
  return std::sin((k - kp) * x - (w - wp) * t) / (kp - k);
}

PacketField::PacketField(PacketSpec p, TableSpec t) : p_(p), t_(t) {
  p_.validate();
  if (t_.dk < 0 || !std::isfinite(t_.dk)) throw ConfigError("table: dk must be >= 0");
  const double lo = p_.k_lo(), hi = p_.k_hi();
  const double target = t_.dk > 0 ? t_.dk : default_dk(p_);
  const std::size_t n = std::max<std::size_t>(8, std::size_t(std::ceil((hi - lo) / target)));
  dk_ = (hi - lo) / double(n);
  std::vector<double> k;
  std::vector<cplx> c;
  if (!t_.offset) {
    for (std::size_t i = 0; i < n; ++i) k.push_back(lo + (double(i) + 0.5) * dk_);
  } else {
    for (std::size_t i = 0; i <= n; ++i) k.push_back(lo + double(i) * dk_);
  }
  for (double kk : k) c.emplace_back(dk_ * p_.amplitude(kk), 0.0);
  // endpoint nodes of the shifted grid carry half weight (trapezoid)
  if (t_.offset) {
    c.front() *= 0.5;
    c.back() *= 0.5;
  }
  spec_ = Spectrum(std::move(k), std::move(c));
  const std::size_t m = spec_.size();
  toeplitz_.assign(2 * m - 1, 0.0);
  for (std::size_t i = 0; i + 1 < 2 * m; ++i) {
    const double off = double(i) - double(m - 1);
    if (off != 0.0) toeplitz_[i] = 1.0 / (off * dk_);
  }
  u_.resize(m);
  for (std::size_t i = 0; i < m; ++i) u_[i] = spec_.coeffs()[i].real() / spec_.sqrt_omega()[i];
  // one alias period 2 pi / dk holds the whole discrete charge
  charge_ = 2.0 * pi * spec_.weight_sum() / dk_;
}

PacketField PacketField::shifted() const {
  TableSpec t = t_;
  t.dk = dk_;
  t.offset = !t_.offset;
  return PacketField(p_, t);
}

double PacketField::F(double x, double t) const {
  const std::size_t n = spec_.size();
  thread_local std::vector<double> a, b, c, d;
  a.resize(n);
  b.resize(n);
  c.resize(n);
  d.resize(n);
  const auto& k = spec_.k();
  const auto& w = spec_.omega();
  const auto& cf = spec_.coeffs();
  double diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double th = k[i] * x - w[i] * t;
    const double cs = std::cos(th), sn = std::sin(th);
    a[i] = u_[i] * w[i] * sn;
    b[i] = u_[i] * cs;
    c[i] = u_[i] * sn;
    d[i] = u_[i] * w[i] * cs;
    const double cr = cf[i].real();
    diag += cr * cr * (x - k[i] / w[i] * t);
  }
  // sum_{i != j} u_i u_j (w_i + w_j) sin(th_i - th_j) / (k_j - k_i)
  const double off = 2.0 * simd::toeplitz_bilinear2(toeplitz_.data() + (n - 1), a.data(), b.data(), c.data(),
                                                   d.data(), n);
  return (-0.5 * off + diag) / charge_;
}

double integral_F_continuous(const PacketField& f, double x, double t) { return f.F(x, t); }

}  // namespace bohm::nw
