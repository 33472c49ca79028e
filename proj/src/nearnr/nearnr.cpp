#include "bohm/nearnr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bohm/parallel.hpp"
#include "bohm/simd.hpp"

namespace bohm::nearnr {

namespace {

constexpr double eps = std::numeric_limits<double>::epsilon();

struct Phased {
  std::vector<double> re, im;
};

Phased& scratch() {
  thread_local Phased p;
  return p;
}

double rho_at(const nw::PacketField& f, double x, double t) { return density_rho(f.sample(x, t)); }

double jx_at(const nw::PacketField& f, double x, double t) {
  const SpectralSample s = f.sample_full(x, t);
  return (std::conj(s.f.psi) * s.d2x).imag();
}

// Bound on |psi| |psi_t| from the table, the rounding scale of rho.
double rho_scale(const nw::PacketField& f) {
  const Spectrum& sp = f.spectrum();
  double a = 0, b = 0;
  for (std::size_t i = 0; i < sp.size(); ++i) {
    a += std::abs(sp.coeffs()[i]) / sp.sqrt_omega()[i];
    b += std::abs(sp.coeffs()[i]) * sp.sqrt_omega()[i];
  }
  return a * b;
}

double rho_tt(const nw::PacketField& f, double x, double t, double h) {
  return (rho_at(f, x, t + h) - 2.0 * rho_at(f, x, t) + rho_at(f, x, t - h)) / (h * h);
}

}  // namespace

WValue w_exact_table(const nw::PacketField& f, double x, double t) {
  const Spectrum& sp = f.spectrum();
  Phased& z = scratch();
  sp.phased(x, t, z.re, z.im);
  const simd::WSums s = simd::w_quadratic_forms(sp.k().data(), sp.omega().data(), sp.sqrt_omega().data(),
                                                z.re.data(), z.im.data(), sp.size());
  return {-0.5 * s.w, -0.5 * s.d2w, 0.0};
}

WValue w_exact(const nw::PacketField& f, double x, double t) {
  WValue w = w_exact_table(f, x, t);
  const WValue alt = w_exact_table(f.shifted(), x, t);
  w.error = std::abs(w.d2W - alt.d2W);
  return w;
}

double w_approx(const nw::PacketField& f, double x, double t) {
  const Spectrum& sp = f.spectrum();
  Phased& z = scratch();
  sp.phased(x, t, z.re, z.im);
  const auto& k = sp.k();
  KahanSum c_re, c_im, cx_re, cx_im, cxx_re, cxx_im;
  for (std::size_t i = 0; i < sp.size(); ++i) {
    c_re.add(z.re[i]);
    c_im.add(z.im[i]);
    cx_re.add(k[i] * z.re[i]);
    cx_im.add(k[i] * z.im[i]);
    cxx_re.add(k[i] * k[i] * z.re[i]);
    cxx_im.add(k[i] * k[i] * z.im[i]);
  }
  const cplx chi(c_re.value(), c_im.value());
  const cplx chi_x = cplx(0, 1) * cplx(cx_re.value(), cx_im.value());
  const cplx chi_xx = -cplx(cxx_re.value(), cxx_im.value());
  // d^2|chi|^2 - 4|chi_x|^2 = 2 Re(chi* chi_xx) - 2 |chi_x|^2
  return (2.0 * (std::conj(chi) * chi_xx).real() - 2.0 * std::norm(chi_x)) / 32.0;
}

TimeForm density_difference_timeform(const nw::PacketField& f, double x, double t, double h) {
  TimeForm r;
  r.lhs = rho_at(f, x, t) - std::norm(f.nw(x, t));
  r.rhs27a = (jx_at(f, x, t + h) - jx_at(f, x, t - h)) / (2.0 * h) / 8.0;
  r.rhs27b = -rho_tt(f, x, t, h) / 8.0;
  const double half = -rho_tt(f, x, t, 0.5 * h) / 8.0;
  const double diff = std::abs(r.rhs27b - half);
  r.richardson = diff / std::max(std::abs(r.rhs27b), 1e-300);
  // second differences lose about eps * scale / h^2 to rounding
  const double noise = 16.0 * eps * rho_scale(f) / (0.25 * h * h);
  r.step_conflict = diff > 1e-2 * std::abs(r.rhs27b) + noise;
  return r;
}

PositionMap nw_position_map(const nw::PacketField& f, double x, double t, double eps_rho) {
  const SpectralSample s = f.sample_full(x, t);
  const Velocity v = velocity(s.f, eps_rho);
  PositionMap m;
  m.x_nw = x;
  if (v.divergent) {
    m.flagged = true;
    return m;
  }
  const double jt = (std::conj(s.f.dpsi_dt) * s.f.dpsi_dx + std::conj(s.f.psi) * s.dxt).imag();
  m.f = jt / (8.0 * density_rho(s.f));
  m.x_nw = x + m.f;
  return m;
}

CorrectionField correction_field(const nw::PacketField& f, const std::vector<double>& xs, double t, unsigned threads,
                                 double h) {
  CorrectionField cf;
  cf.t = t;
  cf.rows.resize(xs.size());
  parallel_for(xs.size(), threads, [&](std::size_t i) {
    const double x = xs[i];
    const WValue w = w_exact_table(f, x, t);
    const PositionMap m = nw_position_map(f, x, t);
    cf.rows[i] = {x, w.W, w.d2W, rho_at(f, x, t), std::norm(f.nw(x, t)), rho_tt(f, x, t, h), m.f, m.x_nw, m.flagged};
  });
  return cf;
}

Pushforward pushforward_l1(const CorrectionField& cf) {
  const auto& r = cf.rows;
  const std::size_t n = r.size();
  Pushforward out;
  if (n < 3) return out;
  double peak = 0;
  for (const auto& row : r) peak = std::max(peak, std::abs(row.rho));
  // rows with negligible or unresolved density stay in place
  std::vector<double> xm(n), dm(n);
  for (std::size_t i = 0; i < n; ++i)
    xm[i] = r[i].flagged || std::abs(r[i].rho) < 1e-8 * peak ? r[i].x : r[i].x_nw;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t a = i == 0 ? 0 : i - 1, b = i + 1 == n ? n - 1 : i + 1;
    const double jac = (xm[b] - xm[a]) / (r[b].x - r[a].x);
    if (!(jac > 0)) out.monotone = false;
    dm[i] = r[i].rho / jac;
  }
  // mapped density back on the original nodes by linear interpolation
  KahanSum l0, l1;
  std::size_t seg = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = r[i].x;
    double mapped = 0.0;
    if (x >= xm.front() && x <= xm.back()) {
      while (seg + 2 < n && xm[seg + 1] < x) ++seg;
      const double u = (x - xm[seg]) / (xm[seg + 1] - xm[seg]);
      mapped = dm[seg] + u * (dm[seg + 1] - dm[seg]);
    }
    const double w = i == 0 ? r[1].x - r[0].x
                     : i + 1 == n ? r[n - 1].x - r[n - 2].x
                                  : r[i + 1].x - r[i - 1].x;
    l0.add(0.5 * w * std::abs(r[i].rho - r[i].rho_nw));
    l1.add(0.5 * w * std::abs(mapped - r[i].rho_nw));
  }
  out.l1_unmapped = l0.value();
  out.l1_mapped = l1.value();
  out.improvement = out.l1_unmapped / std::max(out.l1_mapped, 1e-300);
  return out;
}

Moments moments(const nw::PacketField& f, double t) {
  Moments m{};
  m.m0_rho = nw::integrate_x(f, t, [&](double x) { return rho_at(f, x, t); }, 1e-12);
  m.m0_nw = nw::integrate_x(f, t, [&](double x) { return std::norm(f.nw(x, t)); }, 1e-12);
  m.m1_rho = nw::integrate_x(f, t, [&](double x) { return x * rho_at(f, x, t); }, 1e-12);
  m.m1_nw = nw::integrate_x(f, t, [&](double x) { return x * std::norm(f.nw(x, t)); }, 1e-12);
  return m;
}

IdentityCheck check_density_identity(const nw::PacketField& f, const std::vector<double>& xs, double t,
                                     unsigned threads) {
  const nw::PacketField alt = f.shifted();
  const nw::PacketSpec& p = f.packet();
  const QuadratureSpec q = nw::default_quadrature(p);
  const double scale = rho_scale(f);
  std::vector<double> res(xs.size()), tol(xs.size());
  parallel_for(xs.size(), threads, [&](std::size_t i) {
    const double x = xs[i];
    const nw::PsiResult ps = nw::psi_xt(p, x, t, q);
    const nw::NwResult nr = nw::psi_nw(p, x, t, q);
    const double rho = density_rho(ps.f), rnw = std::norm(nr.chi);
    const double e = ps.error, en = nr.error;
    const double d_rho = e * (std::abs(ps.f.psi) + std::abs(ps.f.dpsi_dt)) + e * e;
    const double d_nw = 2.0 * std::abs(nr.chi) * en + en * en;
    const double w = w_exact_table(f, x, t).d2W, w2 = w_exact_table(alt, x, t).d2W;
    const double rounding = 64.0 * eps * scale;
    res[i] = std::abs(rho - rnw - w);
    tol[i] = d_rho + d_nw + std::abs(w - w2) + rounding;
  });
  IdentityCheck c;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double ratio = res[i] / tol[i];
    if (ratio > c.max_ratio) {
      c.max_ratio = ratio;
      c.tolerance_at_max = tol[i];
    }
    c.max_residual = std::max(c.max_residual, res[i]);
  }
  return c;
}

}  // namespace bohm::nearnr
