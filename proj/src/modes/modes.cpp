#include "bohm/modes.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bohm/contour.hpp"
#include "bohm/dispersion.hpp"
#include "bohm/errors.hpp"
#include "bohm/parallel.hpp"

namespace bohm {

namespace {

Spectrum spectrum_of(const std::vector<Mode>& m) {
  std::vector<double> k;
  std::vector<cplx> c;
  for (const auto& x : m) {
    k.push_back(x.k);
    c.push_back(x.phi);
  }
  return Spectrum(std::move(k), std::move(c));
}

}  // namespace

ModeSet::ModeSet(std::vector<Mode> modes) : modes_(std::move(modes)) {
  if (modes_.empty()) throw ConfigError("mode set: need at least one mode");
  bool any = false;
  for (std::size_t a = 0; a < modes_.size(); ++a) {
    const auto& m = modes_[a];
    if (!std::isfinite(m.k) || !std::isfinite(m.phi.real()) || !std::isfinite(m.phi.imag()))
      throw ConfigError("mode set: non-finite k or phi in mode " + std::to_string(a));
    if (std::norm(m.phi) > 0) any = true;
    for (std::size_t b = 0; b < a; ++b)
      if (std::abs(modes_[b].k - m.k) <= 1e-12 * std::max(1.0, std::abs(m.k)))
        throw ConfigError("mode set: duplicate wavenumber k = " + std::to_string(m.k));
  }
  if (!any) throw ConfigError("mode set: all coefficients are zero");
  spec_ = spectrum_of(modes_);
}

ModeSet ModeSet::rest_frame(const std::vector<double>& k, std::size_t dominant, double w0) {
  if (k.size() != 3) throw ConfigError("rest-frame solve: exactly three wavenumbers are supported");
  if (dominant >= 3) throw ConfigError("rest-frame solve: dominant index out of range");
  if (!(w0 > 0 && w0 < 1)) throw ConfigError("rest-frame solve: dominant weight must lie in (0, 1)");
  std::size_t p = (dominant + 1) % 3, q = (dominant + 2) % 3;
  const double gd = group_velocity(k[dominant]), gp = group_velocity(k[p]), gq = group_velocity(k[q]);
  // w_p + w_q = 1 - w0,  w_p g_p + w_q g_q = -w0 g_d
  const double det = gq - gp;
  if (std::abs(det) < 1e-14) throw ConfigError("rest-frame solve: degenerate group velocities");
  const double rest = 1.0 - w0;
  const double wq = (-w0 * gd - rest * gp) / det;
  const double wp = rest - wq;
  if (!(wp > 0 && wq > 0)) throw ConfigError("rest-frame solve: no positive weights give <k/w> = 0");
  std::vector<Mode> m(3);
  m[dominant] = {k[dominant], std::sqrt(w0)};
  m[p] = {k[p], std::sqrt(wp)};
  m[q] = {k[q], std::sqrt(wq)};
  return ModeSet(std::move(m));
}

double ModeSet::norm() const {
  double s = 0.0;
  for (const auto& m : modes_) s += std::norm(m.phi);
  return s;
}

ModeSet ModeSet::boosted(double eta) const {
  const double ch = std::cosh(eta), sh = std::sinh(eta);
  std::vector<Mode> out;
  for (const auto& m : modes_) {
    const double w = omega(m.k);
    const double kp = m.k * ch - w * sh;
    const double wp = w * ch - m.k * sh;
    out.push_back({kp, m.phi * std::sqrt(wp / w)});
  }
  return ModeSet(std::move(out));
}

Event boost_event(double eta, double x, double t) {
  const double ch = std::cosh(eta), sh = std::sinh(eta);
  return {x * ch - t * sh, t * ch - x * sh};
}

FieldSample eval_psi(const ModeSet& s, double z, double t) { return s.spectrum().sample(z, t); }

PairDensities pair_densities(const ModeSet& s, double z, double t) {
  const auto& m = s.modes();
  const double n = s.norm();
  const std::size_t M = m.size();
  std::vector<double> w(M), th(M);
  for (std::size_t a = 0; a < M; ++a) {
    w[a] = omega(m[a].k);
    th[a] = m[a].k * z - w[a] * t;
  }
  double rho = 0.0, j = 0.0;
  for (std::size_t a = 0; a < M; ++a)
    for (std::size_t b = 0; b < M; ++b) {
      const cplx cab = std::conj(m[a].phi) * m[b].phi / (std::sqrt(w[a] * w[b]) * n);
      const cplx e = std::polar(1.0, th[b] - th[a]);
      rho += 0.5 * ((w[a] + w[b]) * cab * e).real();
      j += 0.5 * ((m[a].k + m[b].k) * cab * e).real();
    }
  return {rho, j};
}

Velocity velocity_discrete(const ModeSet& s, double z, double t, double eps) {
  const PairDensities pd = pair_densities(s, z, t);
  const FieldSample f = eval_psi(s, z, t);
  const double scale = std::abs(f.psi) * std::max(std::abs(f.dpsi_dx), std::abs(f.dpsi_dt)) / s.norm();
  if (!(std::abs(pd.rho_n) >= eps * scale) || pd.rho_n == 0.0) return {0.0, true};
  return {pd.j_n / pd.rho_n, false};
}

FParts integral_F_parts(const ModeSet& s, double z, double t) {
  const auto& m = s.modes();
  const double n = s.norm();
  const std::size_t M = m.size();
  std::vector<double> w(M), th(M);
  for (std::size_t a = 0; a < M; ++a) {
    w[a] = omega(m[a].k);
    th[a] = m[a].k * z - w[a] * t;
  }
  cplx d = 0.0;
  double mag = 0.0;
  for (std::size_t a = 0; a < M; ++a)
    for (std::size_t b = 0; b < M; ++b) {
      if (a == b) continue;
      const cplx cab = std::conj(m[a].phi) * m[b].phi / (std::sqrt(w[a] * w[b]) * n);
      const cplx term = 0.5 * cab * (w[a] + w[b]) / (m[b].k - m[a].k) * std::polar(1.0, th[b] - th[a]);
      d += term;
      mag += std::abs(term);
    }
  if (std::abs(d.real()) > 1e-12 * std::abs(d.imag()) + 1e-14 * std::max(1.0, mag))
    throw DomainError("integral_F: double sum is not pure imaginary (Re = " + std::to_string(d.real()) + ")");
  return {z - mean_rest_frame_check(s) * t + d.imag(), d.real(), d.imag()};
}

double integral_F(const ModeSet& s, double z, double t) { return integral_F_parts(s, z, t).F; }

double mean_rest_frame_check(const ModeSet& s) {
  double num = 0.0;
  for (const auto& m : s.modes()) num += std::norm(m.phi) * group_velocity(m.k);
  return num / s.norm();
}

TrajectorySet trajectories(const ModeSet& s, const Grid2D& grid, std::size_t n_levels, unsigned threads) {
  grid.validate();
  if (n_levels == 0) throw ConfigError("trajectories: n_levels must be positive");
  GridField F{grid, std::vector<double>(grid.n_x * grid.n_t)};
  GridField R{grid, std::vector<double>(grid.n_x * grid.n_t)};
  parallel_for(grid.n_x * grid.n_t, threads, [&](std::size_t idx) {
    const std::size_t i = idx % grid.n_x, j = idx / grid.n_x;
    const double x = grid.x(i), t = grid.t(j);
    F.v[idx] = integral_F(s, x, t);
    R.v[idx] = density_rho(eval_psi(s, x, t));
  });
  const auto mm = std::minmax_element(F.v.begin(), F.v.end());
  const double lo = *mm.first, hi = *mm.second;
  const std::vector<double> levels = even_levels(lo, hi, n_levels);
  auto lines = extract_contours(F, levels);
  const double n = s.norm();
  TrajectorySet ts = annotate_contours(std::move(lines), [&](double x, double t) {
    const FieldSample f = eval_psi(s, x, t);
    const Velocity v = velocity(f);
    return LocalFlow{density_rho(f) / n, current_j(f) / n, v.divergent, v.value};
  });
  ts.levels = levels;
  ts.F = std::move(F);
  ts.rho = std::move(R);
  check_resolution(ts, (hi - lo) / double(n_levels + 1));
  return ts;
}

}  // namespace bohm
