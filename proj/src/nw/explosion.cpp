#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "bohm/contour.hpp"
#include "bohm/errors.hpp"
#include "bohm/lambert_w.hpp"
#include "bohm/nw.hpp"
#include "bohm/parallel.hpp"

namespace bohm::nw {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

double rho_x(const SpectralSample& s) {
  return -(std::conj(s.f.dpsi_dx) * s.f.dpsi_dt + std::conj(s.f.psi) * s.dxt).imag();
}

double j_x(const SpectralSample& s) { return (std::conj(s.f.psi) * s.d2x).imag(); }

}  // namespace

double integrate_x(const PacketField& f, double t, const std::function<double(double)>& g, double tol) {
  const PacketSpec& p = f.packet();
  const double c = p.x_centre(t), L = p.x_extent(t);
  QuadratureSpec q;
  q.abs_tol = tol;
  q.rel_tol = 1e-12;
  q.max_subdivisions = 200000;
  q.max_panel = p.shape == Shape::cos2 ? 0.05 : 0.5;
  const QuadResult r = integrate_1d([&](double x) { return cplx(g(x), 0.0); }, c - L, c + L, q);
  if (!r.converged) throw NonConvergence("integrate_x: x-quadrature did not converge");
  return r.value.real();
}

DensityProfile densities(const PacketField& f, const std::vector<double>& xs, double t, unsigned threads) {
  DensityProfile out;
  out.t = t;
  out.rows.resize(xs.size());
  parallel_for(xs.size(), threads, [&](std::size_t i) {
    const double x = xs[i];
    const FieldSample s = f.sample(x, t);
    out.rows[i] = {x, density_rho(s), std::norm(f.nw(x, t)), current_j(s), 0.0};
  });
  out.abs_rho_mass = integrate_x(f, t, [&](double x) { return std::abs(density_rho(f.sample(x, t))); }, 1e-10);
  const double scale = f.charge() / out.abs_rho_mass;
  for (auto& r : out.rows) r.rho_nw0 = std::abs(r.rho) * scale;
  return out;
}

double acausal_probability(const PacketField& f, double t) {
  const PacketSpec& p = f.packet();
  if (p.shape != Shape::cos2) throw ConfigError("acausal_probability: needs a cos2 packet");
  if (!(t >= 0) || !std::isfinite(t)) throw ConfigError("acausal_probability: t must be >= 0");
  const double edge = p.a + t;
  QuadratureSpec q;
  q.abs_tol = 1e-13;
  q.rel_tol = 1e-9;
  q.max_subdivisions = 200000;
  q.max_panel = 0.05;
  const QuadResult r =
      integrate_1d([&](double x) { return cplx(std::norm(f.nw(x, t)), 0.0); }, edge, edge + 12.0, q);
  if (!r.converged) throw NonConvergence("acausal_probability: quadrature did not converge");
  // both sides by parity
  return 2.0 * r.value.real() / f.charge();
}

TrajectorySet annihilation_fronts(const PacketField& f, const Grid2D& grid, std::size_t n_levels,
                                  const std::vector<double>& extra_levels, unsigned threads) {
  grid.validate();
  if (n_levels == 0 && extra_levels.empty()) throw ConfigError("annihilation_fronts: no levels requested");
  GridField F{grid, std::vector<double>(grid.n_x * grid.n_t)};
  GridField R{grid, std::vector<double>(grid.n_x * grid.n_t)};
  parallel_for(grid.n_x * grid.n_t, threads, [&](std::size_t idx) {
    const std::size_t i = idx % grid.n_x, j = idx / grid.n_x;
    const double x = grid.x(i), t = grid.t(j);
    F.v[idx] = f.F(x, t);
    R.v[idx] = density_rho(f.sample(x, t));
  });
  const auto mm = std::minmax_element(F.v.begin(), F.v.end());
  const double lo = *mm.first, hi = *mm.second;
  std::vector<double> levels = n_levels ? even_levels(lo, hi, n_levels) : std::vector<double>{};
  for (double e : extra_levels) levels.push_back(e);
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  auto lines = extract_contours(F, levels);
  const double Q = f.charge();
  TrajectorySet ts = annotate_contours(std::move(lines), [&](double x, double t) {
    const FieldSample s = f.sample(x, t);
    const Velocity v = velocity(s);
    return LocalFlow{density_rho(s) / Q, current_j(s) / Q, v.divergent, v.value};
  });
  ts.levels = levels;
  ts.F = std::move(F);
  ts.rho = std::move(R);
  if (n_levels) check_resolution(ts, (hi - lo) / double(n_levels + 1));
  return ts;
}

Thresholds zero_crossings(const PacketSpec& p, const QuadratureSpec& q) {
  if (p.shape != Shape::cos2) throw ConfigError("zero_crossings: needs a cos2 packet");
  p.validate();
  const double a = p.a;
  auto rho0 = [&](double x) { return density_rho(psi_xt(p, x, 0.0, q).f); };

  // first + to - sign change of rho(x, 0) on (0, 1.5a]
  double x0 = nan;
  {
    double xl = 0.05 * a, rl = rho0(xl);
    for (double xr = xl + 0.01 * a; xr <= 1.5 * a + 1e-12; xr += 0.01 * a) {
      const double rr = rho0(xr);
      if (rl > 0 && rr <= 0) {
        double lo = xl, hi = xr;
        while (hi - lo > 1e-9) {
          const double mid = 0.5 * (lo + hi);
          (rho0(mid) > 0 ? lo : hi) = mid;
        }
        x0 = 0.5 * (lo + hi);
        break;
      }
      xl = xr;
      rl = rr;
    }
  }
  if (!std::isfinite(x0)) throw ConfigError("zero_crossings: rho(x, 0) has no sign change in (0, 1.5a]");

  QuadratureSpec xq;
  xq.abs_tol = 1e-10;
  xq.rel_tol = 1e-10;
  xq.max_subdivisions = 20000;
  xq.max_panel = 0.25;
  auto charge = [&](double lo, double hi) {
    const QuadResult r = integrate_1d([&](double x) { return cplx(rho0(x), 0.0); }, lo, hi, xq);
    if (!r.converged) throw NonConvergence("zero_crossings: charge integral did not converge");
    return r.value.real();
  };
  const double far = charge(x0, a + 20.0);
  auto tail = [&](double x) { return charge(x, x0) + far; };

  double lo = 0.1 * a, hi = x0;
  const double tlo = tail(lo);
  if (!(tlo > 0 && far < 0)) throw ConfigError("zero_crossings: tail charge not bracketed on [0.1a, x0]");
  while (hi - lo > 1e-8) {
    const double mid = 0.5 * (lo + hi);
    (tail(mid) > 0 ? lo : hi) = mid;
  }
  Thresholds th;
  th.x0 = x0;
  th.x_th = 0.5 * (lo + hi);
  th.far_tail = far;
  th.tail_charge = tail(th.x_th);
  th.head_charge = charge(0.0, th.x_th);
  const QuadResult nwh = integrate_1d([&](double x) { return cplx(std::norm(psi_nw(p, x, 0.0, q).chi), 0.0); },
                                      0.0, a, xq);
  th.nw_half = nwh.value.real();
  return th;
}

double LambertLocalModel::invariant(double x, double t) const {
  const double u = x - x_j, d = x_rho - x_j, r = beta / alpha;
  return u - d * std::log(std::abs(u)) - r * t;
}

double LambertLocalModel::velocity(double x) const { return beta * (x - x_j) / (alpha * (x - x_rho)); }

double LambertLocalModel::solve(int branch, double C, double t, bool far_side) const {
  if (alpha == 0.0 || beta == 0.0) throw DomainError("lambert model: slopes must be nonzero");
  const double d = x_rho - x_j, r = beta / alpha;
  const double c = r * t + C;
  if (std::abs(d) <= 1e-14 * std::max(1.0, std::abs(x_j))) return x_j + c;  // straight line
  // z = -u/d solves z + ln|z| = L
  const double L = -c / d - std::log(std::abs(d));
  double z;
  if (far_side) {
    if (L > 700) {
      z = L - std::log(L);
      for (int i = 0; i < 50; ++i) z -= (z + std::log(z) - L) / (1.0 + 1.0 / z);
    } else {
      z = lambert_w(0, std::exp(L));
    }
  } else {
    if (L > -1.0 + 1e-15) {
      if (L > -1.0 + 1e-9) throw DomainError("lambert model: sample lies beyond the fold");
      z = -1.0;
    } else {
      z = lambert_w(branch, -std::exp(L));
    }
  }
  return x_j - d * z;
}

LocalTrajectoryFamily lambert_local_trajectories(double rho_slope, double rho_zero, double j_slope, double j_zero,
                                                 double C, const std::vector<double>& t_samples) {
  LocalTrajectoryFamily fam;
  fam.model = {rho_slope, rho_zero, j_slope, j_zero};
  fam.C = C;
  for (double t : t_samples) {
    fam.t.push_back(t);
    double a = nan, b = nan;
    try {
      a = fam.model.solve(0, C, t);
      b = fam.model.solve(-1, C, t);
    } catch (const DomainError&) {
    }
    fam.x_w0.push_back(a);
    fam.x_wm1.push_back(b);
  }
  return fam;
}

VertexFit fit_annihilation_vertex(const PacketField& f, double level, double x_guess, double t_guess) {
  const double Q = f.charge();
  double x = x_guess, t = t_guess;
  bool ok = false;
  for (int outer = 0; outer < 60; ++outer) {
    for (int it = 0; it < 60; ++it) {
      const SpectralSample s = f.sample_full(x, t);
      const double dx = density_rho(s.f) / rho_x(s);
      x -= dx;
      if (std::abs(dx) < 1e-13) break;
    }
    const double G = f.F(x, t) - level;
    const double J = current_j(f.sample(x, t)) / Q;
    const double dt = G / J;  // dG/dt = -J/Q on rho = 0
    t += dt;
    if (std::abs(dt) < 1e-12 && std::abs(G) < 1e-12) {
      ok = true;
      break;
    }
  }
  if (!ok) throw NonConvergence("fit_annihilation_vertex: Newton refinement did not converge");
  const SpectralSample s = f.sample_full(x, t);
  const double alpha = rho_x(s), beta = j_x(s);
  const double J = current_j(s.f);
  VertexFit vf;
  vf.x_star = x;
  vf.t_star = t;
  vf.level = level;
  vf.model = {alpha, x, beta, x - J / beta};
  vf.C = vf.model.invariant(x, t);
  return vf;
}

VertexComparison compare_vertex_fit(const VertexFit& fit, const TrajPolyline& line, double window, std::size_t n) {
  if (n < 2 || !(window > 0)) throw ConfigError("compare_vertex_fit: need n >= 2 and window > 0");
  const auto& v = line.vertices;
  const std::size_t segs = line.closed ? v.size() : (v.empty() ? 0 : v.size() - 1);
  auto distance = [&](double x, double t) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < segs; ++i) {
      const TrajVertex& a = v[i];
      const TrajVertex& b = v[(i + 1) % v.size()];
      const double dx = b.x - a.x, dt = b.t - a.t, len2 = dx * dx + dt * dt;
      const double u = len2 > 0 ? std::clamp(((x - a.x) * dx + (t - a.t) * dt) / len2, 0.0, 1.0) : 0.0;
      best = std::min(best, std::hypot(a.x + u * dx - x, a.t + u * dt - t));
    }
    return best;
  };
  VertexComparison c;
  for (std::size_t s = 0; s < n; ++s) {
    const double t = fit.t_star - window * double(s) / double(n - 1);
    for (int branch : {0, -1}) {
      double x;
      try {
        x = fit.model.solve(branch, fit.C, t);
      } catch (const DomainError&) {
        continue;  // rounding just past the fold at t*
      }
      c.worst_distance = std::max(c.worst_distance, distance(x, t));
      ++c.samples;
    }
  }
  return c;
}

}  // namespace bohm::nw
