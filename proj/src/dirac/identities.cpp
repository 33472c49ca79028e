#include <algorithm>
#include <cmath>
#include <random>

#include "bohm/dirac.hpp"
#include "bohm/errors.hpp"
#include "bohm/parallel.hpp"

namespace bohm::dirac {

namespace {

const cplx I{0.0, 1.0};

double dagger_norm(const Spinor& u) {
  double s = 0;
  for (const cplx& c : u) s += std::norm(c);
  return s;
}

Vec4 shifted(const Vec4& x, int mu, double h) {
  Vec4 y = x;
  y[mu] += h;
  return y;
}

// Quantities of the EOM check at one event, from analytic derivatives.
struct Local {
  Vec4 P;      // lower
  double phi;
  Mat4 GT;     // psi-bar psi T
};

Local local(const DiracField& f, const Vec4& x) {
  const SpinorSample s = f.eval(x);
  const Momentum p = convective_momentum(s);
  const SpinTensor t = spin_tensor(s);
  if (p.node || t.node) throw DomainError("dirac: node of psi-bar psi on the stencil");
  Local l;
  l.P = p.lower;
  l.phi = quantum_potential_analytic(s);
  const double G = scalar_density(s);
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n) l.GT[m][n] = G * t.T[m][n];
  return l;
}

void finish(IdentityReport& r) {
  r.converging = true;
  for (std::size_t i = 0; i + 1 < r.rows.size(); ++i) {
    const double a = r.rows[i].max_residual, b = r.rows[i + 1].max_residual;
    const double ratio = a / std::max(b, 1e-300);
    r.ratios.push_back(ratio);
    const bool rounding = a < 1e-10 && b < 1e-10;
    if (!rounding && !(ratio >= 3.0 && ratio <= 5.0)) r.converging = false;
  }
}

}  // namespace

double scalar_density(const SpinorSample& s) { return bar_dot(s.psi, s.psi).real(); }

Momentum convective_momentum(const SpinorSample& s, double eps) {
  Momentum m;
  const double G = scalar_density(s);
  const double scale = dagger_norm(s.psi);
  if (std::abs(G) < eps * scale || scale == 0.0) {
    m.node = true;
    return m;
  }
  double dmax = 0;
  for (int mu = 0; mu < 4; ++mu) {
    const cplx a = bar_dot(s.psi, s.d[mu]);  // psi-bar d psi
    const cplx b = bar_dot(s.d[mu], s.psi);  // d psi-bar psi
    const cplx v = (a - b) / (2.0 * I) / G;
    m.lower[mu] = -v.real();
    m.upper[mu] = metric[mu] * m.lower[mu];
    m.imag_residual = std::max(m.imag_residual, std::abs(v.imag()));
    dmax = std::max(dmax, std::abs(v));
  }
  m.imag_residual /= std::max(dmax, 1e-300);
  return m;
}

double effective_mass_sq(const SpinorSample& s, double eps) {
  const Momentum m = convective_momentum(s, eps);
  if (m.node) throw DomainError("effective_mass_sq: node of psi-bar psi");
  double r = 0;
  for (int mu = 0; mu < 4; ++mu) r += m.lower[mu] * m.upper[mu];
  return r;
}

SpinTensor spin_tensor(const SpinorSample& s, double eps) {
  SpinTensor t;
  const double G = scalar_density(s);
  const double scale = dagger_norm(s.psi);
  if (std::abs(G) < eps * scale || scale == 0.0) {
    t.node = true;
    return t;
  }
  std::array<cplx, 4> B{}, Bb{};
  for (int mu = 0; mu < 4; ++mu) {
    B[mu] = bar_dot(s.psi, s.d[mu]);
    Bb[mu] = bar_dot(s.d[mu], s.psi);
  }
  double im = 0, mag = 0;
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = mu; nu < 4; ++nu) {
      const cplx first = 0.5 * (bar_dot(s.d[mu], s.d[nu]) + bar_dot(s.d[nu], s.d[mu])) / G;
      const cplx second = 0.5 * (Bb[mu] * B[nu] + Bb[nu] * B[mu]) / (G * G);
      const cplx v = first - second;
      t.T[mu][nu] = t.T[nu][mu] = v.real();
      im = std::max(im, std::abs(v.imag()));
      mag = std::max({mag, std::abs(first), std::abs(second)});
    }
  t.imag_residual = im / std::max(mag, 1e-300);
  return t;
}

double trace(const Mat4& T) {
  double r = 0;
  for (int mu = 0; mu < 4; ++mu) r += metric[mu] * T[mu][mu];
  return r;
}

double quantum_potential_spinor(const ScalarFieldFn& density, const Vec4& x, double h) {
  if (!(h > 0)) throw DomainError("quantum_potential_spinor: step must be positive");
  auto R = [&](const Vec4& y) {
    const double g = density(y);
    if (!(g > 0)) throw DomainError("quantum_potential_spinor: psi-bar psi <= 0 on the stencil");
    return std::sqrt(g);
  };
  const double r0 = R(x);
  double box = 0;
  for (int mu = 0; mu < 4; ++mu) {
    const double d2 = (R(shifted(x, mu, h)) - 2.0 * r0 + R(shifted(x, mu, -h))) / (h * h);
    box += metric[mu] * d2;
  }
  return 0.5 * box / r0;
}

double quantum_potential_spinor(const DiracField& f, const Vec4& x, double h) {
  if (!(h > 0)) throw DomainError("quantum_potential_spinor: step must be positive");
  const double G = f.density(x);
  if (!(G > 0)) throw DomainError("quantum_potential_spinor: psi-bar psi <= 0 on the stencil");
  const double R = std::sqrt(G);
  double box = 0;
  for (int mu = 0; mu < 4; ++mu) {
    const double dp = f.density_increment(x, mu, h), dm = f.density_increment(x, mu, -h);
    if (!(G + dp > 0) || !(G + dm > 0)) throw DomainError("quantum_potential_spinor: psi-bar psi <= 0 on the stencil");
    // R(x +- h) - R(x) without cancellation
    const double rp = dp / (std::sqrt(G + dp) + R), rm = dm / (std::sqrt(G + dm) + R);
    box += metric[mu] * (rp + rm) / (h * h);
  }
  return 0.5 * box / R;
}

double quantum_potential_analytic(const SpinorSample& s) {
  if (!s.has_second) throw DomainError("quantum_potential_analytic: sample lacks second derivatives");
  const double G = scalar_density(s);
  if (!(G > 0)) throw DomainError("quantum_potential_analytic: psi-bar psi <= 0");
  const double R = std::sqrt(G);
  double box = 0;
  for (int mu = 0; mu < 4; ++mu) {
    const double g1 = 2.0 * bar_dot(s.psi, s.d[mu]).real();
    const double g2 = 2.0 * (bar_dot(s.d[mu], s.d[mu]) + bar_dot(s.psi, s.dd[mu][mu])).real();
    const double r2 = g2 / (2.0 * R) - g1 * g1 / (4.0 * R * R * R);
    box += metric[mu] * r2;
  }
  return 0.5 * box / R;
}

SpinorSample gauge(const SpinorSample& s, cplx g, const std::array<cplx, 4>& dg) {
  SpinorSample r;
  for (int a = 0; a < 4; ++a) {
    r.psi[a] = g * s.psi[a];
    for (int mu = 0; mu < 4; ++mu) r.d[mu][a] = g * s.d[mu][a] + dg[mu] * s.psi[a];
  }
  return r;
}

IdentityReport verify_mass_identity(const DiracField& f, const std::vector<Vec4>& pts, double h,
                                    std::size_t halvings, unsigned threads) {
  IdentityReport rep;
  for (std::size_t level = 0; level <= halvings; ++level) {
    const double hh = h / double(1u << level);
    std::vector<double> res(pts.size());
    parallel_for(pts.size(), threads, [&](std::size_t i) {
      const SpinorSample s = f.eval(pts[i]);
      const SpinTensor t = spin_tensor(s);
      if (t.node) throw DomainError("verify_mass_identity: sample point on a node");
      const double mu2 = effective_mass_sq(s);
      const double phi = quantum_potential_spinor(f, pts[i], hh);
      res[i] = std::abs(mu2 - (1.0 + 2.0 * phi - trace(t.T)));
    });
    rep.rows.push_back({hh, res.empty() ? 0.0 : *std::max_element(res.begin(), res.end())});
  }
  finish(rep);
  return rep;
}

IdentityReport verify_eom(const DiracField& f, const std::vector<Vec4>& pts, double h, std::size_t halvings,
                          unsigned threads) {
  IdentityReport rep;
  for (std::size_t level = 0; level <= halvings; ++level) {
    const double hh = h / double(1u << level);
    std::vector<std::array<double, 4>> res(pts.size());
    parallel_for(pts.size(), threads, [&](std::size_t i) {
      const Vec4& x = pts[i];
      const Local c = local(f, x);
      std::array<Local, 4> lp, lm;
      for (int l = 0; l < 4; ++l) {
        lp[l] = local(f, shifted(x, l, hh));
        lm[l] = local(f, shifted(x, l, -hh));
      }
      const double G = scalar_density(f.eval(x));
      for (int mu = 0; mu < 4; ++mu) {
        double conv = 0, div = 0;
        for (int nu = 0; nu < 4; ++nu) {
          const double dP = (lp[nu].P[mu] - lm[nu].P[mu]) / (2.0 * hh);
          conv += metric[nu] * c.P[nu] * dP;
          div += metric[nu] * (lp[nu].GT[mu][nu] - lm[nu].GT[mu][nu]) / (2.0 * hh);
        }
        const double dphi = (lp[mu].phi - lm[mu].phi) / (2.0 * hh);
        res[i][mu] = std::abs(conv - dphi + div / G);
      }
    });
    std::array<double, 4> cm{};
    for (const auto& r : res)
      for (int mu = 0; mu < 4; ++mu) cm[mu] = std::max(cm[mu], r[mu]);
    rep.component_max.push_back(cm);
    rep.rows.push_back({hh, *std::max_element(cm.begin(), cm.end())});
  }
  finish(rep);
  return rep;
}

std::vector<Vec4> sample_points(const DiracField& f, std::size_t n, double box, std::uint64_t seed, double g_min) {
  double scale = 0;
  for (const auto& m : f.modes()) scale += dagger_norm(m.u);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-box, box);
  std::vector<Vec4> pts;
  std::size_t tries = 0;
  while (pts.size() < n) {
    if (++tries > 10000 * (n + 1)) throw NonConvergence("sample_points: too few events away from nodes");
    const Vec4 x{u(rng), u(rng), u(rng), u(rng)};
    if (f.density(x) > g_min * scale) pts.push_back(x);
  }
  return pts;
}

}  // namespace bohm::dirac
