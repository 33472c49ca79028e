#include <cmath>
#include <random>

#include "bohm/dirac.hpp"
#include "bohm/dispersion.hpp"
#include "bohm/errors.hpp"

namespace bohm::dirac {

namespace {

const cplx I{0.0, 1.0};

std::array<CMat4, 4> make_gammas() {
  std::array<CMat4, 4> g{};
  g[0][0][0] = g[0][1][1] = 1.0;
  g[0][2][2] = g[0][3][3] = -1.0;
  // gamma^k = [[0, sigma_k], [-sigma_k, 0]]
  const std::array<std::array<std::array<cplx, 2>, 2>, 3> sig{{
      {{{0.0, 1.0}, {1.0, 0.0}}},
      {{{0.0, -I}, {I, 0.0}}},
      {{{1.0, 0.0}, {0.0, -1.0}}},
  }};
  for (int k = 0; k < 3; ++k)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        g[k + 1][a][b + 2] = sig[k][a][b];
        g[k + 1][a + 2][b] = -sig[k][a][b];
      }
  return g;
}

double wnorm(const Vec3& k) { return std::sqrt(1.0 + k[0] * k[0] + k[1] * k[1] + k[2] * k[2]); }

double spinor_norm(const Spinor& u) {
  double s = 0;
  for (const cplx& c : u) s += std::norm(c);
  return std::sqrt(s);
}

}  // namespace

const CMat4& gamma(int mu) {
  static const std::array<CMat4, 4> g = make_gammas();
  if (mu < 0 || mu > 3) throw DomainError("gamma: index out of range");
  return g[mu];
}

Spinor mul(const CMat4& m, const Spinor& u) {
  Spinor r{};
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) r[a] += m[a][b] * u[b];
  return r;
}

cplx bar_dot(const Spinor& a, const Spinor& b) {
  return std::conj(a[0]) * b[0] + std::conj(a[1]) * b[1] - std::conj(a[2]) * b[2] - std::conj(a[3]) * b[3];
}

Spinor plane_wave_spinor(const Vec3& k, Spin s) {
  const double w = wnorm(k), r = std::sqrt(w + 1.0);
  const std::array<cplx, 2> chi = s == Spin::up ? std::array<cplx, 2>{1.0, 0.0} : std::array<cplx, 2>{0.0, 1.0};
  // sigma . k chi
  const cplx l0 = k[2] * chi[0] + cplx(k[0], -k[1]) * chi[1];
  const cplx l1 = cplx(k[0], k[1]) * chi[0] - k[2] * chi[1];
  return {r * chi[0], r * chi[1], l0 / r, l1 / r};
}

double dirac_residual(const Vec3& k, const Spinor& u) {
  // (w gamma^0 - k . gamma - 1) u
  const double w = wnorm(k);
  Spinor r = mul(gamma(0), u);
  for (auto& c : r) c *= w;
  for (int j = 0; j < 3; ++j) {
    const Spinor g = mul(gamma(j + 1), u);
    for (int a = 0; a < 4; ++a) r[a] -= k[j] * g[a];
  }
  for (int a = 0; a < 4; ++a) r[a] -= u[a];
  return spinor_norm(r) / std::max(spinor_norm(u), 1e-300);
}

DiracField DiracField::from_spinors(std::vector<DiracMode> modes, bool check) {
  if (modes.empty()) throw ConfigError("dirac field: at least one mode required");
  DiracField f;
  double total = 0;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    for (double c : modes[i].k)
      if (!std::isfinite(c)) throw ConfigError("dirac field: non-finite wavenumber");
    for (std::size_t j = 0; j < i; ++j)
      if (modes[i].k == modes[j].k) throw ConfigError("dirac field: repeated wavevector");
    if (check && dirac_residual(modes[i].k, modes[i].u) > 1e-12)
      throw ConfigError("dirac field: mode spinor does not solve the Dirac equation");
    total += spinor_norm(modes[i].u);
    f.om_.push_back(wnorm(modes[i].k));
  }
  if (!(total > 0)) throw ConfigError("dirac field: all coefficients are zero");
  f.modes_ = std::move(modes);
  f.dirac_ = check;
  return f;
}

DiracField DiracField::from_modes(const std::vector<LabeledMode>& modes) {
  std::vector<DiracMode> m;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j)
      if (modes[i].k == modes[j].k && modes[i].s == modes[j].s)
        throw ConfigError("dirac field: repeated (k, spin) mode");
    Spinor u = plane_wave_spinor(modes[i].k, modes[i].s);
    for (auto& c : u) c *= modes[i].c;
    // same k with both spins merges into one spinor
    bool merged = false;
    for (auto& e : m)
      if (e.k == modes[i].k) {
        for (int a = 0; a < 4; ++a) e.u[a] += u[a];
        merged = true;
      }
    if (!merged) m.push_back({modes[i].k, u});
  }
  return from_spinors(std::move(m), true);
}

DiracField DiracField::scalar_embedding(const Spinor& u0, const ModeSet& s) {
  std::vector<DiracMode> m;
  for (const Mode& md : s.modes()) {
    const double w = omega(md.k);
    Spinor u = u0;
    for (auto& c : u) c *= md.phi / std::sqrt(w);
    m.push_back({{md.k, 0.0, 0.0}, u});
  }
  return from_spinors(std::move(m), false);
}

DiracField DiracField::random(std::size_t n_modes, double k_max, std::uint64_t seed) {
  if (n_modes == 0) throw ConfigError("dirac field: n_modes must be positive");
  if (!(k_max >= 0)) throw ConfigError("dirac field: k_max must be non-negative");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<LabeledMode> modes;
  while (modes.size() < n_modes) {
    Vec3 k{u(rng), u(rng), u(rng)};
    if (k[0] * k[0] + k[1] * k[1] + k[2] * k[2] > 1.0) continue;
    for (auto& c : k) c *= k_max;
    const Spin s = u(rng) < 0 ? Spin::up : Spin::down;
    const double re = u(rng), im = u(rng);
    modes.push_back({k, s, cplx(re, im)});
  }
  return from_modes(modes);
}

SpinorSample DiracField::eval(const Vec4& x) const {
  SpinorSample s;
  s.has_second = true;
  for (std::size_t m = 0; m < modes_.size(); ++m) {
    const Vec3& k = modes_[m].k;
    const double th = k[0] * x[1] + k[1] * x[2] + k[2] * x[3] - om_[m] * x[0];
    const cplx e = std::polar(1.0, th);
    const Vec4 kap{-om_[m], k[0], k[1], k[2]};
    for (int a = 0; a < 4; ++a) {
      const cplx v = modes_[m].u[a] * e;
      s.psi[a] += v;
      for (int mu = 0; mu < 4; ++mu) {
        s.d[mu][a] += I * kap[mu] * v;
        for (int nu = 0; nu < 4; ++nu) s.dd[mu][nu][a] -= kap[mu] * kap[nu] * v;
      }
    }
  }
  return s;
}

double DiracField::density(const Vec4& x) const {
  std::vector<cplx> ph(modes_.size());
  for (std::size_t m = 0; m < modes_.size(); ++m) {
    const Vec3& k = modes_[m].k;
    ph[m] = std::polar(1.0, k[0] * x[1] + k[1] * x[2] + k[2] * x[3] - om_[m] * x[0]);
  }
  double g = 0;
  for (std::size_t a = 0; a < modes_.size(); ++a) {
    g += bar_dot(modes_[a].u, modes_[a].u).real();
    for (std::size_t b = a + 1; b < modes_.size(); ++b)
      g += 2.0 * (bar_dot(modes_[a].u, modes_[b].u) * std::conj(ph[a]) * ph[b]).real();
  }
  return g;
}

double DiracField::density_increment(const Vec4& x, int mu, double h) const {
  std::vector<cplx> ph(modes_.size());
  std::vector<double> kap(modes_.size());
  for (std::size_t m = 0; m < modes_.size(); ++m) {
    const Vec3& k = modes_[m].k;
    ph[m] = std::polar(1.0, k[0] * x[1] + k[1] * x[2] + k[2] * x[3] - om_[m] * x[0]);
    kap[m] = mu == 0 ? -om_[m] : k[mu - 1];
  }
  double g = 0;
  for (std::size_t a = 0; a < modes_.size(); ++a)
    for (std::size_t b = a + 1; b < modes_.size(); ++b) {
      const double d = (kap[b] - kap[a]) * h, s = std::sin(0.5 * d);
      // e^{id} - 1 = i sin d - 2 sin^2(d/2)
      const cplx step(-2.0 * s * s, std::sin(d));
      g += 2.0 * (bar_dot(modes_[a].u, modes_[b].u) * std::conj(ph[a]) * ph[b] * step).real();
    }
  return g;
}

Vec4 boost_event(double eta, const Vec4& x) {
  const double ch = std::cosh(eta), sh = std::sinh(eta);
  return {x[0] * ch - x[1] * sh, x[1] * ch - x[0] * sh, x[2], x[3]};
}

DiracField DiracField::boosted(double eta) const {
  const double ch = std::cosh(eta), sh = std::sinh(eta);
  const double c2 = std::cosh(0.5 * eta), s2 = std::sinh(0.5 * eta);
  // S = cosh(eta/2) - sinh(eta/2) gamma^0 gamma^1
  CMat4 a1{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int l = 0; l < 4; ++l) a1[i][j] += gamma(0)[i][l] * gamma(1)[l][j];
  std::vector<DiracMode> out;
  for (std::size_t m = 0; m < modes_.size(); ++m) {
    const Vec3& k = modes_[m].k;
    const Vec3 kp{k[0] * ch - om_[m] * sh, k[1], k[2]};
    Spinor u = mul(a1, modes_[m].u);
    for (int a = 0; a < 4; ++a) u[a] = c2 * modes_[m].u[a] - s2 * u[a];
    out.push_back({kp, u});
  }
  return from_spinors(std::move(out), dirac_);
}

SpinorFn DiracField::fn() const {
  return [f = *this](const Vec4& x) { return f.eval(x); };
}

ScalarFieldFn DiracField::density_fn() const {
  return [f = *this](const Vec4& x) { return f.density(x); };
}

}  // namespace bohm::dirac
