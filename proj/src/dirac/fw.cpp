#include <algorithm>
#include <cmath>

#include "bohm/dirac.hpp"
#include "bohm/errors.hpp"
#include "bohm/parallel.hpp"
#include "bohm/quadrature.hpp"

namespace bohm::dirac {

namespace {

const cplx I{0.0, 1.0};

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

// d_mu s as a 3-vector
Vec3 ds(const Jet3& s, int mu) { return {s.d[0][mu], s.d[1][mu], s.d[2][mu]}; }

int eps3(int i, int j, int k) { return (i - j) * (j - k) * (k - i) / 2; }

}  // namespace

Jet AmplitudeSpec::q(const Vec4& x) const {
  Jet j;
  const double X = x[1] - centre_shift;
  const Vec3 r{X, x[2], x[3]};
  for (int i = 0; i < 3; ++i) {
    j.v += 0.5 * a[i] * r[i] * r[i];
    j.d[i + 1] = a[i] * r[i];
    j.dd[i + 1][i + 1] = a[i];
  }
  j.v += b3 * X * X * X + b4 * X * X * X * X;
  j.d[1] += 3.0 * b3 * X * X + 4.0 * b4 * X * X * X;
  j.dd[1][1] += 6.0 * b3 * X + 12.0 * b4 * X * X;
  return j;
}

Jet AmplitudeSpec::amplitude(const Vec4& x) const {
  const Jet qj = q(x);
  Jet A;
  A.v = std::exp(-qj.v);
  for (int m = 0; m < 4; ++m) {
    A.d[m] = -A.v * qj.d[m];
    for (int n = 0; n < 4; ++n) A.dd[m][n] = A.v * (qj.d[m] * qj.d[n] - qj.dd[m][n]);
  }
  return A;
}

Vec3 AmplitudeSpec::grad_phi(const Vec4& x) const {
  const Jet qj = q(x);
  const double X = x[1] - centre_shift;
  // d_j |grad q|^2 = 2 q_j q_jj (diagonal Hessian); d_x Lap q = 6 b3 + 24 b4 X
  Vec3 g{};
  for (int j = 0; j < 3; ++j) g[j] = -qj.d[j + 1] * qj.dd[j + 1][j + 1];
  g[0] += 0.5 * (6.0 * b3 + 24.0 * b4 * X);
  return g;
}

Jet PhaseSpec::phase(const Vec4& x) const {
  Jet j;
  double r2 = 0;
  for (int m = 0; m < 4; ++m) {
    j.v += p[m] * x[m];
    j.d[m] = p[m];
  }
  for (int i = 1; i < 4; ++i) {
    r2 += x[i] * x[i];
    j.d[i] += c * x[i];
    j.dd[i][i] = c;
  }
  j.v += 0.5 * c * r2;
  return j;
}

Jet3 SpinSpec::s(const Vec4& x) const {
  Jet3 j;
  switch (kind) {
    case SpinKind::constant:
    case SpinKind::angles: {
      double th = theta0, ph = phi0;
      if (kind == SpinKind::angles)
        for (int m = 0; m < 4; ++m) {
          th += g_theta[m] * x[m];
          ph += g_phi[m] * x[m];
        }
      const double st = std::sin(th), ct = std::cos(th), sp = std::sin(ph), cp = std::cos(ph);
      j.v = {st * cp, st * sp, ct};
      if (kind == SpinKind::constant) return j;
      const Vec3 s_t{ct * cp, ct * sp, -st}, s_p{-st * sp, st * cp, 0.0};
      const Vec3 s_tt{-st * cp, -st * sp, -ct}, s_tp{-ct * sp, ct * cp, 0.0}, s_pp{-st * cp, -st * sp, 0.0};
      for (int l = 0; l < 3; ++l)
        for (int m = 0; m < 4; ++m) {
          j.d[l][m] = s_t[l] * g_theta[m] + s_p[l] * g_phi[m];
          for (int n = 0; n < 4; ++n)
            j.dd[l][m][n] = s_tt[l] * g_theta[m] * g_theta[n] +
                            s_tp[l] * (g_theta[m] * g_phi[n] + g_phi[m] * g_theta[n]) +
                            s_pp[l] * g_phi[m] * g_phi[n];
        }
      return j;
    }
    case SpinKind::hedgehog: {
      const Vec3 r{x[1], x[2], c};
      const double rn = std::sqrt(dot(r, r));
      for (int l = 0; l < 3; ++l) j.v[l] = r[l] / rn;
      // only x and y enter r
      for (int l = 0; l < 3; ++l)
        for (int i = 0; i < 2; ++i) {
          j.d[l][i + 1] = ((l == i ? 1.0 : 0.0) - j.v[l] * j.v[i]) / rn;
          for (int k = 0; k < 2; ++k) {
            const double dli = l == i, dlk = l == k, dik = i == k;
            j.dd[l][i + 1][k + 1] =
                (3.0 * j.v[l] * j.v[i] * j.v[k] - (dli * j.v[k] + dlk * j.v[i] + dik * j.v[l])) / (rn * rn);
          }
        }
      return j;
    }
  }
  return j;
}

void FWField::validate_at(const Vec4& x) const {
  const Vec3 s = spin.s(x).v;
  if (std::abs(dot(s, s) - 1.0) > 1e-12) throw DomainError("fw field: spin direction is not a unit vector");
  if (!(s[2] > -1.0 + 1e-8)) throw DomainError("fw field: s3 = -1 singularity");
}

Spinor fw_u(const Vec3& s) {
  if (!(1.0 + s[2] > 1e-8)) throw DomainError("fw_u: s3 = -1 singularity");
  const double N = std::sqrt(2.0 * (1.0 + s[2]));
  return {(1.0 + s[2]) / N, cplx(s[0], s[1]) / N, 0.0, 0.0};
}

SpinorSample fw_spinor(const FWField& f, const Vec4& x) {
  f.validate_at(x);
  const Jet A = f.amp.amplitude(x);
  const Jet S = f.phase.phase(x);
  const Jet3 s = f.spin.s(x);
  const Spinor u = fw_u(s.v);
  const double N = std::sqrt(2.0 * (1.0 + s.v[2]));
  const cplx e = std::polar(1.0, S.v);
  SpinorSample out;
  for (int a = 0; a < 4; ++a) out.psi[a] = A.v * e * u[a];
  for (int mu = 0; mu < 4; ++mu) {
    const Vec3 d = ds(s, mu);
    // du0 = d s3 / (4 u0), du1 = (ds1 + i ds2)/N - (s1 + i s2) ds3 / N^3
    const cplx du0 = d[2] / (4.0 * u[0].real());
    const cplx du1 = cplx(d[0], d[1]) / N - cplx(s.v[0], s.v[1]) * d[2] / (N * N * N);
    const cplx pre = A.d[mu] * e + A.v * I * S.d[mu] * e;
    out.d[mu][0] = pre * u[0] + A.v * e * du0;
    out.d[mu][1] = pre * u[1] + A.v * e * du1;
  }
  return out;
}

Bilinears fw_bilinears(const Vec3& s) {
  const Spinor u = fw_u(s);
  Bilinears b{};
  b.norm_residual = std::abs(std::norm(u[0]) + std::norm(u[1]) - 1.0);
  // Pauli expectation values on the upper components
  const cplx s1 = std::conj(u[0]) * u[1] + std::conj(u[1]) * u[0];
  const cplx s2 = -I * std::conj(u[0]) * u[1] + I * std::conj(u[1]) * u[0];
  const cplx s3 = std::norm(u[0]) - std::norm(u[1]);
  b.spin_residual = std::max({std::abs(s1 - s[0]), std::abs(s2 - s[1]), std::abs(s3 - s[2])});
  return b;
}

double verify_fw_spin_tensor(const FWField& f, const std::vector<Vec4>& pts) {
  double worst = 0;
  for (const Vec4& x : pts) {
    const SpinTensor t = spin_tensor(fw_spinor(f, x));
    if (t.node) throw DomainError("verify_fw_spin_tensor: amplitude vanishes at a sample point");
    const Jet3 s = f.spin.s(x);
    for (int m = 0; m < 4; ++m)
      for (int n = 0; n < 4; ++n) worst = std::max(worst, std::abs(t.T[m][n] - 0.25 * dot(ds(s, m), ds(s, n))));
  }
  return worst;
}

Vec3 fw_velocity(const FWField& f, const Vec4& x) {
  const Momentum p = convective_momentum(fw_spinor(f, x));
  if (p.node) throw DomainError("fw_velocity: amplitude vanishes");
  return {p.upper[1], p.upper[2], p.upper[3]};
}

Vec3 curl_rhs(const FWField& f, const Vec4& x) {
  const Jet3 s = f.spin.s(x);
  Vec3 r{};
  for (int k = 0; k < 3; ++k)
    for (int j = 0; j < 3; ++j)
      for (int i = 0; i < 3; ++i) {
        const int e = eps3(k, j, i);
        if (e == 0) continue;
        r[k] += 0.25 * e * dot(s.v, cross(ds(s, j + 1), ds(s, i + 1)));
      }
  return r;
}

IdentityReport verify_curl_formula(const FWField& f, const std::vector<Vec4>& pts, double h, std::size_t halvings) {
  IdentityReport rep;
  for (std::size_t level = 0; level <= halvings; ++level) {
    const double hh = h / double(1u << level);
    double worst = 0;
    for (const Vec4& x : pts) {
      // grad[i][j] = d_i v_j
      std::array<Vec3, 3> grad{};
      for (int i = 0; i < 3; ++i) {
        Vec4 a = x, b = x;
        a[i + 1] += hh;
        b[i + 1] -= hh;
        const Vec3 va = fw_velocity(f, a), vb = fw_velocity(f, b);
        for (int j = 0; j < 3; ++j) grad[i][j] = (va[j] - vb[j]) / (2.0 * hh);
      }
      const Vec3 curl{grad[1][2] - grad[2][1], grad[2][0] - grad[0][2], grad[0][1] - grad[1][0]};
      const Vec3 rhs = curl_rhs(f, x);
      for (int k = 0; k < 3; ++k) worst = std::max(worst, std::abs(curl[k] - rhs[k]));
    }
    rep.rows.push_back({hh, worst});
  }
  rep.converging = true;
  for (std::size_t i = 0; i + 1 < rep.rows.size(); ++i) {
    const double a = rep.rows[i].max_residual, b = rep.rows[i + 1].max_residual;
    const double ratio = a / std::max(b, 1e-300);
    rep.ratios.push_back(ratio);
    if (!(a < 1e-10 && b < 1e-10) && !(ratio >= 3.0 && ratio <= 5.0)) rep.converging = false;
  }
  return rep;
}

BalanceReport verify_ensemble_balance(const FWField& f, double L, std::size_t n, double t, unsigned threads) {
  if (!(L > 0) || n < 3) throw ConfigError("ensemble balance: need L > 0 and n >= 3");
  const double h = 2.0 * L / double(n - 1);
  auto node = [&](std::size_t i) { return -L + h * double(i); };
  auto wt = [&](std::size_t i) { return (i == 0 || i + 1 == n) ? 0.5 : 1.0; };
  struct Slab {
    KahanSum I[3], abs;
    double peak = 0, edge = 0;
  };
  std::vector<Slab> slabs(n);
  parallel_for(n, threads, [&](std::size_t ix) {
    Slab& sl = slabs[ix];
    for (std::size_t iy = 0; iy < n; ++iy)
      for (std::size_t iz = 0; iz < n; ++iz) {
        const Vec4 x{t, node(ix), node(iy), node(iz)};
        const Jet A = f.amp.amplitude(x);
        const bool face = ix == 0 || iy == 0 || iz == 0 || ix + 1 == n || iy + 1 == n || iz + 1 == n;
        sl.peak = std::max(sl.peak, A.v);
        if (face) sl.edge = std::max(sl.edge, A.v);
        const double A2 = A.v * A.v;
        if (A2 == 0.0) continue;
        const Jet qj = f.amp.q(x);
        const Jet3 s = f.spin.s(x);
        const Vec3 gphi = f.amp.grad_phi(x);
        Vec3 rhs{};
        for (int j = 0; j < 3; ++j) {
          double stress = 0;
          for (int i = 0; i < 3; ++i) {
            const Vec3 dj = ds(s, j + 1), di = ds(s, i + 1);
            const double T = 0.25 * dot(dj, di);
            Vec3 dij{}, dii{};
            for (int l = 0; l < 3; ++l) {
              dij[l] = s.dd[l][i + 1][j + 1];
              dii[l] = s.dd[l][i + 1][i + 1];
            }
            const double dT = 0.25 * (dot(dij, di) + dot(dj, dii));
            stress += dT - 2.0 * qj.d[i + 1] * T;
          }
          rhs[j] = -(gphi[j] + stress);
        }
        const double w = wt(ix) * wt(iy) * wt(iz) * h * h * h * A2;
        for (int j = 0; j < 3; ++j) sl.I[j].add(w * rhs[j]);
        sl.abs.add(w * std::sqrt(dot(rhs, rhs)));
      }
  });
  BalanceReport r;
  KahanSum tot[3], tabs;
  double peak = 0, edge = 0;
  for (const Slab& sl : slabs) {
    for (int j = 0; j < 3; ++j) tot[j].add(sl.I[j].value());
    tabs.add(sl.abs.value());
    peak = std::max(peak, sl.peak);
    edge = std::max(edge, sl.edge);
  }
  for (int j = 0; j < 3; ++j) r.integral[j] = tot[j].value();
  r.abs_integral = tabs.value();
  double m = 0;
  for (double v : r.integral) m = std::max(m, std::abs(v));
  r.relative = m / std::max(r.abs_integral, 1e-300);
  r.boundary_amplitude = edge / std::max(peak, 1e-300);
  r.boundary_warning = r.boundary_amplitude > 1e-10;
  return r;
}

}  // namespace bohm::dirac
