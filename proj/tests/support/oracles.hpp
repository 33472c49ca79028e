#pragma once
// Independent reference computations used by the tests. None of these call
// into the library's numerical paths.
#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <utility>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;

inline double omega(double k) { return std::sqrt(1.0 + k * k); }

// psi = sum phi w^{-1/2} e^{i(kz - wt)} and its derivatives, term by term.
struct Psi {
  cplx psi, dx, dt;
};
inline Psi naive_psi(const std::vector<std::pair<double, cplx>>& modes, double z, double t) {
  Psi r{};
  for (const auto& [k, phi] : modes) {
    const double w = omega(k);
    const cplx e = phi / std::sqrt(w) * std::exp(cplx(0, k * z - w * t));
    r.psi += e;
    r.dx += cplx(0, k) * e;
    r.dt += cplx(0, -w) * e;
  }
  return r;
}
inline double naive_rho(const Psi& p) { return -(std::conj(p.psi) * p.dt).imag(); }
inline double naive_j(const Psi& p) { return (std::conj(p.psi) * p.dx).imag(); }

// Newton on w e^w = y from a branch-appropriate start.
inline double lambert_newton(int branch, double y) {
  double w = branch == 0 ? (y < 1 ? y : std::log(y)) : (y > -0.25 ? std::log(-y) - std::log(-std::log(-y)) : -2.0);
  if (branch == 0 && y < -0.3) w = -1.0 + std::sqrt(2.0 * (1.0 + std::exp(1.0) * y));
  if (branch == -1 && y < -0.3) w = -1.0 - std::sqrt(2.0 * (1.0 + std::exp(1.0) * y));
  for (int i = 0; i < 200; ++i) {
    const double f = w * std::exp(w) - y, d = std::exp(w) * (w + 1.0);
    if (d == 0) break;
    const double step = f / d;
    w -= step;
    if (std::abs(step) < 1e-16 * std::max(1.0, std::abs(w))) break;
  }
  return w;
}

// Classical fixed-step RK4 for dx/dt = v(x, t); the step is halved while
// |v| > 5 and integration stops at the first divergence flag.
struct VelocitySample {
  double v;
  bool divergent;
};
using VelocityFn = std::function<VelocitySample(double x, double t)>;
struct Path {
  std::vector<double> t, x;
  bool halted = false;
};
inline Path rk4(const VelocityFn& v, double x0, double t0, double t1, double dt) {
  Path p;
  p.t.push_back(t0);
  p.x.push_back(x0);
  double x = x0, t = t0;
  const double dir = t1 >= t0 ? 1.0 : -1.0;
  while (dir * (t1 - t) > 1e-15) {
    double h = std::min(dt, dir * (t1 - t)) * dir;
    const VelocitySample s0 = v(x, t);
    if (s0.divergent) {
      p.halted = true;
      break;
    }
    while (std::abs(s0.v) > 5 && std::abs(h) > dt / 1024) h /= 2;
    const VelocitySample k1 = s0, k2 = v(x + 0.5 * h * k1.v, t + 0.5 * h);
    const VelocitySample k3 = v(x + 0.5 * h * k2.v, t + 0.5 * h), k4 = v(x + h * k3.v, t + h);
    if (k2.divergent || k3.divergent || k4.divergent) {
      p.halted = true;
      break;
    }
    x += h / 6.0 * (k1.v + 2 * k2.v + 2 * k3.v + k4.v);
    t += h;
    p.t.push_back(t);
    p.x.push_back(x);
  }
  return p;
}

// Midpoint Riemann sum of f on [a, b] with n cells.
template <class F>
auto riemann(F f, double a, double b, std::size_t n) {
  const double h = (b - a) / double(n);
  decltype(f(a)) s{};
  for (std::size_t i = 0; i < n; ++i) s += f(a + (double(i) + 0.5) * h);
  return s * h;
}

}  // namespace oracle
