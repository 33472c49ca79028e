#pragma once
#include <complex>
#include <functional>

namespace bohm {

using cplx = std::complex<double>;

struct FieldSample {
  cplx psi{}, dpsi_dx{}, dpsi_dt{};
};

struct ScalarPolar {
  double A = 0.0;
  double S = 0.0;  // principal value in (-pi, pi]
};

ScalarPolar polar(const FieldSample& s);

// rho = (i/2)(psi* psi_t - psi*_t psi) = -Im(psi* psi_t). May be negative.
double density_rho(const FieldSample& s);
// J = (1/2i)(psi* psi_x - psi*_x psi) = Im(psi* psi_x).
double current_j(const FieldSample& s);

struct Velocity {
  double value = 0.0;
  bool divergent = false;
};

inline constexpr double default_rho_eps = 1e-12;

// v = J/rho; flagged divergent when |rho| < eps * |psi| * max(|psi_x|, |psi_t|).
Velocity velocity(const FieldSample& s, double eps = default_rho_eps);

// (S_t)^2 - (S_x)^2 from the bilinears, S_t = -rho/|psi|^2, S_x = J/|psi|^2.
double effective_mass_sq(const FieldSample& s);

// Phi = -(1/2) A^{-1} (d_xx - d_tt) A by central differences with step h.
double quantum_potential(const std::function<double(double, double)>& A, double x, double t, double h);
// Static form, spatial Laplacian only.
double quantum_potential_static(const std::function<double(double)>& A, double x, double h);

}  // namespace bohm
