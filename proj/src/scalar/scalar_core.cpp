#include <algorithm>
#include <cmath>

#include "bohm/errors.hpp"
#include "bohm/scalar.hpp"

namespace bohm {

ScalarPolar polar(const FieldSample& s) { return {std::abs(s.psi), std::arg(s.psi)}; }

double density_rho(const FieldSample& s) { return -(std::conj(s.psi) * s.dpsi_dt).imag(); }

double current_j(const FieldSample& s) { return (std::conj(s.psi) * s.dpsi_dx).imag(); }

Velocity velocity(const FieldSample& s, double eps) {
  const double rho = density_rho(s), j = current_j(s);
  const double scale = std::abs(s.psi) * std::max(std::abs(s.dpsi_dx), std::abs(s.dpsi_dt));
  if (!(std::abs(rho) >= eps * scale) || rho == 0.0) return {0.0, true};
  return {j / rho, false};
}

double effective_mass_sq(const FieldSample& s) {
  const double a2 = std::norm(s.psi);
  if (!(a2 > 0)) throw DomainError("effective_mass_sq: node of the wavefunction");
  const double st = -density_rho(s) / a2, sx = current_j(s) / a2;
  return st * st - sx * sx;
}

double quantum_potential(const std::function<double(double, double)>& A, double x, double t, double h) {
  if (!(h > 0)) throw DomainError("quantum_potential: step must be > 0");
  const double a0 = A(x, t), axp = A(x + h, t), axm = A(x - h, t), atp = A(x, t + h), atm = A(x, t - h);
  if (!(a0 > 0 && axp > 0 && axm > 0 && atp > 0 && atm > 0))
    throw DomainError("quantum_potential: amplitude vanishes on the stencil");
  const double axx = (axp - 2 * a0 + axm) / (h * h), att = (atp - 2 * a0 + atm) / (h * h);
  return -0.5 * (axx - att) / a0;
}

double quantum_potential_static(const std::function<double(double)>& A, double x, double h) {
  if (!(h > 0)) throw DomainError("quantum_potential_static: step must be > 0");
  const double a0 = A(x), ap = A(x + h), am = A(x - h);
  if (!(a0 > 0 && ap > 0 && am > 0)) throw DomainError("quantum_potential_static: amplitude vanishes on the stencil");
  return -0.5 * (ap - 2 * a0 + am) / (h * h) / a0;
}

}  // namespace bohm
