#pragma once
#include <cstddef>
#include <vector>

#include "bohm/nw.hpp"

namespace bohm::nearnr {

// Density-difference function W with rho - rho_NW = d^2W/dx^2 exactly, as the
// double k-sum on the packet table:
//   W = -(1/2) sum_ij c_i* c_j K_ij e^{i(theta_j - theta_i)},
//   K = (k + k')^2 / ((w^{1/2} + w'^{1/2})^2 (w + w')^2 (w w')^{1/2}).
struct WValue {
  double W = 0, d2W = 0;
  double error = 0;  // |d2W - d2W on the half-step shifted table|
};
WValue w_exact(const nw::PacketField& f, double x, double t);
// Same, without the shifted-table error estimate.
WValue w_exact_table(const nw::PacketField& f, double x, double t);

// (1/32) [d^2|chi|^2/dx^2 - 4 |chi_x|^2] with chi the NW amplitude.
double w_approx(const nw::PacketField& f, double x, double t);

struct TimeForm {
  double lhs = 0;      // rho - rho_NW
  double rhs27a = 0;   // (1/8) d_t d_x (rho v) = (1/8) d_t J_x
  double rhs27b = 0;   // -(1/8) d_t^2 rho
  double richardson = 0;  // |rhs27b(h) - rhs27b(h/2)| / max(|rhs27b|, tiny)
  bool step_conflict = false;
};
inline constexpr double default_ht = 1e-3;
// Time derivatives by central differences with step h (checked against h/2).
TimeForm density_difference_timeform(const nw::PacketField& f, double x, double t, double h = default_ht);

struct PositionMap {
  double x_nw = 0;  // x + f
  double f = 0;     // (1/8) rho^{-1} d_t (rho v)
  bool flagged = false;
};
PositionMap nw_position_map(const nw::PacketField& f, double x, double t, double eps = default_rho_eps);

struct CorrectionRow {
  double x, W, d2W, rho, rho_nw, d2rho_dt2, f, x_nw;
  bool flagged;
};
struct CorrectionField {
  double t = 0;
  std::vector<CorrectionRow> rows;
};
CorrectionField correction_field(const nw::PacketField& f, const std::vector<double>& xs, double t,
                                 unsigned threads = 1, double h = default_ht);

// Pushes rho forward through x -> x_nw (density rho / (dx_nw/dx)) and compares
// with rho_NW in L1 on the same nodes; xs must be increasing and cover the packet.
struct Pushforward {
  double l1_unmapped = 0, l1_mapped = 0;
  double improvement = 0;
  bool monotone = true;
};
Pushforward pushforward_l1(const CorrectionField& cf);

struct Moments {
  double m0_rho, m0_nw, m1_rho, m1_nw;
};
Moments moments(const nw::PacketField& f, double t);

// Pointwise check of rho - rho_NW = d^2W/dx^2 with rho and rho_NW from the
// adaptive quadrature and W from the table. tolerance is the combined error
// estimate of both sides at each point.
struct IdentityCheck {
  double max_residual = 0;
  double max_ratio = 0;  // max residual / tolerance
  double tolerance_at_max = 0;
};
IdentityCheck check_density_identity(const nw::PacketField& f, const std::vector<double>& xs, double t,
                                     unsigned threads = 1);

}  // namespace bohm::nearnr
