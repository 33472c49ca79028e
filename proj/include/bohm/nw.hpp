#pragma once
#include <cstddef>
#include <optional>
#include <vector>

#include "bohm/grid.hpp"
#include "bohm/quadrature.hpp"
#include "bohm/scalar.hpp"
#include "bohm/spectrum.hpp"
#include "bohm/trajectory.hpp"

namespace bohm::nw {

enum class Shape { cos2, gaussian };

// Continuous positive-energy packet with real k-space shape s(k) and
// amplitude A(k) = N s(k) / (2 pi), so that the NW amplitude is
// chi(x, t) = int A(k) e^{i(kx - wt)} dk.
//   cos2:     s = sin(ka) / (k (1 - k^2 a^2 / pi^2)), chi(x, 0) = N cos^2(pi x / 2a) on |x| < a,
//             N^2 = 8 / (3a) so that int rho_NW = 2 and int_0^a rho_NW = 1.
//   gaussian: s = exp(-(k - k0)^2 / (4 sigma^2)), int rho_NW = 1.
struct PacketSpec {
  Shape shape = Shape::cos2;
  double a = 1.0;
  double k0 = 0.0;
  double sigma_k = 0.05;

  static PacketSpec cos2(double a);
  static PacketSpec gaussian(double k0, double sigma_k);

  void validate() const;  // throws ConfigError
  double s(double k) const;
  double norm() const;
  double amplitude(double k) const;
  double nw_mass() const;
  bool even() const;
  // k-range from the envelope rule: the integrand envelope (including the
  // w^{-1/2} factor) drops below rel * peak outside it.
  double k_lo(double rel = 1e-8) const;
  double k_hi(double rel = 1e-8) const;
  // Bound on |s(k)| w^{1/2} at the cut, used for the truncation estimate.
  double tail_envelope(double k) const;
  // Half-width in x beyond which densities are negligible at time t.
  double x_extent(double t) const;
  double x_centre(double t) const;
};

QuadratureSpec default_quadrature(const PacketSpec& p);

struct PsiResult {
  FieldSample f;
  double error;  // quadrature plus truncation estimate (max over components)
};

// Adaptive quadrature in k; derivatives under the integral.
PsiResult psi_xt(const PacketSpec& p, double x, double t, const QuadratureSpec& q);
struct NwResult {
  cplx chi;
  double error;
};
NwResult psi_nw(const PacketSpec& p, double x, double t, const QuadratureSpec& q);

struct TableSpec {
  double dk = 0.0;  // 0 picks the default for the shape
  bool offset = false;  // nodes moved by half a step, for error estimates
};

double default_dk(const PacketSpec& p);

// Packet sampled on a fixed uniform midpoint grid in k. Immutable after
// construction and shared read-only between threads.
class PacketField {
 public:
  explicit PacketField(PacketSpec p, TableSpec t = {});

  const PacketSpec& packet() const { return p_; }
  const Spectrum& spectrum() const { return spec_; }
  const TableSpec& table() const { return t_; }
  double dk() const { return dk_; }
  double charge() const { return charge_; }  // int rho dx = int rho_NW dx

  FieldSample sample(double x, double t) const { return spec_.sample(x, t); }
  SpectralSample sample_full(double x, double t) const { return spec_.sample_full(x, t); }
  cplx nw(double x, double t) const { return spec_.nw(x, t); }

  // Continuous integral of motion, normalized so dF/dx = rho / Q and
  // dF/dt = -J / Q, with F(0, t) = 0 for even packets.
  double F(double x, double t) const;

  // Same packet on the half-step shifted grid.
  PacketField shifted() const;

 private:
  PacketSpec p_;
  TableSpec t_;
  double dk_ = 0.0;
  Spectrum spec_;
  std::vector<double> toeplitz_;  // 1 / (m dk), m = -(n-1) .. n-1, zero at m = 0
  std::vector<double> u_;         // c / sqrt(w)
  double charge_ = 0.0;
};

// Kernel of the continuous double integral at (k, k'), removable diagonal
// included: sin((k-k')x - (w-w')t) / (k' - k), and -(x - (k/w) t) at k = k'.
double F_kernel(double k, double kp, double x, double t);

struct DensityRow {
  double x, rho, rho_nw, j, rho_nw0;
};
struct DensityProfile {
  double t = 0;
  double abs_rho_mass = 0;  // int |rho| dx used for the rho_NW0 rescaling
  std::vector<DensityRow> rows;
};

// rho_NW0 = |rho| rescaled to the NW mass of the packet.
DensityProfile densities(const PacketField& f, const std::vector<double>& xs, double t, unsigned threads = 1);

// int over the line of g(x), exploiting evenness for even packets.
double integrate_x(const PacketField& f, double t, const std::function<double(double)>& g, double tol = 1e-11);

// Fraction of NW probability outside the light cone |x| > a + t (cos2 only).
double acausal_probability(const PacketField& f, double t);

double integral_F_continuous(const PacketField& f, double x, double t);

TrajectorySet annihilation_fronts(const PacketField& f, const Grid2D& grid, std::size_t n_levels,
                                  const std::vector<double>& extra_levels = {}, unsigned threads = 1);

struct Thresholds {
  double x_th = 0, x0 = 0;
  double head_charge = 0;   // int_0^{x_th} rho(x, 0)
  double tail_charge = 0;   // int_{x_th}^inf rho(x, 0)
  double nw_half = 0;       // int_0^a rho_NW(x, 0)
  double far_tail = 0;      // int_{x0}^inf rho(x, 0)
};

// t = 0 crossings of the cos2 packet: x0 is the first positive root of rho,
// x_th the root of the tail charge on [0.1a, x0].
Thresholds zero_crossings(const PacketSpec& p, const QuadratureSpec& q);

// Local model near an annihilation point: rho ~ alpha (x - x_rho),
// J ~ beta (x - x_j) with frozen coefficients. With u = x - x_j,
// d = x_rho - x_j and r = beta / alpha the trajectories solve
// u - d ln|u| = r t + C.
struct LambertLocalModel {
  double alpha, x_rho, beta, x_j;

  double invariant(double x, double t) const;
  double velocity(double x) const;
  // Solution on a Lambert branch: branch 0 or -1 on the cusp side
  // (u/d > 0), or the single solution on the far side when far_side is set.
  // Throws DomainError when t lies beyond the fold for that branch.
  double solve(int branch, double C, double t, bool far_side = false) const;
};

struct LocalTrajectoryFamily {
  LambertLocalModel model;
  double C = 0;
  std::vector<double> t;
  // NaN where the sample lies beyond the fold.
  std::vector<double> x_w0, x_wm1;
};

LocalTrajectoryFamily lambert_local_trajectories(double rho_slope, double rho_zero, double j_slope, double j_zero,
                                                 double C, const std::vector<double>& t_samples);

struct VertexFit {
  double x_star, t_star, level;
  LambertLocalModel model;
  double C;
};

// Refines an annihilation vertex on level c to the point where the contour
// meets rho = 0, then linearizes rho and J there in x.
VertexFit fit_annihilation_vertex(const PacketField& f, double level, double x_guess, double t_guess);

// Both cusp arms of the fitted model sampled on [t* - window, t*] and
// compared with a contour polyline by Euclidean distance in (x, t).
struct VertexComparison {
  double worst_distance = 0;
  std::size_t samples = 0;  // arm points that lie before the fold
};
VertexComparison compare_vertex_fit(const VertexFit& fit, const TrajPolyline& line, double window = 0.05,
                                    std::size_t n = 21);

}  // namespace bohm::nw
