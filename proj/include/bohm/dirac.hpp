#pragma once
#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "bohm/modes.hpp"
#include "bohm/scalar.hpp"

// Spin-1/2 fields in 3+1 dimensions. Coordinates x^mu = (t, x, y, z), metric
// diag(+1, -1, -1, -1). Index 0 is time throughout; derivative index mu means
// d/dx^mu (lower index).
namespace bohm::dirac {

using Spinor = std::array<cplx, 4>;
using Vec3 = std::array<double, 3>;
using Vec4 = std::array<double, 4>;
using Mat4 = std::array<std::array<double, 4>, 4>;
using CMat4 = std::array<std::array<cplx, 4>, 4>;

inline constexpr std::array<double, 4> metric{1.0, -1.0, -1.0, -1.0};

// Dirac representation, gamma^0 = diag(1, 1, -1, -1).
const CMat4& gamma(int mu);
Spinor mul(const CMat4& m, const Spinor& u);
// psi-bar phi = psi^dagger gamma^0 phi
cplx bar_dot(const Spinor& a, const Spinor& b);

enum class Spin { up, down };

// u(k, s) with u^dagger u = 2 omega.
Spinor plane_wave_spinor(const Vec3& k, Spin s);
// |(gamma^mu p_mu - 1) u| for p^mu = (omega, k).
double dirac_residual(const Vec3& k, const Spinor& u);

struct SpinorSample {
  Spinor psi{};
  std::array<Spinor, 4> d{};                   // d[mu] = d_mu psi
  std::array<std::array<Spinor, 4>, 4> dd{};   // dd[mu][nu], filled when has_second
  bool has_second = false;
};

using SpinorFn = std::function<SpinorSample(const Vec4&)>;
using ScalarFieldFn = std::function<double(const Vec4&)>;

struct DiracMode {
  Vec3 k;
  Spinor u;  // spinor amplitude (includes the coefficient)
};

// Superposition psi = sum u_m e^{i(k_m . x - w_m t)} of positive-energy modes.
class DiracField {
 public:
  struct LabeledMode {
    Vec3 k;
    Spin s;
    cplx c;
  };
  // Plane-wave spinors u(k, s) times c. Throws ConfigError on repeated modes
  // or an all-zero field.
  static DiracField from_modes(const std::vector<LabeledMode>& modes);
  // Explicit spinors; each must solve the Dirac equation unless check is false.
  static DiracField from_spinors(std::vector<DiracMode> modes, bool check = true);
  // psi = u0 * phi(x, t) with phi a Klein-Gordon mode set along x. The spinor
  // direction is constant, so this field solves only the KG equation.
  static DiracField scalar_embedding(const Spinor& u0, const ModeSet& s);
  // Modes drawn with |k| <= k_max, random spin and coefficient, seeded.
  static DiracField random(std::size_t n_modes, double k_max, std::uint64_t seed);

  const std::vector<DiracMode>& modes() const { return modes_; }
  bool solves_dirac() const { return dirac_; }

  SpinorSample eval(const Vec4& x) const;
  // psi-bar psi as a double sum, free of phase rounding on diagonal terms.
  double density(const Vec4& x) const;
  // density(x + h e_mu) - density(x), summed term by term without cancellation.
  double density_increment(const Vec4& x, int mu, double h) const;

  // Same field in the frame moving with rapidity eta along +x:
  // psi'(x') = S psi(x), x' = Lambda x.
  DiracField boosted(double eta) const;

  SpinorFn fn() const;
  ScalarFieldFn density_fn() const;

 private:
  std::vector<DiracMode> modes_;
  std::vector<double> om_;
  bool dirac_ = true;
};

Vec4 boost_event(double eta, const Vec4& x);

// Bilinears of one sample.
double scalar_density(const SpinorSample& s);  // psi-bar psi
struct Momentum {
  Vec4 lower{};  // P_mu = -Im(psi-bar d_mu psi) / psi-bar psi
  Vec4 upper{};
  double imag_residual = 0;  // |Im| of the real combination, relative
  bool node = false;
};
inline constexpr double default_node_eps = 1e-10;
Momentum convective_momentum(const SpinorSample& s, double eps = default_node_eps);
double effective_mass_sq(const SpinorSample& s, double eps = default_node_eps);

// T_{mu nu} built from first derivatives; symmetric by construction.
struct SpinTensor {
  Mat4 T{};
  double imag_residual = 0;
  bool node = false;
};
SpinTensor spin_tensor(const SpinorSample& s, double eps = default_node_eps);
// g^{mu nu} T_{mu nu}
double trace(const Mat4& T);

// Phi = (1/2) R^{-1} (d_t^2 - Laplacian) R, R = (psi-bar psi)^{1/2}, by
// central differences of step h in all four coordinates. Throws DomainError
// when psi-bar psi <= 0 on the stencil.
double quantum_potential_spinor(const ScalarFieldFn& density, const Vec4& x, double h);
// Same central differences for a plane-wave field, with the increments of
// psi-bar psi summed directly so rounding stays near eps / h.
double quantum_potential_spinor(const DiracField& f, const Vec4& x, double h);
// Same from analytic second derivatives (sample must carry them).
double quantum_potential_analytic(const SpinorSample& s);

// Gauge transform psi -> g psi with g and its gradient given at the point.
SpinorSample gauge(const SpinorSample& s, cplx g, const std::array<cplx, 4>& dg);

struct ConvergenceRow {
  double h;
  double max_residual;
};
struct IdentityReport {
  std::vector<ConvergenceRow> rows;  // h, h/2, ...
  std::vector<double> ratios;        // rows[i].max / rows[i+1].max
  std::vector<std::array<double, 4>> component_max;  // per row, EOM only
  bool converging = true;            // every ratio in [3, 5] or residual at rounding
};

// Mass identity P.P = 1 + 2 Phi - g^{mu nu} T_{mu nu} with Phi by finite
// differences, at h, h/2, ...
IdentityReport verify_mass_identity(const DiracField& f, const std::vector<Vec4>& pts, double h,
                                    std::size_t halvings = 1, unsigned threads = 1);
// P^nu d_nu P_mu - d_mu Phi + (psi-bar psi)^{-1} d^nu (psi-bar psi T_{mu nu}),
// outer derivatives by central differences.
IdentityReport verify_eom(const DiracField& f, const std::vector<Vec4>& pts, double h, std::size_t halvings = 1,
                          unsigned threads = 1);

// Random events in [-box, box]^4 with psi-bar psi above g_min times the
// space average of psi^dagger psi.
std::vector<Vec4> sample_points(const DiracField& f, std::size_t n, double box, std::uint64_t seed,
                                double g_min = 0.2);

// ---- Foldy-Wouthuysen limit ----

// Closed-form amplitude A = exp(-q), phase S and unit spin field s-hat, with
// analytic derivatives up to second order.
struct Jet {
  double v = 0;
  Vec4 d{};
  Mat4 dd{};
};
struct Jet3 {
  Vec3 v{};
  std::array<Vec4, 3> d{};
  std::array<Mat4, 3> dd{};
};

// q = sum_i a_i x_i^2 / 2 + b3 x^3 + b4 x^4 over spatial coordinates.
struct AmplitudeSpec {
  Vec3 a{1, 1, 1};
  double b3 = 0, b4 = 0;
  double centre_shift = 0;  // x offset of the quadratic centre
  Jet q(const Vec4& x) const;
  Jet amplitude(const Vec4& x) const;
  // spatial gradient of Phi = -(1/2) Lap A / A = -(1/2)(|grad q|^2 - Lap q)
  Vec3 grad_phi(const Vec4& x) const;
};
// S = p . x + (1/2) c |x_spatial|^2
struct PhaseSpec {
  Vec4 p{};
  double c = 0;
  Jet phase(const Vec4& x) const;
};

enum class SpinKind { constant, angles, hedgehog };
// angles: theta = theta0 + g_theta . x, phi = phi0 + g_phi . x
// hedgehog: s = (x, y, c) / |(x, y, c)|
struct SpinSpec {
  SpinKind kind = SpinKind::constant;
  double theta0 = 0, phi0 = 0;
  Vec4 g_theta{}, g_phi{};
  double c = 1.0;
  Jet3 s(const Vec4& x) const;
};

struct FWField {
  AmplitudeSpec amp;
  PhaseSpec phase;
  SpinSpec spin;
  void validate_at(const Vec4& x) const;  // |s| = 1, s3 > -1
};

// u(s) = (1 + s3, s1 + i s2, 0, 0) / sqrt(2(1 + s3)). Throws DomainError near s3 = -1.
Spinor fw_u(const Vec3& s);
SpinorSample fw_spinor(const FWField& f, const Vec4& x);

struct Bilinears {
  double norm_residual;   // |u^dagger u - 1|
  double spin_residual;   // max_k |u^dagger sigma_k u - s_k|
};
Bilinears fw_bilinears(const Vec3& s);

// max |T(spinor) - (1/4) d s . d s| over points and index pairs.
double verify_fw_spin_tensor(const FWField& f, const std::vector<Vec4>& pts);
// v_j = P^j on the FW spinor; returns the velocity and, for the check, its
// curl by central differences compared with (1/4) eps eps s ds ds.
Vec3 fw_velocity(const FWField& f, const Vec4& x);
Vec3 curl_rhs(const FWField& f, const Vec4& x);
IdentityReport verify_curl_formula(const FWField& f, const std::vector<Vec4>& pts, double h,
                                   std::size_t halvings = 1);

struct BalanceReport {
  Vec3 integral{};       // int A^2 RHS_j
  double abs_integral = 0;  // int A^2 |RHS|
  double relative = 0;   // max_j |integral_j| / abs_integral
  double boundary_amplitude = 0;  // max A / A_peak on the box faces
  bool boundary_warning = false;
};
// Trapezoid rule on [-L, L]^3 with n nodes per axis at fixed t.
BalanceReport verify_ensemble_balance(const FWField& f, double L, std::size_t n, double t = 0.0,
                                      unsigned threads = 1);

}  // namespace bohm::dirac
