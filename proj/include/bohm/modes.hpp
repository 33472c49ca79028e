#pragma once
#include <cstddef>
#include <vector>

#include "bohm/grid.hpp"
#include "bohm/scalar.hpp"
#include "bohm/spectrum.hpp"
#include "bohm/trajectory.hpp"

namespace bohm {

struct Mode {
  double k;
  cplx phi;
};

class ModeSet {
 public:
  explicit ModeSet(std::vector<Mode> modes);

  // Three or more modes with weights |phi|^2 chosen so that <k/w> = 0, the
  // `dominant` mode holding `dominant_weight` of the total; the rest share
  // the remainder. Only the two-unknown case (three modes) is solvable
  // uniquely and that is the one supported.
  static ModeSet rest_frame(const std::vector<double>& k, std::size_t dominant, double dominant_weight);

  const std::vector<Mode>& modes() const { return modes_; }
  const Spectrum& spectrum() const { return spec_; }
  std::size_t size() const { return modes_.size(); }
  double norm() const;  // sum |phi|^2

  // Same field seen from a frame moving with rapidity eta along +z.
  ModeSet boosted(double eta) const;

 private:
  std::vector<Mode> modes_;
  Spectrum spec_;
};

struct Event {
  double x, t;
};
Event boost_event(double eta, double x, double t);

FieldSample eval_psi(const ModeSet& s, double z, double t);

// rho/N and J/N via the pair sums of the discrete velocity formula.
struct PairDensities {
  double rho_n, j_n;
};
PairDensities pair_densities(const ModeSet& s, double z, double t);
Velocity velocity_discrete(const ModeSet& s, double z, double t, double eps = default_rho_eps);

struct FParts {
  double F;
  double re_sum, im_sum;  // real and imaginary part of the oscillatory double sum
};
// F = z - <k/w> t + Im D. Throws DomainError if Re D is not negligible.
FParts integral_F_parts(const ModeSet& s, double z, double t);
double integral_F(const ModeSet& s, double z, double t);

double mean_rest_frame_check(const ModeSet& s);

TrajectorySet trajectories(const ModeSet& s, const Grid2D& grid, std::size_t n_levels, unsigned threads = 1);

}  // namespace bohm
