#pragma once
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

namespace bohm {

struct QuadratureSpec {
  double k_cut = 0.0;  // truncation of infinite k-integrals; 0 when unused
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  std::size_t max_subdivisions = 200000;
  // Upper bound on initial panel width; oscillatory callers set it to a
  // fraction of the local period.
  double max_panel = std::numeric_limits<double>::infinity();

  void validate() const;
};

struct QuadResult {
  std::complex<double> value;
  double error = 0.0;
  bool converged = false;
  std::size_t panels = 0;
};

struct QuadResultN {
  std::vector<std::complex<double>> value;
  double error = 0.0;  // max over components
  bool converged = false;
  std::size_t panels = 0;
};

using Integrand = std::function<std::complex<double>(double)>;
// Fills out[0..dim) with the integrand components at x.
using IntegrandN = std::function<void(double, std::complex<double>*)>;

// Adaptive Gauss-Kronrod (7/15) with global error-driven bisection.
// Panel contributions are summed in interval order with compensated sums,
// so the result depends only on the inputs.
QuadResult integrate_1d(const Integrand& f, double a, double b, const QuadratureSpec& spec);
QuadResultN integrate_1d(const IntegrandN& f, std::size_t dim, double a, double b,
                         const QuadratureSpec& spec);

// Neumaier-compensated accumulator.
struct KahanSum {
  double sum = 0.0, comp = 0.0;
  void add(double v);
  double value() const { return sum + comp; }
};

}  // namespace bohm
