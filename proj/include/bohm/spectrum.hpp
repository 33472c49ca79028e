#pragma once
#include <cstddef>
#include <vector>

#include "bohm/scalar.hpp"

namespace bohm {

// psi and its derivatives together with the NW amplitude chi.
struct SpectralSample {
  FieldSample f;
  cplx d2x{}, dxt{}, d2t{};
  cplx nw{}, nw_dx{}, nw_dt{};
};

// Discrete positive-energy spectrum: psi = sum c_i w_i^{-1/2} e^{i(k_i x - w_i t)},
// chi = sum c_i e^{i(k_i x - w_i t)}. Serves both finite mode sets and
// fixed quadrature tables of continuous packets.
class Spectrum {
 public:
  Spectrum() = default;
  Spectrum(std::vector<double> k, std::vector<cplx> c);

  std::size_t size() const { return k_.size(); }
  const std::vector<double>& k() const { return k_; }
  const std::vector<double>& omega() const { return om_; }
  const std::vector<double>& sqrt_omega() const { return so_; }
  const std::vector<cplx>& coeffs() const { return c_; }

  FieldSample sample(double x, double t) const;
  SpectralSample sample_full(double x, double t) const;
  cplx nw(double x, double t) const;
  // sum |c|^2, i.e. (1/2pi) of the total charge for a quadrature table.
  double weight_sum() const;

  // c_i e^{i theta_i} split into real and imaginary parts.
  void phased(double x, double t, std::vector<double>& re, std::vector<double>& im) const;

 private:
  std::vector<double> k_, om_, so_;
  std::vector<cplx> c_;
  // weight rows: w^{-1/2}, k w^{-1/2}, w^{1/2}, k^2 w^{-1/2}, k w^{1/2}, w^{3/2}, 1, k, w
  std::vector<std::vector<double>> rows_;
};

}  // namespace bohm
