#include "bohm/spectrum.hpp"

#include <cmath>

#include "bohm/dispersion.hpp"
#include "bohm/errors.hpp"
#include "bohm/simd.hpp"

namespace bohm {

namespace {
constexpr std::size_t n_rows = 9;
const cplx I{0.0, 1.0};
}  // namespace

Spectrum::Spectrum(std::vector<double> k, std::vector<cplx> c) : k_(std::move(k)), c_(std::move(c)) {
  if (k_.size() != c_.size()) throw DomainError("Spectrum: k and coefficient counts differ");
  const std::size_t n = k_.size();
  om_.resize(n);
  so_.resize(n);
  rows_.assign(n_rows, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(k_[i])) throw DomainError("Spectrum: non-finite wavenumber");
    om_[i] = bohm::omega(k_[i]);
    so_[i] = std::sqrt(om_[i]);
    const double is = 1.0 / so_[i];
    rows_[0][i] = is;
    rows_[1][i] = k_[i] * is;
    rows_[2][i] = so_[i];
    rows_[3][i] = k_[i] * k_[i] * is;
    rows_[4][i] = k_[i] * so_[i];
    rows_[5][i] = om_[i] * so_[i];
    rows_[6][i] = 1.0;
    rows_[7][i] = k_[i];
    rows_[8][i] = om_[i];
  }
}

void Spectrum::phased(double x, double t, std::vector<double>& re, std::vector<double>& im) const {
  const std::size_t n = size();
  re.resize(n);
  im.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double th = k_[i] * x - om_[i] * t;
    const double cs = std::cos(th), sn = std::sin(th);
    re[i] = c_[i].real() * cs - c_[i].imag() * sn;
    im[i] = c_[i].real() * sn + c_[i].imag() * cs;
  }
}

FieldSample Spectrum::sample(double x, double t) const {
  thread_local std::vector<double> re, im;
  phased(x, t, re, im);
  const double* w[3] = {rows_[0].data(), rows_[1].data(), rows_[2].data()};
  double sr[3], si[3];
  simd::weighted_sums(re.data(), im.data(), w, 3, size(), sr, si);
  const cplx s0{sr[0], si[0]}, s1{sr[1], si[1]}, s2{sr[2], si[2]};
  return {s0, I * s1, -I * s2};
}

SpectralSample Spectrum::sample_full(double x, double t) const {
  thread_local std::vector<double> re, im;
  phased(x, t, re, im);
  const double* w[n_rows];
  for (std::size_t r = 0; r < n_rows; ++r) w[r] = rows_[r].data();
  double sr[n_rows], si[n_rows];
  simd::weighted_sums(re.data(), im.data(), w, n_rows, size(), sr, si);
  cplx s[n_rows];
  for (std::size_t r = 0; r < n_rows; ++r) s[r] = {sr[r], si[r]};
  SpectralSample out;
  out.f = {s[0], I * s[1], -I * s[2]};
  out.d2x = -s[3];
  out.dxt = s[4];
  out.d2t = -s[5];
  out.nw = s[6];
  out.nw_dx = I * s[7];
  out.nw_dt = -I * s[8];
  return out;
}

cplx Spectrum::nw(double x, double t) const {
  thread_local std::vector<double> re, im;
  phased(x, t, re, im);
  const double* w[1] = {rows_[6].data()};
  double sr, si;
  simd::weighted_sums(re.data(), im.data(), w, 1, size(), &sr, &si);
  return {sr, si};
}

double Spectrum::weight_sum() const {
  double s = 0.0;
  for (const auto& c : c_) s += std::norm(c);
  return s;
}

}  // namespace bohm
