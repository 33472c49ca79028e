#include "bohm/simd.hpp"

namespace bohm::simd::detail {

double toeplitz_bilinear2_scalar(const double* t, const double* a, const double* b, const double* c,
                                 const double* d, std::size_t n) {
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double* tp = t - static_cast<std::ptrdiff_t>(i);
    double sb = 0.0, sd = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      sb += tp[j] * b[j];
      sd += tp[j] * d[j];
    }
    total += a[i] * sb + c[i] * sd;
  }
  return total;
}

WSums w_quadratic_forms_scalar(const double* k, const double* om, const double* so, const double* p,
                               const double* q, std::size_t n) {
  double diag = 0.0, offw = 0.0, offd = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    diag += k[i] * k[i] / (4.0 * om[i] * om[i] * om[i] * om[i]) * (p[i] * p[i] + q[i] * q[i]);
    double aw = 0.0, ad = 0.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double kp = k[i] + k[j], km = k[i] - k[j];
      const double ss = so[i] + so[j], oo = om[i] + om[j];
      const double kern = kp * kp / (ss * ss * oo * oo * so[i] * so[j]);
      const double g = kern * (p[i] * p[j] + q[i] * q[j]);
      aw += g;
      ad += km * km * g;
    }
    offw += aw;
    offd += ad;
  }
  return {diag + 2.0 * offw, -2.0 * offd};
}

void weighted_sums_scalar(const double* zr, const double* zi, const double* const* w, std::size_t m,
                          std::size_t n, double* out_re, double* out_im) {
  for (std::size_t r = 0; r < m; ++r) {
    double sr = 0.0, si = 0.0;
    const double* wr = w[r];
    for (std::size_t i = 0; i < n; ++i) {
      sr += wr[i] * zr[i];
      si += wr[i] * zi[i];
    }
    out_re[r] = sr;
    out_im[r] = si;
  }
}

}  // namespace bohm::simd::detail
