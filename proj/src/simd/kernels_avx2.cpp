// Compiled with -mavx2 -mfma; only reached after the runtime cpu check.
#include <immintrin.h>

#include "bohm/simd.hpp"

namespace bohm::simd::detail {

namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v), hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

double toeplitz_bilinear2_avx2(const double* t, const double* a, const double* b, const double* c,
                               const double* d, std::size_t n) {
  double total = 0.0;
  const std::size_t n4 = n & ~std::size_t(3);
  for (std::size_t i = 0; i < n; ++i) {
    const double* tp = t - static_cast<std::ptrdiff_t>(i);
    __m256d sb0 = _mm256_setzero_pd(), sd0 = _mm256_setzero_pd();
    __m256d sb1 = _mm256_setzero_pd(), sd1 = _mm256_setzero_pd();
    std::size_t j = 0;
    for (; j + 8 <= n; j += 8) {
      const __m256d t0 = _mm256_loadu_pd(tp + j), t1 = _mm256_loadu_pd(tp + j + 4);
      sb0 = _mm256_fmadd_pd(t0, _mm256_loadu_pd(b + j), sb0);
      sd0 = _mm256_fmadd_pd(t0, _mm256_loadu_pd(d + j), sd0);
      sb1 = _mm256_fmadd_pd(t1, _mm256_loadu_pd(b + j + 4), sb1);
      sd1 = _mm256_fmadd_pd(t1, _mm256_loadu_pd(d + j + 4), sd1);
    }
    for (; j < n4; j += 4) {
      const __m256d t0 = _mm256_loadu_pd(tp + j);
      sb0 = _mm256_fmadd_pd(t0, _mm256_loadu_pd(b + j), sb0);
      sd0 = _mm256_fmadd_pd(t0, _mm256_loadu_pd(d + j), sd0);
    }
    double sb = hsum(_mm256_add_pd(sb0, sb1)), sd = hsum(_mm256_add_pd(sd0, sd1));
    for (; j < n; ++j) {
      sb += tp[j] * b[j];
      sd += tp[j] * d[j];
    }
    total += a[i] * sb + c[i] * sd;
  }
  return total;
}

WSums w_quadratic_forms_avx2(const double* k, const double* om, const double* so, const double* p,
                             const double* q, std::size_t n) {
  double diag = 0.0, offw = 0.0, offd = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    diag += k[i] * k[i] / (4.0 * om[i] * om[i] * om[i] * om[i]) * (p[i] * p[i] + q[i] * q[i]);
    const __m256d ki = _mm256_set1_pd(k[i]), oi = _mm256_set1_pd(om[i]), si = _mm256_set1_pd(so[i]);
    const __m256d pi = _mm256_set1_pd(p[i]), qi = _mm256_set1_pd(q[i]);
    __m256d aw = _mm256_setzero_pd(), ad = _mm256_setzero_pd();
    std::size_t j = i + 1;
    for (; j + 4 <= n; j += 4) {
      const __m256d kj = _mm256_loadu_pd(k + j), oj = _mm256_loadu_pd(om + j), sj = _mm256_loadu_pd(so + j);
      const __m256d kp = _mm256_add_pd(ki, kj), km = _mm256_sub_pd(ki, kj);
      const __m256d ss = _mm256_add_pd(si, sj), oo = _mm256_add_pd(oi, oj);
      const __m256d den = _mm256_mul_pd(_mm256_mul_pd(_mm256_mul_pd(ss, ss), _mm256_mul_pd(oo, oo)),
                                        _mm256_mul_pd(si, sj));
      const __m256d kern = _mm256_div_pd(_mm256_mul_pd(kp, kp), den);
      const __m256d gg = _mm256_fmadd_pd(pi, _mm256_loadu_pd(p + j), _mm256_mul_pd(qi, _mm256_loadu_pd(q + j)));
      const __m256d g = _mm256_mul_pd(kern, gg);
      aw = _mm256_add_pd(aw, g);
      ad = _mm256_fmadd_pd(_mm256_mul_pd(km, km), g, ad);
    }
    double sw = hsum(aw), sd = hsum(ad);
    for (; j < n; ++j) {
      const double kp = k[i] + k[j], km = k[i] - k[j];
      const double ss = so[i] + so[j], oo = om[i] + om[j];
      const double kern = kp * kp / (ss * ss * oo * oo * so[i] * so[j]);
      const double g = kern * (p[i] * p[j] + q[i] * q[j]);
      sw += g;
      sd += km * km * g;
    }
    offw += sw;
    offd += sd;
  }
  return {diag + 2.0 * offw, -2.0 * offd};
}

void weighted_sums_avx2(const double* zr, const double* zi, const double* const* w, std::size_t m,
                        std::size_t n, double* out_re, double* out_im) {
  for (std::size_t r = 0; r < m; ++r) {
    const double* wr = w[r];
    __m256d sr = _mm256_setzero_pd(), si = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
      const __m256d wv = _mm256_loadu_pd(wr + i);
      sr = _mm256_fmadd_pd(wv, _mm256_loadu_pd(zr + i), sr);
      si = _mm256_fmadd_pd(wv, _mm256_loadu_pd(zi + i), si);
    }
    double a = hsum(sr), b = hsum(si);
    for (; i < n; ++i) {
      a += wr[i] * zr[i];
      b += wr[i] * zi[i];
    }
    out_re[r] = a;
    out_im[r] = b;
  }
}

}  // namespace bohm::simd::detail
