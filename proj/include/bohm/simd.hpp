#pragma once
#include <cstddef>

namespace bohm::simd {

enum class Backend { scalar, avx2 };

bool avx2_supported();
Backend backend();
// Throws DomainError when asking for avx2 on a CPU without avx2+fma.
void set_backend(Backend b);
const char* backend_name(Backend b);

// sum_i sum_j T[j-i] * (a_i b_j + c_i d_j), with T given by a pointer to its
// centre element so that T[m] is valid for |m| < n.
double toeplitz_bilinear2(const double* t_center, const double* a, const double* b,
                          const double* c, const double* d, std::size_t n);

// With s = sqrt(omega), K_ij = (k_i+k_j)^2 / ((s_i+s_j)^2 (w_i+w_j)^2 s_i s_j)
// and g_ij = p_i p_j + q_i q_j, returns sum K g and -sum (k_i-k_j)^2 K g.
struct WSums {
  double w;
  double d2w;
};
WSums w_quadratic_forms(const double* k, const double* om, const double* so, const double* p,
                        const double* q, std::size_t n);

// out_re[m] = sum_i w[m][i] zr[i],  out_im[m] = sum_i w[m][i] zi[i].
void weighted_sums(const double* zr, const double* zi, const double* const* w, std::size_t m,
                   std::size_t n, double* out_re, double* out_im);

namespace detail {
double toeplitz_bilinear2_scalar(const double*, const double*, const double*, const double*,
                                 const double*, std::size_t);
double toeplitz_bilinear2_avx2(const double*, const double*, const double*, const double*,
                               const double*, std::size_t);
WSums w_quadratic_forms_scalar(const double*, const double*, const double*, const double*,
                               const double*, std::size_t);
WSums w_quadratic_forms_avx2(const double*, const double*, const double*, const double*,
                             const double*, std::size_t);
void weighted_sums_scalar(const double*, const double*, const double* const*, std::size_t,
                          std::size_t, double*, double*);
void weighted_sums_avx2(const double*, const double*, const double* const*, std::size_t,
                        std::size_t, double*, double*);
}  // namespace detail

}  // namespace bohm::simd
