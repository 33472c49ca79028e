#include <atomic>

#include "bohm/errors.hpp"
#include "bohm/simd.hpp"

namespace bohm::simd {

namespace {

Backend detect() {
  return avx2_supported() ? Backend::avx2 : Backend::scalar;
}

std::atomic<Backend>& current() {
  static std::atomic<Backend> b{detect()};
  return b;
}

}  // namespace

bool avx2_supported() {
#if defined(__x86_64__) || defined(__i386__)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend backend() { return current().load(std::memory_order_relaxed); }

void set_backend(Backend b) {
  if (b == Backend::avx2 && !avx2_supported()) throw DomainError("simd: avx2/fma not available on this CPU");
  current().store(b, std::memory_order_relaxed);
}

const char* backend_name(Backend b) { return b == Backend::avx2 ? "avx2" : "scalar"; }

double toeplitz_bilinear2(const double* t, const double* a, const double* b, const double* c,
                          const double* d, std::size_t n) {
  if (backend() == Backend::avx2) return detail::toeplitz_bilinear2_avx2(t, a, b, c, d, n);
  return detail::toeplitz_bilinear2_scalar(t, a, b, c, d, n);
}

WSums w_quadratic_forms(const double* k, const double* om, const double* so, const double* p,
                        const double* q, std::size_t n) {
  if (backend() == Backend::avx2) return detail::w_quadratic_forms_avx2(k, om, so, p, q, n);
  return detail::w_quadratic_forms_scalar(k, om, so, p, q, n);
}

void weighted_sums(const double* zr, const double* zi, const double* const* w, std::size_t m,
                   std::size_t n, double* out_re, double* out_im) {
  if (backend() == Backend::avx2) return detail::weighted_sums_avx2(zr, zi, w, m, n, out_re, out_im);
  detail::weighted_sums_scalar(zr, zi, w, m, n, out_re, out_im);
}

}  // namespace bohm::simd
