#include "steinmm/kernels.hpp"

#if defined(__aarch64__)
#include <arm_neon.h>
#endif

namespace steinmm::kernels::neon {

#if defined(__aarch64__)

bool supported() { return true; }

// Two float64x2 accumulators give four lanes, like the AVX2 kernels.
double sum(const double* x, std::size_t n) {
  float64x2_t a = vdupq_n_f64(0.0);
  float64x2_t b = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    a = vaddq_f64(a, vld1q_f64(x + i));
    b = vaddq_f64(b, vld1q_f64(x + i + 2));
  }
  double total = vaddvq_f64(vaddq_f64(a, b));
  for (; i < n; ++i) total += x[i];
  return total;
}

double dot(const double* x, const double* y, std::size_t n) {
  float64x2_t a = vdupq_n_f64(0.0);
  float64x2_t b = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    a = vfmaq_f64(a, vld1q_f64(x + i), vld1q_f64(y + i));
    b = vfmaq_f64(b, vld1q_f64(x + i + 2), vld1q_f64(y + i + 2));
  }
  double total = vaddvq_f64(vaddq_f64(a, b));
  for (; i < n; ++i) total += x[i] * y[i];
  return total;
}

double dot3(const double* x, const double* y, const double* z, std::size_t n) {
  float64x2_t a = vdupq_n_f64(0.0);
  float64x2_t b = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    a = vfmaq_f64(a, vmulq_f64(vld1q_f64(x + i), vld1q_f64(y + i)), vld1q_f64(z + i));
    b = vfmaq_f64(b, vmulq_f64(vld1q_f64(x + i + 2), vld1q_f64(y + i + 2)), vld1q_f64(z + i + 2));
  }
  double total = vaddvq_f64(vaddq_f64(a, b));
  for (; i < n; ++i) total += x[i] * y[i] * z[i];
  return total;
}

SumSq sum_and_squares(const double* x, std::size_t n) {
  float64x2_t s = vdupq_n_f64(0.0);
  float64x2_t q = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t v = vld1q_f64(x + i);
    s = vaddq_f64(s, v);
    q = vfmaq_f64(q, v, v);
  }
  SumSq out{vaddvq_f64(s), vaddvq_f64(q)};
  for (; i < n; ++i) {
    out.sum += x[i];
    out.sum_sq += x[i] * x[i];
  }
  return out;
}

#else

bool supported() { return false; }
double sum(const double* x, std::size_t n) { return scalar::sum(x, n); }
double dot(const double* x, const double* y, std::size_t n) { return scalar::dot(x, y, n); }
double dot3(const double* x, const double* y, const double* z, std::size_t n) {
  return scalar::dot3(x, y, z, n);
}
SumSq sum_and_squares(const double* x, std::size_t n) { return scalar::sum_and_squares(x, n); }

#endif

}  // namespace steinmm::kernels::neon
