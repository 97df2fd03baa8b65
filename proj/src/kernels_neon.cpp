// NEON variants (aarch64). Two float64x2 accumulators stand in for the four
// scalar lanes: acc01 carries s0/s1 and acc23 carries s2/s3, combined as
// (s0 + s1) + (s2 + s3). vmulq/vaddq keep multiply and add separate, so the
// results match the scalar reference bit for bit.

#ifdef DRIFTBENCH_HAVE_NEON

#include <arm_neon.h>

#include "kernels_variants.hpp"

namespace driftbench::kernels {
namespace {

inline double hsum(float64x2_t acc01, float64x2_t acc23) {
  return (vgetq_lane_f64(acc01, 0) + vgetq_lane_f64(acc01, 1)) +
         (vgetq_lane_f64(acc23, 0) + vgetq_lane_f64(acc23, 1));
}

double dot_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc01 = vdupq_n_f64(0.0);
  float64x2_t acc23 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc01 = vaddq_f64(acc01, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    acc23 = vaddq_f64(acc23, vmulq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2)));
  }
  double r = hsum(acc01, acc23);
  for (; i < n; ++i) r += a[i] * b[i];
  return r;
}

void axpy_neon(double alpha, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t prod = vmulq_f64(va, vld1q_f64(x + i));
    vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), prod));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

double sum_neon(const double* a, std::size_t n) {
  float64x2_t acc01 = vdupq_n_f64(0.0);
  float64x2_t acc23 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc01 = vaddq_f64(acc01, vld1q_f64(a + i));
    acc23 = vaddq_f64(acc23, vld1q_f64(a + i + 2));
  }
  double r = hsum(acc01, acc23);
  for (; i < n; ++i) r += a[i];
  return r;
}

double sum_sq_diff_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc01 = vdupq_n_f64(0.0);
  float64x2_t acc23 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const float64x2_t d01 = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
    const float64x2_t d23 = vsubq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
    acc01 = vaddq_f64(acc01, vmulq_f64(d01, d01));
    acc23 = vaddq_f64(acc23, vmulq_f64(d23, d23));
  }
  double r = hsum(acc01, acc23);
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    r += d * d;
  }
  return r;
}

}  // namespace

const Kernels& neon() {
  static const Kernels k{"neon", dot_neon, axpy_neon, sum_neon, sum_sq_diff_neon};
  return k;
}

}  // namespace driftbench::kernels

#endif  // DRIFTBENCH_HAVE_NEON
