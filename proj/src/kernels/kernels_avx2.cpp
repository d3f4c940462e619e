// Compiled with -mavx2 -mfma; only reached when CPUID reports both.

#include <immintrin.h>

#include <cmath>

#include "mscale/kernels/kernels.hpp"

namespace mscale::kernels::avx2 {

void weighted_central_difference(const double* plus, const double* minus, const double* center,
                                 const double* log_weight, double* out, std::size_t n, double inv_2h) {
  const __m256d scale = _mm256_set1_pd(inv_2h);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d diff = _mm256_sub_pd(_mm256_loadu_pd(plus + i), _mm256_loadu_pd(minus + i));
    __m256d weight_term = _mm256_mul_pd(_mm256_loadu_pd(center + i), _mm256_loadu_pd(log_weight + i));
    _mm256_storeu_pd(out + i, _mm256_fmadd_pd(diff, scale, weight_term));
  }
  for (; i < n; ++i) out[i] = std::fma(plus[i] - minus[i], inv_2h, center[i] * log_weight[i]);
}

double max_abs(const double* x, std::size_t n) {
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  __m256d acc = _mm256_setzero_pd();
  __m256d nan_seen = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_andnot_pd(sign_mask, _mm256_loadu_pd(x + i));
    nan_seen = _mm256_or_pd(nan_seen, _mm256_cmp_pd(v, v, _CMP_UNORD_Q));
    acc = _mm256_max_pd(acc, v);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double m = std::fmax(std::fmax(lanes[0], lanes[1]), std::fmax(lanes[2], lanes[3]));
  if (_mm256_movemask_pd(nan_seen) != 0) m = std::nan("");
  for (; i < n; ++i) {
    double a = std::fabs(x[i]);
    if (a > m || std::isnan(a)) m = a;
  }
  return m;
}

}  // namespace mscale::kernels::avx2
