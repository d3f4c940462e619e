#include <cmath>

#include "mscale/kernels/kernels.hpp"

namespace mscale::kernels::scalar {

void weighted_central_difference(const double* plus, const double* minus, const double* center,
                                 const double* log_weight, double* out, std::size_t n, double inv_2h) {
  for (std::size_t i = 0; i < n; ++i) out[i] = (plus[i] - minus[i]) * inv_2h + center[i] * log_weight[i];
}

double max_abs(const double* x, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double a = std::fabs(x[i]);
    if (a > m || std::isnan(a)) m = a;
  }
  return m;
}

}  // namespace mscale::kernels::scalar
