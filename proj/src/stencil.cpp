#include "mscale/stencil.hpp"

#include <algorithm>
#include <stdexcept>

namespace mscale {

std::vector<double> fd_weights(double z, std::span<const double> x, int m) {
  const int n = static_cast<int>(x.size()) - 1;
  if (n < m) throw std::invalid_argument("fd_weights: not enough nodes for the derivative order");
  // c[j][k]: weight of node j for derivative k.
  std::vector<std::vector<double>> c(static_cast<std::size_t>(n + 1), std::vector<double>(static_cast<std::size_t>(m + 1), 0.0));
  double c1 = 1.0;
  double c4 = x[0] - z;
  c[0][0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      if (c3 == 0.0) throw std::invalid_argument("fd_weights: nodes must be distinct");
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(static_cast<std::size_t>(n + 1));
  for (int j = 0; j <= n; ++j) w[j] = c[j][m];
  return w;
}

double sampled_derivative(std::span<const double> s, std::span<const double> f, std::size_t k, int m,
                          std::size_t width) {
  const std::size_t n = s.size();
  if (f.size() != n) throw std::invalid_argument("sampled_derivative: length mismatch");
  width = std::min(width, n);
  if (width < static_cast<std::size_t>(m) + 1) throw std::invalid_argument("sampled_derivative: too few samples");
  std::size_t first = k >= width / 2 ? k - width / 2 : 0;
  first = std::min(first, n - width);
  const std::vector<double> w = fd_weights(s[k], s.subspan(first, width), m);
  double d = 0.0;
  for (std::size_t j = 0; j < width; ++j) d += w[j] * f[first + j];
  return d;
}

}  // namespace mscale
