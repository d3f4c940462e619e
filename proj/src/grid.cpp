#include "mscale/grid.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "mscale/errors.hpp"
#include "mscale/kernels/kernels.hpp"

namespace mscale {

GridGeometry::GridGeometry(std::vector<double> o, std::vector<double> h, std::vector<int> n)
    : origin(std::move(o)), spacing(std::move(h)), extents(std::move(n)) {
  if (origin.size() != extents.size() || spacing.size() != extents.size())
    throw std::invalid_argument("grid: origin, spacing and extents must have equal length");
  for (std::size_t k = 0; k < extents.size(); ++k) {
    if (!(spacing[k] > 0.0)) throw std::invalid_argument("grid: spacing must be strictly positive");
    if (extents[k] < 1) throw std::invalid_argument("grid: extents must be positive");
  }
}

std::size_t GridGeometry::size() const {
  std::size_t n = 1;
  for (int e : extents) n *= static_cast<std::size_t>(e);
  return n;
}

std::size_t GridGeometry::stride(int axis) const {
  std::size_t s = 1;
  for (int k = dimension() - 1; k > axis; --k) s *= static_cast<std::size_t>(extents[k]);
  return s;
}

int GridGeometry::index_along(std::size_t flat, int axis) const {
  return static_cast<int>((flat / stride(axis)) % static_cast<std::size_t>(extents[axis]));
}

std::vector<double> GridGeometry::point(std::size_t flat) const {
  std::vector<double> x(extents.size());
  for (int k = dimension() - 1; k >= 0; --k) {
    int i = static_cast<int>(flat % static_cast<std::size_t>(extents[k]));
    flat /= static_cast<std::size_t>(extents[k]);
    x[k] = coordinate(k, i);
  }
  return x;
}

bool GridGeometry::is_interior(std::size_t flat) const {
  for (int k = dimension() - 1; k >= 0; --k) {
    int i = static_cast<int>(flat % static_cast<std::size_t>(extents[k]));
    flat /= static_cast<std::size_t>(extents[k]);
    if (i == 0 || i == extents[k] - 1) return false;
  }
  return true;
}

bool GridGeometry::same_shape(const GridGeometry& o) const {
  return extents == o.extents && origin == o.origin && spacing == o.spacing;
}

namespace {

void require_same(const GridField& a, const GridField& b) {
  if (!a.geometry.same_shape(b.geometry)) throw std::invalid_argument("grid fields live on different grids");
}

}  // namespace

GridField& GridField::operator+=(const GridField& o) {
  require_same(*this, o);
  for (std::size_t i = 0; i < values.size(); ++i) values[i] += o.values[i];
  return *this;
}

GridField& GridField::operator-=(const GridField& o) {
  require_same(*this, o);
  for (std::size_t i = 0; i < values.size(); ++i) values[i] -= o.values[i];
  return *this;
}

GridField& GridField::operator*=(double a) {
  for (double& v : values) v *= a;
  return *this;
}

GridField operator+(GridField a, const GridField& b) { return a += b; }
GridField operator-(GridField a, const GridField& b) { return a -= b; }
GridField operator*(double a, GridField b) { return b *= a; }

GridField operator*(const GridField& a, const GridField& b) {
  require_same(a, b);
  GridField r(a.geometry);
  for (std::size_t i = 0; i < r.size(); ++i) r.values[i] = a.values[i] * b.values[i];
  return r;
}

GridField sample(const GridGeometry& g, const std::function<double(std::span<const double>)>& f) {
  GridField out(g);
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::vector<double> x = g.point(i);
    out.values[i] = f(x);
  }
  return out;
}

GridField grid_derivative(const GridField& f, int axis) {
  std::vector<double> zero(static_cast<std::size_t>(f.geometry.extents.at(axis)), 0.0);
  return grid_derivative_with_log_weight(f, axis, zero);
}

GridField grid_derivative_with_log_weight(const GridField& f, int axis, std::span<const double> log_weight) {
  const GridGeometry& g = f.geometry;
  const int n = g.extents.at(axis);
  if (n < 5) {
    std::ostringstream msg;
    msg << "grid derivative along axis " << axis << " needs at least 5 nodes, grid has " << n;
    throw StencilError(msg.str());
  }
  if (static_cast<int>(log_weight.size()) != n) throw std::invalid_argument("log weight must have one entry per node");

  const double h = g.spacing[axis];
  const double inv_2h = 0.5 / h;
  const std::size_t stride = g.stride(axis);
  const std::size_t outer = g.size() / (stride * static_cast<std::size_t>(n));
  const double* v = f.values.data();

  GridField out(g);
  double* o = out.values.data();

  if (stride == 1) {
    // Fastest axis: one contiguous interior run per line.
    for (std::size_t line = 0; line < outer; ++line) {
      const std::size_t base = line * static_cast<std::size_t>(n);
      const std::size_t m = static_cast<std::size_t>(n - 2);
      kernels::weighted_central_difference({v + base + 2, m}, {v + base, m}, {v + base + 1, m},
                                           log_weight.subspan(1, m), {o + base + 1, m}, inv_2h);
    }
  } else {
    std::vector<double> lw(stride);
    for (std::size_t line = 0; line < outer; ++line) {
      for (int k = 1; k < n - 1; ++k) {
        std::fill(lw.begin(), lw.end(), log_weight[static_cast<std::size_t>(k)]);
        const std::size_t base = (line * static_cast<std::size_t>(n) + static_cast<std::size_t>(k)) * stride;
        kernels::weighted_central_difference({v + base + stride, stride}, {v + base - stride, stride},
                                             {v + base, stride}, lw, {o + base, stride}, inv_2h);
      }
    }
  }

  // One-sided second-order closures.
  for (std::size_t line = 0; line < outer; ++line) {
    for (std::size_t inner = 0; inner < stride; ++inner) {
      const std::size_t first = line * static_cast<std::size_t>(n) * stride + inner;
      const std::size_t last = first + static_cast<std::size_t>(n - 1) * stride;
      o[first] = (-3.0 * v[first] + 4.0 * v[first + stride] - v[first + 2 * stride]) * inv_2h +
                 v[first] * log_weight[0];
      o[last] = (3.0 * v[last] - 4.0 * v[last - stride] + v[last - 2 * stride]) * inv_2h +
                v[last] * log_weight[static_cast<std::size_t>(n - 1)];
    }
  }
  return out;
}

double interior_max_abs(const GridField& f) {
  const GridGeometry& g = f.geometry;
  const int d = g.dimension();
  const int n_last = g.extents[d - 1];
  if (n_last < 3) return 0.0;
  double m = 0.0;
  const std::size_t lines = g.size() / static_cast<std::size_t>(n_last);
  for (std::size_t line = 0; line < lines; ++line) {
    const std::size_t base = line * static_cast<std::size_t>(n_last);
    if (!g.is_interior(base + 1)) continue;
    double lm = kernels::max_abs({f.values.data() + base + 1, static_cast<std::size_t>(n_last - 2)});
    if (lm > m || lm != lm) m = lm;
  }
  return m;
}

double max_abs(const GridField& f) { return kernels::max_abs(f.values); }

double integrate_trapezoid(const GridField& f) {
  const GridGeometry& g = f.geometry;
  double total = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    double w = 1.0;
    std::size_t flat = i;
    for (int k = g.dimension() - 1; k >= 0; --k) {
      int idx = static_cast<int>(flat % static_cast<std::size_t>(g.extents[k]));
      flat /= static_cast<std::size_t>(g.extents[k]);
      w *= g.spacing[k];
      if (g.extents[k] > 1 && (idx == 0 || idx == g.extents[k] - 1)) w *= 0.5;
    }
    total += w * f.values[i];
  }
  return total;
}

}  // namespace mscale
