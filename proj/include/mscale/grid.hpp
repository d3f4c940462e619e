#pragma once

#include <functional>
#include <span>
#include <vector>

namespace mscale {

/// Uniform rectilinear grid, row-major with the last axis fastest.
/// Axis k carries spacetime coordinate k (axis 0 = time).
struct GridGeometry {
  std::vector<double> origin;
  std::vector<double> spacing;
  std::vector<int> extents;

  GridGeometry() = default;
  GridGeometry(std::vector<double> origin, std::vector<double> spacing, std::vector<int> extents);

  int dimension() const { return static_cast<int>(extents.size()); }
  std::size_t size() const;
  std::size_t stride(int axis) const;
  int index_along(std::size_t flat, int axis) const;
  double coordinate(int axis, int i) const { return origin[axis] + i * spacing[axis]; }
  std::vector<double> point(std::size_t flat) const;
  bool is_interior(std::size_t flat) const;
  bool same_shape(const GridGeometry& o) const;
};

struct GridField {
  GridGeometry geometry;
  std::vector<double> values;

  GridField() = default;
  explicit GridField(GridGeometry g, double fill = 0.0) : geometry(std::move(g)), values(geometry.size(), fill) {}

  std::size_t size() const { return values.size(); }
  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }

  GridField& operator+=(const GridField& o);
  GridField& operator-=(const GridField& o);
  GridField& operator*=(double a);
};

GridField operator+(GridField a, const GridField& b);
GridField operator-(GridField a, const GridField& b);
GridField operator*(const GridField& a, const GridField& b);
GridField operator*(double a, GridField b);

/// Samples f(x) at every node.
GridField sample(const GridGeometry& g, const std::function<double(std::span<const double>)>& f);

/// Second-order central differences inside, one-sided second-order at the
/// boundary. Throws StencilError when the axis has fewer than 5 nodes.
GridField grid_derivative(const GridField& f, int axis);

/// ∂f + f·L along `axis`, where L(x^axis) is a per-coordinate log-derivative
/// (the weight term of the weighted derivatives).
GridField grid_derivative_with_log_weight(const GridField& f, int axis, std::span<const double> log_weight_along_axis);

/// Max-norm over interior nodes (all axes).
double interior_max_abs(const GridField& f);
/// Max-norm over all nodes.
double max_abs(const GridField& f);

/// Trapezoidal integral over all axes of the grid.
double integrate_trapezoid(const GridField& f);

}  // namespace mscale
