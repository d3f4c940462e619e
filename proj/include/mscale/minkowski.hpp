#pragma once

#include <span>
#include <vector>

namespace mscale {

/// η = diag(-1, +1, ..., +1)
constexpr double eta(int mu) { return mu == 0 ? -1.0 : 1.0; }

template <class T>
T minkowski_dot(std::span<const T> a, std::span<const T> b) {
  T r(0.0);
  for (std::size_t mu = 0; mu < a.size(); ++mu) r = r + T(eta(static_cast<int>(mu))) * a[mu] * b[mu];
  return r;
}

inline double minkowski_dot(const std::vector<double>& a, const std::vector<double>& b) {
  return minkowski_dot<double>(std::span<const double>(a), std::span<const double>(b));
}

/// Small dense row-major matrix; D×D tensors and transformation matrices.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows * cols), fill) {}

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double& operator()(int r, int c) { return data_[static_cast<std::size_t>(r * cols_ + c)]; }
  double operator()(int r, int c) const { return data_[static_cast<std::size_t>(r * cols_ + c)]; }
  std::span<const double> data() const { return data_; }

  Matrix operator*(const Matrix& o) const {
    Matrix r(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
      for (int k = 0; k < cols_; ++k)
        for (int j = 0; j < o.cols_; ++j) r(i, j) += (*this)(i, k) * o(k, j);
    return r;
  }

  std::vector<double> apply(std::span<const double> v) const {
    std::vector<double> out(static_cast<std::size_t>(rows_), 0.0);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * v[j];
    return out;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  double max_abs_difference(const Matrix& o) const {
    double m = 0.0;
    for (std::size_t i = 0; i < data_.size(); ++i) {
      double d = data_[i] - o.data_[i];
      if (d < 0) d = -d;
      if (d > m) m = d;
    }
    return m;
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

}  // namespace mscale
