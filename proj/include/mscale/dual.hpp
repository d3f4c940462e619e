#pragma once

#include <cmath>
#include <type_traits>

namespace mscale {

/// Forward-mode dual number a + b·ε with ε² = 0.
///
/// Nesting (Dual<Dual<double>>) gives exact second derivatives, which the
/// field-strength derivatives and the manufactured Maxwell sources need.
template <class T>
struct Dual {
  T val{};
  T der{};

  constexpr Dual() = default;
  constexpr Dual(double v) : val(v), der(0.0) {}
  constexpr Dual(const T& v)
    requires(!std::is_same_v<T, double>)
      : val(v), der(0.0) {}
  constexpr Dual(const T& v, const T& d) : val(v), der(d) {}

  friend constexpr Dual operator+(const Dual& a, const Dual& b) { return {a.val + b.val, a.der + b.der}; }
  friend constexpr Dual operator-(const Dual& a, const Dual& b) { return {a.val - b.val, a.der - b.der}; }
  friend constexpr Dual operator*(const Dual& a, const Dual& b) {
    return {a.val * b.val, a.der * b.val + a.val * b.der};
  }
  friend constexpr Dual operator/(const Dual& a, const Dual& b) {
    T q = a.val / b.val;
    return {q, (a.der - q * b.der) / b.val};
  }
  friend constexpr Dual operator-(const Dual& a) { return {-a.val, -a.der}; }

  Dual& operator+=(const Dual& o) { return *this = *this + o; }
  Dual& operator-=(const Dual& o) { return *this = *this - o; }
  Dual& operator*=(const Dual& o) { return *this = *this * o; }
  Dual& operator/=(const Dual& o) { return *this = *this / o; }
};

using Dual1 = Dual<double>;
using Dual2 = Dual<Dual<double>>;

inline double value_of(double x) { return x; }
template <class T>
double value_of(const Dual<T>& d) {
  return value_of(d.val);
}

/// Seed a dual variable: value v, unit tangent.
template <class T>
constexpr Dual<T> variable(const T& v) {
  return Dual<T>(v, T(1.0));
}

template <class T>
Dual<T> sqrt(const Dual<T>& a) {
  using std::sqrt;
  T r = sqrt(a.val);
  return {r, a.der / (T(2.0) * r)};
}

template <class T>
Dual<T> exp(const Dual<T>& a) {
  using std::exp;
  T e = exp(a.val);
  return {e, e * a.der};
}

template <class T>
Dual<T> log(const Dual<T>& a) {
  using std::log;
  return {log(a.val), a.der / a.val};
}

template <class T>
Dual<T> sin(const Dual<T>& a) {
  using std::cos;
  using std::sin;
  return {sin(a.val), cos(a.val) * a.der};
}

template <class T>
Dual<T> cos(const Dual<T>& a) {
  using std::cos;
  using std::sin;
  return {cos(a.val), -sin(a.val) * a.der};
}

template <class T>
Dual<T> sinh(const Dual<T>& a) {
  using std::cosh;
  using std::sinh;
  return {sinh(a.val), cosh(a.val) * a.der};
}

template <class T>
Dual<T> cosh(const Dual<T>& a) {
  using std::cosh;
  using std::sinh;
  return {cosh(a.val), sinh(a.val) * a.der};
}

template <class T>
Dual<T> tanh(const Dual<T>& a) {
  using std::tanh;
  T th = tanh(a.val);
  return {th, (T(1.0) - th * th) * a.der};
}

template <class T>
Dual<T> abs(const Dual<T>& a) {
  return value_of(a.val) < 0.0 ? -a : a;
}

template <class T>
Dual<T> pow(const Dual<T>& a, double p) {
  using std::pow;
  if (p == 0.0) return Dual<T>(T(1.0));
  if (p == 1.0) return a;
  return {pow(a.val, p), T(p) * pow(a.val, p - 1.0) * a.der};
}

template <class T>
Dual<T> pow(const Dual<T>& a, const Dual<T>& b) {
  return exp(b * log(a));
}

}  // namespace mscale
