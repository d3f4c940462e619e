#pragma once

#include <array>
#include <cmath>
#include <memory>
#include <string>
#include <string_view>

#include "mscale/dual.hpp"
#include "mscale/errors.hpp"

namespace mscale {

/// Variable slots understood by closed-form expressions.
enum class Var : int { t = 0, x1 = 1, x2 = 2, x3 = 3, s = 4 };

inline constexpr int kVarCount = 5;

template <class T>
using VarArray = std::array<T, kVarCount>;

/// Immutable closed-form expression over t, x1..x3 and s.
///
/// Grammar: + - * / ^ (right associative), unary minus, parentheses, numbers,
/// the variables above (x0 is an alias of t) and the functions
/// abs sqrt exp log sin cos cosh sinh tanh. Evaluation is generic over the
/// scalar type so the same tree yields values and exact derivatives.
class Expr {
 public:
  enum class Kind { number, variable, negate, call, add, sub, mul, div, pow };
  enum class Fn { abs, sqrt, exp, log, sin, cos, cosh, sinh, tanh };

  struct Node {
    Kind kind;
    double number = 0.0;
    int var = 0;
    Fn fn = Fn::abs;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
  };

  Expr() : Expr(constant(0.0)) {}

  static Expr parse(std::string_view text);
  static Expr constant(double value);
  static Expr variable(Var v);

  template <class T>
  T eval(const VarArray<T>& vars) const {
    return eval_node<T>(*root_, vars);
  }

  /// Convenience for single-variable use (profiles of s or of one coordinate).
  template <class T>
  T eval_at(Var v, const T& value) const {
    VarArray<T> vars;
    vars.fill(T(0.0));
    vars[static_cast<int>(v)] = value;
    return eval(vars);
  }

  bool depends_on(Var v) const;
  bool is_constant() const;
  const std::string& source() const { return source_; }

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr pow(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);
  static Expr call(Fn fn, const Expr& arg);

 private:
  Expr(std::shared_ptr<const Node> root, std::string source)
      : root_(std::move(root)), source_(std::move(source)) {}

  template <class T>
  static T eval_node(const Node& n, const VarArray<T>& vars);

  std::shared_ptr<const Node> root_;
  std::string source_;
};

template <class T>
T Expr::eval_node(const Node& n, const VarArray<T>& vars) {
  using std::abs;
  using std::cos;
  using std::cosh;
  using std::exp;
  using std::log;
  using std::pow;
  using std::sin;
  using std::sinh;
  using std::sqrt;
  using std::tanh;
  switch (n.kind) {
    case Kind::number:
      return T(n.number);
    case Kind::variable:
      return vars[n.var];
    case Kind::negate:
      return -eval_node<T>(*n.lhs, vars);
    case Kind::add:
      return eval_node<T>(*n.lhs, vars) + eval_node<T>(*n.rhs, vars);
    case Kind::sub:
      return eval_node<T>(*n.lhs, vars) - eval_node<T>(*n.rhs, vars);
    case Kind::mul:
      return eval_node<T>(*n.lhs, vars) * eval_node<T>(*n.rhs, vars);
    case Kind::div:
      return eval_node<T>(*n.lhs, vars) / eval_node<T>(*n.rhs, vars);
    case Kind::pow: {
      T base = eval_node<T>(*n.lhs, vars);
      if (n.rhs->kind == Kind::number) return pow(base, n.rhs->number);
      if (n.rhs->kind == Kind::negate && n.rhs->lhs->kind == Kind::number)
        return pow(base, -n.rhs->lhs->number);
      return pow(base, eval_node<T>(*n.rhs, vars));
    }
    case Kind::call: {
      T a = eval_node<T>(*n.lhs, vars);
      switch (n.fn) {
        case Fn::abs: return abs(a);
        case Fn::sqrt: return sqrt(a);
        case Fn::exp: return exp(a);
        case Fn::log: return log(a);
        case Fn::sin: return sin(a);
        case Fn::cos: return cos(a);
        case Fn::cosh: return cosh(a);
        case Fn::sinh: return sinh(a);
        case Fn::tanh: return tanh(a);
      }
    }
  }
  return T(0.0);
}

}  // namespace mscale
