#include "mscale/action_weights.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "mscale/errors.hpp"

namespace mscale {

ActionProfile::ActionProfile(Expr expr) : expr_(std::move(expr)) {
  trivial_ = expr_.is_constant() && expr_.eval_at(Var::s, 0.0) == 1.0;
  for (Var v : {Var::t, Var::x1, Var::x2, Var::x3})
    if (expr_.depends_on(v))
      throw std::invalid_argument("action weight '" + expr_.source() + "' may depend on s only");
}

ActionProfile ActionProfile::constant(double c) { return ActionProfile(Expr::constant(c)); }

ActionProfile ActionProfile::from_expression(const std::string& text) { return ActionProfile(Expr::parse(text)); }

ActionProfile ActionProfile::shifted_power(double a, double b, double p) {
  Expr s = Expr::variable(Var::s);
  return ActionProfile(pow(Expr::constant(a) + Expr::constant(b) * s, Expr::constant(p)));
}

ActionProfile ActionProfile::exponential(double rate) {
  return ActionProfile(Expr::call(Expr::Fn::exp, Expr::constant(rate) * Expr::variable(Var::s)));
}

ActionProfile ActionProfile::binomial(double alpha, double length_scale, double offset) {
  Expr s = Expr::variable(Var::s);
  Expr ratio = (s + Expr::constant(offset)) / Expr::constant(length_scale);
  return ActionProfile(Expr::constant(1.0) + pow(Expr::call(Expr::Fn::abs, ratio), Expr::constant(alpha - 1.0)));
}

double ActionProfile::at(double s) const {
  double w = value(s);
  if (!(w > 0.0) || !std::isfinite(w)) {
    std::ostringstream msg;
    msg << "action weight '" << expr_.source() << "' is not positive at s = " << s << " (value " << w << ")";
    throw SingularityError(msg.str());
  }
  return w;
}

double ActionProfile::log_derivative(double s) const {
  if (trivial_) return 0.0;
  Dual1 w = value(variable(s));
  if (!(w.val > 0.0) || !std::isfinite(w.val) || !std::isfinite(w.der)) {
    std::ostringstream msg;
    msg << "action weight '" << expr_.source() << "' is singular at s = " << s;
    throw SingularityError(msg.str());
  }
  return w.der / w.val;
}

ActionWeights ActionWeights::isotropic(int dimension, ActionProfile omega) {
  if (dimension < 2) throw std::invalid_argument("action weights: dimension must be at least 2");
  ActionWeights w;
  w.omegas_.assign(static_cast<std::size_t>(dimension), omega);
  w.isotropic_ = true;
  return w;
}

ActionWeights ActionWeights::anisotropic(std::vector<ActionProfile> omegas) {
  if (omegas.size() < 2) throw std::invalid_argument("action weights: dimension must be at least 2");
  ActionWeights w;
  w.omegas_ = std::move(omegas);
  w.isotropic_ = false;
  return w;
}

ActionWeights ActionWeights::with_tilde(ActionProfile tilde, bool explore) const {
  if (!tilde.is_trivial() && !explore)
    throw std::invalid_argument(
        "action weights: a nontrivial overall weight requires exploration mode (consistency fixes it to 1)");
  ActionWeights w = *this;
  w.tilde_ = std::move(tilde);
  w.explore_ = explore;
  return w;
}

bool ActionWeights::is_trivial() const {
  for (const auto& o : omegas_)
    if (!o.is_trivial()) return false;
  return true;
}

}  // namespace mscale
