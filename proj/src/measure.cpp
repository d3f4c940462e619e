#include "mscale/measure.hpp"

#include <numbers>
#include <sstream>
#include <stdexcept>

namespace mscale {

namespace {

void check_term(const ScaleTerm& t) {
  if (!(t.alpha > 0.0 && t.alpha <= 1.0))
    throw std::invalid_argument("weight profile: alpha must lie in (0, 1]");
  if (!(t.length_scale > 0.0)) throw std::invalid_argument("weight profile: length scale must be positive");
}

}  // namespace

WeightProfile WeightProfile::constant() { return WeightProfile{}; }

WeightProfile WeightProfile::power_law(double alpha, double length_scale, double epsilon) {
  WeightProfile p;
  p.kind_ = ProfileKind::power_law;
  p.terms_ = {ScaleTerm{alpha, length_scale}};
  p.epsilon_ = epsilon;
  check_term(p.terms_[0]);
  if (epsilon < 0.0) throw std::invalid_argument("weight profile: epsilon must be non-negative");
  return p;
}

WeightProfile WeightProfile::binomial(double alpha, double length_scale, double epsilon) {
  return multiscale({ScaleTerm{alpha, length_scale}}, epsilon);
}

WeightProfile WeightProfile::multiscale(std::vector<ScaleTerm> terms, double epsilon) {
  if (terms.empty()) throw std::invalid_argument("weight profile: multiscale sum needs at least one term");
  for (const auto& t : terms) check_term(t);
  if (epsilon < 0.0) throw std::invalid_argument("weight profile: epsilon must be non-negative");
  WeightProfile p;
  p.kind_ = ProfileKind::binomial;
  p.terms_ = std::move(terms);
  p.epsilon_ = epsilon;
  return p;
}

bool WeightProfile::is_singular_at_origin() const {
  for (const auto& t : terms_)
    if (t.alpha < 1.0) return true;
  return false;
}

void WeightProfile::check_domain(double x) const {
  if (kind_ == ProfileKind::constant || !is_singular_at_origin()) return;
  if (x == 0.0 || std::abs(x) < epsilon_) {
    std::ostringstream msg;
    msg << "measure weight evaluated at x = " << x << " inside the excluded neighborhood |x| < "
        << epsilon_ << " of its singular point";
    throw SingularityError(msg.str());
  }
}

MeasureWeight::MeasureWeight(std::vector<WeightProfile> profiles) : profiles_(std::move(profiles)) {
  if (profiles_.size() < 2) throw std::invalid_argument("measure weight: dimension must be at least 2");
}

MeasureWeight MeasureWeight::trivial(int dimension) {
  return MeasureWeight(std::vector<WeightProfile>(static_cast<std::size_t>(dimension), WeightProfile::constant()));
}

bool MeasureWeight::is_trivial() const {
  for (const auto& p : profiles_)
    if (!p.is_trivial()) return false;
  return true;
}

double eval_weight(const MeasureWeight& mw, std::span<const double> x) { return mw.value(x); }

double eval_sqrt_weight_log_derivative(const MeasureWeight& mw, int mu, std::span<const double> x) {
  return mw.sqrt_log_derivative(mu, x);
}

double gaussian_kernel(double y, double sigma) {
  const double z = y / sigma;
  return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * std::numbers::pi));
}

SmoothedDelta::SmoothedDelta(std::vector<double> center, double sigma, MeasureWeight mw)
    : center_(std::move(center)), sigma_(sigma), mw_(std::move(mw)) {
  if (!(sigma_ > 0.0)) throw std::invalid_argument("smoothed delta: sigma must be positive");
  if (static_cast<int>(center_.size()) != mw_.dimension() - 1)
    throw std::invalid_argument("smoothed delta: center must have D-1 spatial components");
  center_weight_ = mw_.spatial_value<double>(center_);
}

double SmoothedDelta::operator()(std::span<const double> x_spatial) const {
  double g = 1.0;
  for (std::size_t i = 0; i < center_.size(); ++i) g *= gaussian_kernel(x_spatial[i] - center_[i], sigma_);
  if (g == 0.0) return 0.0;
  return g / std::sqrt(mw_.spatial_value(x_spatial) * center_weight_);
}

double delta_v_eval(const SmoothedDelta& d, std::span<const double> x_spatial) { return d(x_spatial); }

}  // namespace mscale
