#include "tiltlab/asym1d.hpp"

#include <cmath>
#include <limits>
#include <functional>

#include "tiltlab/errors.hpp"
#include "tiltlab/numerics.hpp"
#include "tiltlab/tilt.hpp"

namespace tiltlab {

namespace {

// The bounded Weibull-regime 1-d law behind `model`, after checking that
// theta clears the support-scale threshold 1/(M - inf support).
const ScalarModel& weibull_scalar(const DistributionModel& model, double theta, WeibullTail& tail) {
  const ScalarModel& m = model.scalar();
  if (!m.bounded_above()) throw InvalidArgument(m.name() + " is unbounded above");
  const auto w = m.weibull();
  if (!w) throw AssumptionViolated(m.name() + " does not lie in the Weibull regime");
  tail = *w;
  const double width = m.upper() - m.lower();
  if (!(std::isfinite(theta) && theta > 0.0 && theta * width > 1.0))
    throw InvalidArgument("theta must exceed 1/(M - inf support)");
  return m;
}

AsymptoteCheck run_check(const std::vector<double>& thetas, double limit, const std::function<double(double)>& f) {
  AsymptoteCheck out;
  out.theta_grid = thetas;
  out.limit_value = limit;
  for (double t : thetas) out.ratio_values.push_back(f(t));
  out.converged = true;
  // Errors already at rounding level count as converged.
  const double floor = 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(limit));
  for (std::size_t i = 1; i < thetas.size(); ++i) {
    const double e = std::abs(out.ratio_values[i] - limit), prev = std::abs(out.ratio_values[i - 1] - limit);
    if (!(e < prev || e <= floor)) out.converged = false;
  }
  return out;
}

}  // namespace

std::vector<AsymptoteRow> AsymptoteCheck::rows() const {
  std::vector<AsymptoteRow> out;
  for (std::size_t i = 0; i < theta_grid.size(); ++i)
    out.push_back({theta_grid[i], ratio_values[i], limit_value, std::abs(ratio_values[i] - limit_value)});
  return out;
}

double karamata_ratio(const DistributionModel& model, double theta) {
  WeibullTail w;
  const ScalarModel& m = weibull_scalar(model, theta, w);
  const double top = m.upper();
  // E[e^{theta (X - M)}]; exact for the uniform law.
  double scaled_mgf;
  if (std::holds_alternative<family::Uniform01>(m.variant()))
    scaled_mgf = -std::expm1(-theta) / theta;
  else
    scaled_mgf = std::exp(log_expect_exp(m, [theta, top](double x) { return theta * (x - top); }));
  return scaled_mgf / m.upper_tail(1.0 / theta);
}

double m_theta_asymptote_1d(const DistributionModel& model, double theta) {
  WeibullTail w;
  const ScalarModel& m = weibull_scalar(model, theta, w);
  return m.upper_tail(1.0 / theta) * m_theta_analytic(model, TiltSpec::scalar(theta));
}

double tail_fraction(const DistributionModel& model, double theta, double C) {
  if (!(C > 0.0)) throw InvalidArgument("tail_fraction: C must be positive");
  WeibullTail w;
  const ScalarModel& m = weibull_scalar(model, theta, w);
  const double top = m.upper();
  const auto h = [theta, top](double x) { return theta * (x - top); };
  const double lo = top - C / theta;
  if (lo <= m.lower()) return 1.0;
  return std::min(1.0, std::exp(log_expect_exp(m, h, lo) - log_expect_exp(m, h)));
}

double karamata_limit(double alpha) { return std::tgamma(1.0 + alpha); }

double m_theta_limit_1d(double alpha) { return std::pow(2.0, -alpha) / std::tgamma(1.0 + alpha); }

double tail_fraction_limit(double alpha, double C) { return numerics::gamma_p(alpha, C); }

LimitTarget gamma_limit_target(double alpha) {
  if (!(alpha > 0.0)) throw InvalidArgument("gamma_limit_target: alpha must be positive");
  return LimitTarget::gamma(alpha, 1.0);
}

AsymptoteCheck check_karamata(const DistributionModel& model, const std::vector<double>& thetas) {
  const auto w = model.scalar().weibull();
  if (!w) throw AssumptionViolated(model.name() + " does not lie in the Weibull regime");
  return run_check(thetas, karamata_limit(w->alpha), [&](double t) { return karamata_ratio(model, t); });
}

AsymptoteCheck check_m_theta_1d(const DistributionModel& model, const std::vector<double>& thetas) {
  const auto w = model.scalar().weibull();
  if (!w) throw AssumptionViolated(model.name() + " does not lie in the Weibull regime");
  return run_check(thetas, m_theta_limit_1d(w->alpha), [&](double t) { return m_theta_asymptote_1d(model, t); });
}

AsymptoteCheck check_tail_fraction(const DistributionModel& model, const std::vector<double>& thetas, double C) {
  const auto w = model.scalar().weibull();
  if (!w) throw AssumptionViolated(model.name() + " does not lie in the Weibull regime");
  return run_check(thetas, tail_fraction_limit(w->alpha, C), [&](double t) { return tail_fraction(model, t, C); });
}

}  // namespace tiltlab
