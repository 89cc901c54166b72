#include "tiltlab/asymhd.hpp"

#include <cmath>

#include "tiltlab/errors.hpp"
#include "tiltlab/rng.hpp"
#include "tiltlab/tilt.hpp"

namespace tiltlab {

namespace {

void check_rect(const Rect& r, std::size_t d) {
  if (r.lo.size() != d || r.hi.size() != d) throw InvalidArgument("rect dimension mismatch");
  for (std::size_t j = 0; j < d; ++j) {
    if (std::isnan(r.lo[j]) || std::isnan(r.hi[j])) throw InvalidArgument("rect bounds must not be NaN");
    if (r.lo[j] < 0.0) throw InvalidArgument("rect must lie in the positive orthant");
  }
}

bool rect_empty(const Rect& r) {
  for (std::size_t j = 0; j < r.lo.size(); ++j)
    if (!(r.hi[j] > r.lo[j])) return true;
  return false;
}

}  // namespace

std::vector<double> maximizer(const DistributionModel& model, std::span<const double> theta) {
  if (theta.size() != model.dim()) throw InvalidArgument("maximizer: dimension mismatch");
  const auto up = model.upper_corner();
  const auto lo = model.lower_corner();
  bool nonzero = false;
  std::vector<double> x(theta.size());
  for (std::size_t j = 0; j < theta.size(); ++j) {
    if (!std::isfinite(theta[j])) throw InvalidArgument("maximizer: theta must be finite");
    if (theta[j] == 0.0) {
      x[j] = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    nonzero = true;
    const double v = theta[j] > 0.0 ? up[j] : lo[j];
    if (!std::isfinite(v)) throw InvalidArgument("maximizer: support is unbounded in the direction of theta");
    x[j] = v;
  }
  if (!nonzero) throw InvalidArgument("maximizer: theta must be nonzero");
  for (double v : x)
    if (std::isnan(v))
      throw AssumptionViolated("maximizer: theta has a zero component on a box support; the maximizer is not unique");
  return x;
}

MvrvModel::MvrvModel(DistributionModel base, std::vector<double> theta)
    : base_(std::move(base)), theta_(std::move(theta)) {
  x_theta_ = maximizer(base_, theta_);
  const auto parts = base_.marginals();
  for (std::size_t j = 0; j < parts.size(); ++j) {
    if (theta_[j] < 0.0)
      throw AssumptionViolated("MvrvModel: maximizer on a lower face is not supported (theta components must be > 0)");
    const auto w = parts[j].weibull();
    if (!w) throw AssumptionViolated("MvrvModel: coordinate " + std::to_string(j) + " (" + parts[j].name() +
                                     ") is not regularly varying at its supremum");
    exponents_.push_back(1.0);
    rho_.push_back(w->alpha);
    kappa_.push_back(w->constant);
    scale_.push_back(1.0);
  }
}

std::vector<double> MvrvModel::point() const {
  std::vector<double> p(x_theta_.size());
  for (std::size_t j = 0; j < p.size(); ++j) p[j] = std::pow(x_theta_[j], exponents_[j]);
  return p;
}

double MvrvModel::alpha() const noexcept {
  double a = 0.0;
  for (double r : rho_) a += r;
  return a;
}

double MvrvModel::U(double t) const { return std::pow(t, alpha()); }

double MvrvModel::coord_tail(std::size_t j, double u) const {
  if (u <= 0.0) return 0.0;
  const ScalarModel m = base_.marginals()[j];
  const double x = x_theta_[j];
  const double a = exponents_[j];
  if (a == 1.0) return u >= x - m.lower() ? 1.0 : m.upper_tail(u);
  const double gx = std::pow(x, a);
  if (u >= gx) return 1.0;
  // g(X) > g(x) - u  <=>  X > (g(x) - u)^{1/a}.
  const double v = x - std::pow(gx - u, 1.0 / a);
  return m.upper_tail(v);
}

double nu_rect(const MvrvModel& mvrv, const Rect& rect) {
  check_rect(rect, mvrv.dim());
  if (rect_empty(rect)) return 0.0;
  double mass = 1.0;
  for (std::size_t j = 0; j < mvrv.dim(); ++j) {
    const double r = mvrv.rho()[j];
    const double s = mvrv.scale()[j];
    const double hi = std::isinf(rect.hi[j]) ? std::numeric_limits<double>::infinity() : std::pow(rect.hi[j] / s, r);
    mass *= mvrv.kappa()[j] * (hi - std::pow(rect.lo[j] / s, r));
  }
  return mass;
}

double mvrv_ratio(const MvrvModel& mvrv, double t, const Rect& rect) {
  if (!(t > 0.0)) throw InvalidArgument("mvrv_ratio: t must be positive");
  check_rect(rect, mvrv.dim());
  if (rect_empty(rect)) return 0.0;
  double p = 1.0;
  for (std::size_t j = 0; j < mvrv.dim(); ++j)
    p *= mvrv.coord_tail(j, rect.hi[j] * t) - mvrv.coord_tail(j, rect.lo[j] * t);
  return p / mvrv.U(t);
}

MonteCarloEstimate mvrv_ratio_mc(const MvrvModel& mvrv, double t, const Rect& rect, std::size_t draws,
                                 std::uint64_t seed) {
  if (!(t > 0.0)) throw InvalidArgument("mvrv_ratio_mc: t must be positive");
  if (draws < 1 || draws > 10'000'000) throw InvalidArgument("mvrv_ratio_mc: draws must lie in [1, 1e7]");
  check_rect(rect, mvrv.dim());
  const std::size_t d = mvrv.dim();
  const auto parts = mvrv.base().marginals();
  const auto pt = mvrv.point();
  constexpr std::size_t kChunk = 100'000;
  const std::size_t chunks = (draws + kChunk - 1) / kChunk;
  std::vector<std::size_t> hits(chunks, 0);
  parallel_for(chunks, [&](std::size_t c) {
    Rng rng = make_rng(seed, c);
    const std::size_t count = std::min(kChunk, draws - c * kChunk);
    std::size_t h = 0;
    for (std::size_t i = 0; i < count; ++i) {
      bool in = true;
      for (std::size_t j = 0; j < d; ++j) {
        const double x = parts[j].sample(rng);
        const double y = (pt[j] - std::pow(x, mvrv.exponents()[j])) / t;
        in = in && y > rect.lo[j] && y <= rect.hi[j];
      }
      h += in ? 1 : 0;
    }
    hits[c] = h;
  });
  std::size_t total = 0;
  for (auto h : hits) total += h;
  const double p = static_cast<double>(total) / static_cast<double>(draws);
  const double u = mvrv.U(t);
  return {p / u, std::sqrt(p * (1.0 - p) / static_cast<double>(draws)) / u, draws};
}

double nu_laplace(const MvrvModel& mvrv, std::span<const double> theta) {
  if (theta.size() != mvrv.dim()) throw InvalidArgument("nu_laplace: dimension mismatch");
  double v = 1.0;
  for (std::size_t j = 0; j < theta.size(); ++j) {
    if (!(theta[j] > 0.0))
      throw AssumptionViolated("integral of e^{-theta^T y} against nu diverges unless every theta_j > 0");
    const double r = mvrv.rho()[j];
    v *= mvrv.kappa()[j] * std::pow(mvrv.scale()[j], -r) * std::tgamma(r + 1.0) * std::pow(theta[j], -r);
  }
  return v;
}

LimitTarget z_limit_target(const MvrvModel& mvrv, std::span<const double> theta) {
  (void)nu_laplace(mvrv, theta);  // integrability check
  return LimitTarget::product_gamma(mvrv.rho(), std::vector<double>(theta.begin(), theta.end()));
}

double m_theta_asymptote_hd(const MvrvModel& mvrv, double c) {
  if (!(c > 0.0)) throw InvalidArgument("m_theta_asymptote_hd: c must be positive");
  std::vector<double> ct = mvrv.theta();
  for (double& v : ct) v *= c;
  bool ident = true;
  for (double a : mvrv.exponents()) ident = ident && a == 1.0;
  const TiltSpec tilt = ident ? TiltSpec::identity(ct) : TiltSpec::power(ct, mvrv.exponents());
  return mvrv.U(1.0 / c) * m_theta_analytic(mvrv.base(), tilt);
}

double m_theta_limit_hd(const MvrvModel& mvrv) {
  return std::pow(2.0, -mvrv.alpha()) / nu_laplace(mvrv, mvrv.theta());
}

MvrvModel g_pushforward(const MvrvModel& mvrv, const std::vector<double>& exponents) {
  if (exponents.size() != mvrv.dim()) throw InvalidArgument("g_pushforward: one exponent per coordinate required");
  MvrvModel out = mvrv;
  for (std::size_t j = 0; j < exponents.size(); ++j) {
    const double a = exponents[j];
    if (!(a > 0.0 && std::isfinite(a))) throw InvalidArgument("g_pushforward: exponents must be positive");
    if (a == 1.0) continue;
    const double x = mvrv.x_theta()[j];
    if (x == 0.0)
      throw AssumptionViolated("g_pushforward: maximizer coordinate " + std::to_string(j) +
                               " is zero, so x^a is not locally linear there");
    if (x < 0.0) throw InvalidArgument("g_pushforward: power map needs a nonnegative maximizer");
    out.exponents_[j] = mvrv.exponents_[j] * a;
    // Local slope of x -> x^{a_total} at the maximizer.
    out.scale_[j] = out.exponents_[j] * std::pow(x, out.exponents_[j] - 1.0);
  }
  return out;
}

}  // namespace tiltlab
