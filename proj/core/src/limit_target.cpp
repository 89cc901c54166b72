#include "tiltlab/limit_target.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "tiltlab/errors.hpp"
#include "tiltlab/numerics.hpp"
#include "tiltlab/rng.hpp"

namespace tiltlab {

namespace {

double gamma_cdf(double shape, double rate, double x) { return x <= 0.0 ? 0.0 : numerics::gamma_p(shape, rate * x); }

}  // namespace

LimitTarget LimitTarget::gamma(double shape, double rate) {
  if (!(shape > 0.0 && std::isfinite(shape))) throw InvalidArgument("gamma target: shape must be positive");
  if (!(rate > 0.0 && std::isfinite(rate))) throw InvalidArgument("gamma target: rate must be positive");
  LimitTarget t;
  t.kind_ = Kind::Gamma;
  t.a_ = {shape};
  t.b_ = {rate};
  return t;
}

LimitTarget LimitTarget::weibull_min(double alpha) {
  if (!(alpha > 0.0 && std::isfinite(alpha))) throw InvalidArgument("Weibull target: alpha must be positive");
  LimitTarget t;
  t.kind_ = Kind::WeibullMin;
  t.a_ = {alpha};
  return t;
}

LimitTarget LimitTarget::normal(double mean, double sd) {
  if (!(sd > 0.0) || !std::isfinite(mean)) throw InvalidArgument("normal target: need finite mean and sd > 0");
  LimitTarget t;
  t.kind_ = Kind::Normal;
  t.a_ = {mean};
  t.b_ = {sd};
  return t;
}

LimitTarget LimitTarget::product_gamma(std::vector<double> shapes, std::vector<double> rates) {
  if (shapes.empty() || shapes.size() != rates.size())
    throw InvalidArgument("product gamma target: shapes and rates must be nonempty and of equal length");
  for (std::size_t j = 0; j < shapes.size(); ++j) {
    if (!(shapes[j] > 0.0)) throw InvalidArgument("product gamma target: shapes must be positive");
    if (!(rates[j] > 0.0) || !std::isfinite(rates[j]))
      throw InvalidArgument("product gamma target: rates must be positive (non-integrable limit otherwise)");
  }
  LimitTarget t;
  t.kind_ = Kind::ProductGamma;
  t.dim_ = shapes.size();
  t.a_ = std::move(shapes);
  t.b_ = std::move(rates);
  return t;
}

LimitTarget LimitTarget::empirical(std::vector<double> draws, std::string label) {
  if (draws.empty()) throw InvalidArgument("empirical target: no draws");
  LimitTarget t;
  t.kind_ = Kind::Empirical;
  std::sort(draws.begin(), draws.end());
  t.draws_ = std::move(draws);
  t.label_ = std::move(label);
  return t;
}

std::string LimitTarget::name() const {
  switch (kind_) {
    case Kind::Gamma:
      return "Gamma";
    case Kind::WeibullMin:
      return "WeibullMin";
    case Kind::Normal:
      return "Normal";
    case Kind::ProductGamma:
      return "ProductGamma";
    case Kind::Empirical:
      return label_.empty() ? "Empirical" : label_;
  }
  return "";
}

double LimitTarget::cdf(double x) const {
  if (dim_ != 1) throw InvalidArgument("LimitTarget::cdf: one-dimensional target required");
  return marginal_cdf(0, x);
}

double LimitTarget::marginal_cdf(std::size_t j, double x) const {
  if (j >= dim_) throw InvalidArgument("LimitTarget: coordinate out of range");
  if (std::isnan(x)) throw InvalidArgument("LimitTarget: NaN argument");
  switch (kind_) {
    case Kind::Gamma:
    case Kind::ProductGamma:
      return gamma_cdf(a_[j], b_[j], x);
    case Kind::WeibullMin:
      return x <= 0.0 ? 0.0 : -std::expm1(-std::pow(x, a_[0]));
    case Kind::Normal:
      return numerics::normal_cdf((x - a_[0]) / b_[0]);
    case Kind::Empirical: {
      const auto it = std::upper_bound(draws_.begin(), draws_.end(), x);
      return static_cast<double>(it - draws_.begin()) / static_cast<double>(draws_.size());
    }
  }
  return 0.0;
}

double LimitTarget::pdf(double x) const {
  if (dim_ != 1) throw InvalidArgument("LimitTarget::pdf: one-dimensional target required");
  switch (kind_) {
    case Kind::Gamma:
    case Kind::ProductGamma:
      if (x <= 0.0) return 0.0;
      return std::exp(a_[0] * std::log(b_[0]) + (a_[0] - 1.0) * std::log(x) - b_[0] * x - std::lgamma(a_[0]));
    case Kind::WeibullMin:
      if (x <= 0.0) return 0.0;
      return a_[0] * std::pow(x, a_[0] - 1.0) * std::exp(-std::pow(x, a_[0]));
    case Kind::Normal: {
      const double z = (x - a_[0]) / b_[0];
      return std::exp(-0.5 * z * z) / (b_[0] * std::sqrt(2.0 * std::numbers::pi));
    }
    case Kind::Empirical:
      throw InvalidArgument("LimitTarget::pdf: empirical target has no density");
  }
  return 0.0;
}

double LimitTarget::orthant_cdf(std::span<const double> x) const {
  if (x.size() != dim_) throw InvalidArgument("LimitTarget::orthant_cdf: dimension mismatch");
  double p = 1.0;
  for (std::size_t j = 0; j < dim_; ++j) p *= marginal_cdf(j, x[j]);
  return p;
}

double LimitTarget::rect_cdf(std::span<const double> lo, std::span<const double> hi) const {
  if (lo.size() != dim_ || hi.size() != dim_) throw InvalidArgument("LimitTarget::rect_cdf: dimension mismatch");
  double p = 1.0;
  for (std::size_t j = 0; j < dim_; ++j) {
    if (!(hi[j] > lo[j])) return 0.0;
    const double upper = std::isinf(hi[j]) ? 1.0 : marginal_cdf(j, hi[j]);
    p *= std::max(0.0, upper - marginal_cdf(j, lo[j]));
  }
  return p;
}

SampleSet LimitTarget::sample(std::size_t n, std::uint64_t seed) const {
  if (n < 1) throw InvalidArgument("LimitTarget::sample: n must be at least 1");
  Rng rng = make_rng(seed);
  std::vector<double> flat(n * dim_);
  switch (kind_) {
    case Kind::Gamma:
    case Kind::ProductGamma: {
      std::vector<std::gamma_distribution<double>> dists;
      for (std::size_t j = 0; j < dim_; ++j) dists.emplace_back(a_[j], 1.0 / b_[j]);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < dim_; ++j) flat[i * dim_ + j] = dists[j](rng);
      break;
    }
    case Kind::WeibullMin:
      for (auto& v : flat) v = std::pow(-std::log(uniform_open(rng)), 1.0 / a_[0]);
      break;
    case Kind::Normal: {
      std::normal_distribution<double> nd(a_[0], b_[0]);
      for (auto& v : flat) v = nd(rng);
      break;
    }
    case Kind::Empirical:
      for (auto& v : flat) {
        const auto k = std::min(draws_.size() - 1, static_cast<std::size_t>(uniform_open(rng) * draws_.size()));
        v = draws_[k];
      }
      break;
  }
  return SampleSet(dim_, std::move(flat));
}

}  // namespace tiltlab
