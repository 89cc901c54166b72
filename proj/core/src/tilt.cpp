#include "tiltlab/tilt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>

#include "tiltlab/errors.hpp"
#include "tiltlab/numerics.hpp"

namespace tiltlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Neumaier summation; naive accumulation drifts past 1e-12 for large n.
double compensated_sum(std::span<const double> v) {
  double sum = 0.0, comp = 0.0;
  for (double w : v) {
    const double t = sum + w;
    comp += std::abs(sum) >= std::abs(w) ? (sum - t) + w : (w - t) + sum;
    sum = t;
  }
  return sum + comp;
}

void check_theta(const std::vector<double>& theta) {
  if (theta.empty()) throw InvalidArgument("TiltSpec: theta must have at least one component");
  for (double t : theta)
    if (!std::isfinite(t)) throw InvalidArgument("TiltSpec: theta must be finite");
}

// Finite [a, b] inside (lo, hi] ∩ support that carries all but a
// negligible part of exp(ell). Unbounded sides are walked outward until
// ell has dropped 80 nats below the largest value seen.
std::pair<double, double> integration_range(const ScalarModel& m, const std::function<double(double)>& ell,
                                            double lo, double hi) {
  double a = std::max(lo, m.lower());
  double b = std::min(hi, m.upper());
  if (!(a < b)) return {a, a};
  if (std::isfinite(a) && std::isfinite(b)) return {a, b};
  double x0 = m.quantile(0.5);
  if (!(x0 > a && x0 < b)) x0 = std::isfinite(a) ? a + 1.0 : b - 1.0;
  const double step = std::max(1.0, std::abs(x0));
  auto walk = [&](double dir) {
    double ref = ell(x0);
    for (int j = 0; j < 200; ++j) {
      const double x = x0 + dir * step * std::ldexp(1.0, j);
      const double v = ell(x);
      if (std::isnan(v)) break;
      ref = std::max(ref, v);
      if (v < ref - 80.0) return x;
    }
    throw DivergentMoment("tilted moment does not converge on the unbounded support of " + m.name());
  };
  if (!std::isfinite(b)) b = walk(+1.0);
  if (!std::isfinite(a)) a = walk(-1.0);
  return {a, b};
}

double log_mean_exp_atoms(const std::vector<double>& atoms, const std::function<double(double)>& h, double lo,
                          double hi) {
  std::vector<double> vals;
  for (double v : atoms)
    if (v > lo && v <= hi) vals.push_back(h(v));
  if (vals.empty()) return -kInf;
  return numerics::log_sum_exp(vals) - std::log(static_cast<double>(atoms.size()));
}

double scalar_m_theta(const ScalarModel& m, const TiltSpec& t) {
  const double theta = t.theta()[0];
  if (theta == 0.0) return 1.0;
  const auto& v = m.variant();
  if (t.kind() == TiltSpec::Kind::Identity) {
    if (const auto* f = std::get_if<family::Exponential>(&v)) {
      if (2.0 * theta >= f->lambda)
        throw DivergentMoment("M_theta is infinite for Exponential(lambda) when theta >= lambda/2");
      return (f->lambda - theta) * (f->lambda - theta) / (f->lambda * (f->lambda - 2.0 * theta));
    }
    if (std::holds_alternative<family::Uniform01>(v)) {
      if (std::abs(theta) < 1e-4) return 1.0 + theta * theta / 12.0;
      return theta / (2.0 * std::tanh(0.5 * theta));
    }
    if (const auto* f = std::get_if<family::GenNormal>(&v); f && f->alpha == 2.0) {
      return std::exp(theta * theta / (2.0 * f->K));
    }
  }
  if (const auto* f = std::get_if<family::Exponential>(&v); f && t.kind() == TiltSpec::Kind::PowerPerCoordinate) {
    if (t.exponents()[0] > 1.0 && theta > 0.0)
      throw DivergentMoment("M_theta is infinite for Exponential with a super-linear power tilt");
  }
  const auto h1 = [&t](double x) { return t.theta()[0] * t.g_coord(0, x); };
  const auto h2 = [&t](double x) { return 2.0 * t.theta()[0] * t.g_coord(0, x); };
  if (m.is_discrete()) {
    const auto atoms = m.atoms();
    const double l1 = log_mean_exp_atoms(atoms, h1, -kInf, kInf);
    const double l2 = log_mean_exp_atoms(atoms, h2, -kInf, kInf);
    return std::max(1.0, std::exp(l2 - 2.0 * l1));
  }
  const double l1 = log_expect_exp(m, h1);
  const double l2 = log_expect_exp(m, h2);
  if (!std::isfinite(l1) || !std::isfinite(l2)) throw DivergentMoment("M_theta is not finite for " + m.name());
  return std::max(1.0, std::exp(l2 - 2.0 * l1));
}

}  // namespace

// --- TiltSpec ---------------------------------------------------------------

TiltSpec TiltSpec::identity(std::vector<double> theta) {
  check_theta(theta);
  TiltSpec t;
  t.theta_ = std::move(theta);
  return t;
}

TiltSpec TiltSpec::power(std::vector<double> theta, std::vector<double> exponents) {
  check_theta(theta);
  if (exponents.size() != theta.size()) throw InvalidArgument("TiltSpec: one exponent per coordinate required");
  for (double a : exponents)
    if (!(a > 0.0 && std::isfinite(a))) throw InvalidArgument("TiltSpec: power exponents must be positive");
  TiltSpec t;
  t.kind_ = Kind::PowerPerCoordinate;
  t.theta_ = std::move(theta);
  t.exponents_ = std::move(exponents);
  return t;
}

TiltSpec TiltSpec::custom(double theta, std::function<double(double)> g) {
  check_theta({theta});
  if (!g) throw InvalidArgument("TiltSpec: custom map must be callable");
  TiltSpec t;
  t.kind_ = Kind::CustomMonotone1D;
  t.theta_ = {theta};
  t.custom_ = std::move(g);
  return t;
}

double TiltSpec::g_coord(std::size_t j, double x) const {
  switch (kind_) {
    case Kind::Identity:
      return x;
    case Kind::PowerPerCoordinate:
      if (x < 0.0) throw InvalidArgument("TiltSpec: power tilt needs nonnegative coordinates");
      return exponents_[j] == 1.0 ? x : std::pow(x, exponents_[j]);
    case Kind::CustomMonotone1D:
      return custom_(x);
  }
  return x;
}

double TiltSpec::exponent(std::span<const double> x) const {
  if (x.size() != theta_.size())
    throw InvalidArgument("TiltSpec: point has dimension " + std::to_string(x.size()) + ", theta has " +
                          std::to_string(theta_.size()));
  double s = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j)
    if (theta_[j] != 0.0) s += theta_[j] * g_coord(j, x[j]);
  return s;
}

TiltSpec TiltSpec::scaled(double s) const {
  TiltSpec t = *this;
  for (double& v : t.theta_) v *= s;
  check_theta(t.theta_);
  return t;
}

TiltSpec TiltSpec::coordinate(std::size_t j) const {
  if (j >= theta_.size()) throw InvalidArgument("TiltSpec: coordinate out of range");
  TiltSpec t = *this;
  t.theta_ = {theta_[j]};
  if (kind_ == Kind::PowerPerCoordinate) t.exponents_ = {exponents_[j]};
  return t;
}

// --- WeightedEmpirical -------------------------------------------------------

WeightedEmpirical::WeightedEmpirical(SampleSet points, std::vector<double> weights, double log_normalizer)
    : points_(std::move(points)), weights_(std::move(weights)), log_normalizer_(log_normalizer) {
  if (weights_.empty()) throw InvalidArgument("WeightedEmpirical: no support points");
  if (weights_.size() != points_.size()) throw InvalidArgument("WeightedEmpirical: points/weights length mismatch");
  for (double w : weights_) {
    // Zero is allowed: it is what a positive weight below the smallest
    // subnormal rounds to under extreme tilts.
    if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidArgument("WeightedEmpirical: weights must be finite, >= 0");
  }
  if (std::abs(compensated_sum(weights_) - 1.0) > 1e-12) throw InvalidArgument("WeightedEmpirical: weights must sum to 1");
}

WeightedEmpirical snis_weights_from_log(SampleSet samples, std::span<const double> log_weights) {
  const std::size_t n = log_weights.size();
  if (n == 0 || samples.empty()) throw InvalidArgument("snis_weights: empty sample set");
  if (samples.size() != n) throw InvalidArgument("snis_weights: sample/weight count mismatch");
  double top = -kInf;
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(log_weights[i]))
      throw InvalidArgument("snis_weights: non-finite tilt value at index " + std::to_string(i));
    top = std::max(top, log_weights[i]);
  }
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = std::exp(log_weights[i] - top);
  const double s = compensated_sum(w);
  for (double& x : w) x /= s;
  const double log_norm = top + std::log(s) - std::log(static_cast<double>(n));
  return WeightedEmpirical(std::move(samples), std::move(w), log_norm);
}

WeightedEmpirical snis_weights(const SampleSet& samples, const TiltSpec& tilt) {
  if (samples.empty()) throw InvalidArgument("snis_weights: empty sample set");
  if (samples.dim() != tilt.dim()) throw InvalidArgument("snis_weights: dimension mismatch between samples and theta");
  std::vector<double> lw(samples.size());
  for (std::size_t i = 0; i < lw.size(); ++i) lw[i] = tilt.exponent(samples[i]);
  return snis_weights_from_log(samples, lw);
}

double weighted_cdf(const WeightedEmpirical& we, std::span<const double> x) {
  if (x.size() != we.dim()) throw InvalidArgument("weighted_cdf: dimension mismatch");
  const auto& pts = we.points();
  double mass = 0.0;
  for (std::size_t i = 0; i < we.size(); ++i) {
    const auto p = pts[i];
    bool inside = true;
    for (std::size_t j = 0; j < x.size() && inside; ++j) inside = p[j] <= x[j];
    if (inside) mass += we.weights()[i];
  }
  return std::min(mass, 1.0);
}

// --- resampling --------------------------------------------------------------

AliasTable::AliasTable(std::span<const double> probabilities) {
  const std::size_t n = probabilities.size();
  if (n == 0) throw InvalidArgument("AliasTable: empty distribution");
  const double total = std::accumulate(probabilities.begin(), probabilities.end(), 0.0);
  if (!(total > 0.0) || !std::isfinite(total)) throw InvalidArgument("AliasTable: probabilities must have positive sum");
  prob_.assign(n, 1.0);
  alias_.resize(n);
  std::iota(alias_.begin(), alias_.end(), std::size_t{0});
  std::vector<double> scaled(n);
  std::vector<std::size_t> small, large;
  for (std::size_t i = 0; i < n; ++i) {
    scaled[i] = probabilities[i] / total * static_cast<double>(n);
    (scaled[i] < 1.0 ? small : large).push_back(i);
  }
  while (!small.empty() && !large.empty()) {
    const std::size_t s = small.back();
    small.pop_back();
    const std::size_t l = large.back();
    prob_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  // Leftovers are 1 up to rounding.
  for (std::size_t i : small) prob_[i] = 1.0;
  for (std::size_t i : large) prob_[i] = 1.0;
}

std::size_t AliasTable::draw(Rng& rng) const {
  const std::size_t n = prob_.size();
  const std::size_t i = std::min(n - 1, static_cast<std::size_t>(uniform_open(rng) * static_cast<double>(n)));
  return uniform_open(rng) < prob_[i] ? i : alias_[i];
}

SampleSet resample(const WeightedEmpirical& we, std::size_t m, std::uint64_t seed) {
  if (m < 1) throw InvalidArgument("resample: m must be at least 1");
  const AliasTable table(we.weights());
  Rng rng = make_rng(seed);
  SampleSet out(we.dim());
  out.reserve(m);
  for (std::size_t k = 0; k < m; ++k) out.push_back(we.points()[table.draw(rng)]);
  return out;
}

// --- M_theta -----------------------------------------------------------------

double m_theta_from_log(std::span<const double> log_weights) {
  if (log_weights.empty()) throw InvalidArgument("m_theta: no weights");
  const double top = *std::max_element(log_weights.begin(), log_weights.end());
  if (!std::isfinite(top)) throw InvalidArgument("m_theta: non-finite tilt value");
  double s1 = 0.0, s2 = 0.0;
  for (double l : log_weights) {
    const double e = std::exp(l - top);
    s1 += e;
    s2 += e * e;
  }
  return static_cast<double>(log_weights.size()) * s2 / (s1 * s1);
}

double m_theta_empirical(const SampleSet& samples, const TiltSpec& tilt) {
  if (samples.size() < 2) throw InvalidArgument("m_theta_empirical: need at least two samples");
  if (samples.dim() != tilt.dim()) throw InvalidArgument("m_theta_empirical: dimension mismatch");
  std::vector<double> lw(samples.size());
  for (std::size_t i = 0; i < lw.size(); ++i) {
    lw[i] = tilt.exponent(samples[i]);
    if (!std::isfinite(lw[i])) throw InvalidArgument("m_theta_empirical: non-finite tilt value");
  }
  return m_theta_from_log(lw);
}

double m_theta_analytic(const DistributionModel& model, const TiltSpec& tilt) {
  if (tilt.dim() != model.dim()) throw InvalidArgument("m_theta_analytic: dimension mismatch between model and theta");
  if (model.is_scalar()) return scalar_m_theta(model.scalar(), tilt);
  if (std::holds_alternative<family::StdNormalVec>(model.variant())) {
    if (tilt.kind() != TiltSpec::Kind::Identity)
      throw InvalidArgument("m_theta_analytic: StdNormalVec supports the identity tilt only");
    double sq = 0.0;
    for (double t : tilt.theta()) sq += t * t;
    return std::exp(sq);
  }
  // Independent coordinates and a coordinatewise g: M factorizes.
  const auto parts = model.marginals();
  double m = 1.0;
  for (std::size_t j = 0; j < parts.size(); ++j) m *= scalar_m_theta(parts[j], tilt.coordinate(j));
  return m;
}

double log_expect_exp(const ScalarModel& model, const std::function<double(double)>& h, double lo, double hi) {
  if (model.is_discrete()) return log_mean_exp_atoms(model.atoms(), h, lo, hi);
  const auto ell = [&](double x) {
    const double lp = model.log_pdf(x);
    return lp == -kInf ? -kInf : h(x) + lp;
  };
  const auto [a, b] = integration_range(model, ell, lo, hi);
  if (!(a < b)) return -kInf;
  return numerics::log_integrate_exp(ell, a, b, 1e-13);
}

// --- tilted CDF --------------------------------------------------------------

struct TiltedCdf::Impl {
  std::function<double(double)> closed;
  std::vector<double> atoms;
  std::vector<double> cumulative;
  std::optional<numerics::ExpIntegralTable> table;
  double below = 0.0, above = 0.0;  // table range
};

TiltedCdf::TiltedCdf(const ScalarModel& model, const TiltSpec& tilt) {
  if (tilt.dim() != 1) throw InvalidArgument("TiltedCdf: one-dimensional tilt required");
  auto impl = std::make_shared<Impl>();
  const double theta = tilt.theta()[0];
  const auto& v = model.variant();
  const bool ident = tilt.kind() == TiltSpec::Kind::Identity;
  if (ident && std::holds_alternative<family::Uniform01>(v)) {
    impl->closed = [theta](double x) {
      if (x <= 0.0) return 0.0;
      if (x >= 1.0) return 1.0;
      if (theta == 0.0) return x;
      if (theta > 0.0) return std::exp(theta * (x - 1.0)) * std::expm1(-theta * x) / std::expm1(-theta);
      return std::expm1(theta * x) / std::expm1(theta);
    };
  } else if (const auto* f = std::get_if<family::Exponential>(&v); ident && f) {
    const double rate = f->lambda - theta;
    if (!(rate > 0.0)) throw DivergentMoment("TiltedCdf: Exponential tilt at or beyond lambda");
    impl->closed = [rate](double x) { return x <= 0.0 ? 0.0 : -std::expm1(-rate * x); };
  } else if (model.is_discrete()) {
    impl->atoms = model.atoms();
    std::vector<double> lw;
    for (double a : impl->atoms) lw.push_back(theta * tilt.g_coord(0, a));
    const double top = *std::max_element(lw.begin(), lw.end());
    double s = 0.0;
    for (double l : lw) {
      s += std::exp(l - top);
      impl->cumulative.push_back(s);
    }
    for (double& c : impl->cumulative) c /= s;
  } else {
    auto ell = [model, tilt](double x) {
      const double lp = model.log_pdf(x);
      return lp == -kInf ? -kInf : tilt.theta()[0] * tilt.g_coord(0, x) + lp;
    };
    const auto [a, b] = integration_range(model, ell, -kInf, kInf);
    impl->below = a;
    impl->above = b;
    impl->table.emplace(ell, a, b, 1e-12);
  }
  impl_ = std::move(impl);
}

double TiltedCdf::operator()(double x) const {
  if (std::isnan(x)) throw InvalidArgument("TiltedCdf: NaN argument");
  if (impl_->closed) return impl_->closed(x);
  if (!impl_->atoms.empty()) {
    const auto it = std::upper_bound(impl_->atoms.begin(), impl_->atoms.end(), x);
    const auto k = it - impl_->atoms.begin();
    return k == 0 ? 0.0 : impl_->cumulative[static_cast<std::size_t>(k - 1)];
  }
  return impl_->table->fraction_below(x);
}

}  // namespace tiltlab
