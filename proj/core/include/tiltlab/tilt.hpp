#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <vector>

#include "tiltlab/dist.hpp"
#include "tiltlab/sample_set.hpp"

namespace tiltlab {

// Direction/magnitude theta and the map g applied before tilting.
// Weights are exp(theta^T g(x)).
class TiltSpec {
 public:
  enum class Kind { Identity, PowerPerCoordinate, CustomMonotone1D };

  static TiltSpec identity(std::vector<double> theta);
  static TiltSpec scalar(double theta) { return identity({theta}); }
  // g(x) = (x_1^a_1, ..., x_d^a_d); requires nonnegative coordinates.
  static TiltSpec power(std::vector<double> theta, std::vector<double> exponents);
  // One-dimensional g, assumed strictly increasing and continuous.
  static TiltSpec custom(double theta, std::function<double(double)> g);

  Kind kind() const noexcept { return kind_; }
  std::size_t dim() const noexcept { return theta_.size(); }
  const std::vector<double>& theta() const noexcept { return theta_; }
  const std::vector<double>& exponents() const noexcept { return exponents_; }

  // g applied to coordinate j alone (every g here acts per coordinate).
  double g_coord(std::size_t j, double x) const;
  // theta^T g(x).
  double exponent(std::span<const double> x) const;

  // Same g with theta multiplied by s.
  TiltSpec scaled(double s) const;
  // The 1-d tilt acting on coordinate j.
  TiltSpec coordinate(std::size_t j) const;

 private:
  TiltSpec() = default;
  Kind kind_ = Kind::Identity;
  std::vector<double> theta_;
  std::vector<double> exponents_;
  std::function<double(double)> custom_;
};

// The reweighted empirical law: support points with normalized weights.
class WeightedEmpirical {
 public:
  // Validates that weights are nonnegative and sum to 1 within 1e-12.
  WeightedEmpirical(SampleSet points, std::vector<double> weights, double log_normalizer = 0.0);

  std::size_t size() const noexcept { return weights_.size(); }
  std::size_t dim() const noexcept { return points_.dim(); }
  const SampleSet& points() const noexcept { return points_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  // log of the mean unnormalized weight.
  double log_normalizer() const noexcept { return log_normalizer_; }

 private:
  SampleSet points_;
  std::vector<double> weights_;
  double log_normalizer_;
};

WeightedEmpirical snis_weights(const SampleSet& samples, const TiltSpec& tilt);
// Same construction from precomputed exponents theta^T g(X_i).
WeightedEmpirical snis_weights_from_log(SampleSet samples, std::span<const double> log_weights);

// Weighted mass of {X <= x} (componentwise for d > 1).
double weighted_cdf(const WeightedEmpirical& we, std::span<const double> x);
inline double weighted_cdf(const WeightedEmpirical& we, double x) { return weighted_cdf(we, std::span(&x, 1)); }

// m i.i.d. draws from the weighted law by Walker/Vose alias sampling.
SampleSet resample(const WeightedEmpirical& we, std::size_t m, std::uint64_t seed);

// Alias table for repeated sampling from a fixed discrete law.
class AliasTable {
 public:
  explicit AliasTable(std::span<const double> probabilities);
  std::size_t draw(Rng& rng) const;
  std::size_t size() const noexcept { return prob_.size(); }

 private:
  std::vector<double> prob_;
  std::vector<std::size_t> alias_;
};

// n * sum w_i^2 / (sum w_i)^2 from log weights.
double m_theta_from_log(std::span<const double> log_weights);
double m_theta_empirical(const SampleSet& samples, const TiltSpec& tilt);

// E[e^{2 theta^T g(X)}] / E[e^{theta^T g(X)}]^2. Closed forms where they
// exist, otherwise quadrature. Throws DivergentMoment outside the MGF
// domain.
double m_theta_analytic(const DistributionModel& model, const TiltSpec& tilt);

// log E[exp(h(X)) 1{lo < X <= hi}] for a 1-d law. Throws DivergentMoment
// when the integral does not settle on an unbounded support.
double log_expect_exp(const ScalarModel& model, const std::function<double(double)>& h,
                      double lo = -std::numeric_limits<double>::infinity(),
                      double hi = std::numeric_limits<double>::infinity());

// CDF of the exactly tilted 1-d law X_theta.
class TiltedCdf {
 public:
  TiltedCdf(const ScalarModel& model, const TiltSpec& tilt);
  double operator()(double x) const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

}  // namespace tiltlab
