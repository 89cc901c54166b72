#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tiltlab/sample_set.hpp"

namespace tiltlab {

// A reference limit law with CDF and sampler access.
class LimitTarget {
 public:
  enum class Kind { Gamma, WeibullMin, Normal, ProductGamma, Empirical };

  // Gamma(shape, rate) on (0, inf).
  static LimitTarget gamma(double shape, double rate = 1.0);
  // Survival exp(-t^alpha) on (0, inf).
  static LimitTarget weibull_min(double alpha);
  static LimitTarget normal(double mean = 0.0, double sd = 1.0);
  // Independent coordinates, coordinate j ~ Gamma(shapes[j], rates[j]).
  static LimitTarget product_gamma(std::vector<double> shapes, std::vector<double> rates);
  // A law known only through simulated draws (for example a PRM
  // functional); the CDF is the empirical one.
  static LimitTarget empirical(std::vector<double> draws, std::string label);

  Kind kind() const noexcept { return kind_; }
  std::string name() const;
  std::size_t dim() const noexcept { return dim_; }

  // 1-d CDF; for ProductGamma of dimension 1 as well.
  double cdf(double x) const;
  double pdf(double x) const;
  double marginal_cdf(std::size_t j, double x) const;
  // P(Y <= x) componentwise.
  double orthant_cdf(std::span<const double> x) const;
  // P(lo < Y <= hi) componentwise; hi may contain +inf.
  double rect_cdf(std::span<const double> lo, std::span<const double> hi) const;

  SampleSet sample(std::size_t n, std::uint64_t seed) const;

  const std::vector<double>& shapes() const noexcept { return a_; }
  const std::vector<double>& rates() const noexcept { return b_; }

 private:
  LimitTarget() = default;
  Kind kind_ = Kind::Gamma;
  std::size_t dim_ = 1;
  std::vector<double> a_, b_;  // shape/rate, alpha, or mean/sd
  std::vector<double> draws_;  // sorted, Empirical only
  std::string label_;
};

}  // namespace tiltlab
