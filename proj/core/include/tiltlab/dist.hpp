#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "tiltlab/rng.hpp"
#include "tiltlab/sample_set.hpp"

namespace tiltlab {

// Survival at the supremum, P(X > upper - u), behaves like
// constant * u^alpha as u -> 0.
struct WeibullTail {
  double alpha = 1.0;
  double upper = 1.0;
  double constant = 1.0;
};

// Density behaves like L * exp(-K |x|^alpha) far out.
struct UnboundedTail {
  double alpha = 2.0;
  double K = 0.5;
  double L = 1.0;
};

namespace family {
struct Uniform01 {};
struct Beta {
  double a = 1.0, b = 1.0;
};
// Normal(mu, sigma^2) conditioned on X <= upper.
struct TruncNormal {
  double mu = 0.0, sigma = 1.0, upper = 0.0;
};
// Exponential(lambda) conditioned on X <= upper.
struct TruncExp {
  double lambda = 1.0, upper = 1.0;
};
struct Exponential {
  double lambda = 1.0;
};
// Equally likely atoms; duplicates carry proportionally more mass.
struct DiscreteUniform {
  std::vector<double> values;
};
// V^2 for V ~ Uniform(0,1).
struct SquaredUniform {};
// Density proportional to exp(-K |x|^alpha) on the real line.
struct GenNormal {
  double alpha = 2.0, K = 0.5;
};
}  // namespace family

// A one-dimensional law with exact CDF, quantile and (when continuous)
// log-density.
class ScalarModel {
 public:
  using Variant = std::variant<family::Uniform01, family::Beta, family::TruncNormal, family::TruncExp,
                               family::Exponential, family::DiscreteUniform, family::SquaredUniform,
                               family::GenNormal>;

  ScalarModel(Variant v);  // NOLINT

  static ScalarModel uniform01() { return ScalarModel(Variant(family::Uniform01{})); }
  static ScalarModel beta(double a, double b) { return ScalarModel(Variant(family::Beta{a, b})); }
  static ScalarModel trunc_normal(double mu, double sigma, double upper) {
    return ScalarModel(Variant(family::TruncNormal{mu, sigma, upper}));
  }
  static ScalarModel trunc_exp(double lambda, double upper) { return ScalarModel(Variant(family::TruncExp{lambda, upper})); }
  static ScalarModel exponential(double lambda) { return ScalarModel(Variant(family::Exponential{lambda})); }
  static ScalarModel discrete_uniform(std::vector<double> values) {
    return ScalarModel(Variant(family::DiscreteUniform{std::move(values)}));
  }
  static ScalarModel squared_uniform() { return ScalarModel(Variant(family::SquaredUniform{})); }
  static ScalarModel gen_normal(double alpha, double K) { return ScalarModel(Variant(family::GenNormal{alpha, K})); }
  static ScalarModel std_normal() { return ScalarModel(Variant(family::GenNormal{2.0, 0.5})); }

  const Variant& variant() const noexcept { return v_; }
  std::string name() const;

  double lower() const;  // infimum of the support, may be -inf
  double upper() const;  // supremum of the support, may be +inf
  bool bounded_above() const;
  bool is_discrete() const;

  double cdf(double x) const;
  // Generalized inverse inf{x : cdf(x) >= p}; p must lie in (0,1).
  double quantile(double p) const;
  double log_pdf(double x) const;
  double pdf(double x) const;
  // P(X > upper() - u) computed without cancellation near u = 0.
  double upper_tail(double u) const;

  double sample(Rng& rng) const;

  std::optional<WeibullTail> weibull() const;
  std::optional<UnboundedTail> unbounded_tail() const;

  // Atoms of a discrete family (sorted); empty otherwise.
  std::vector<double> atoms() const;

 private:
  Variant v_;
};

namespace family {
// d independent standard normal coordinates.
struct StdNormalVec {
  std::size_t d = 1;
};
struct ProductVec {
  std::vector<ScalarModel> components;
};
// (U, V^2) with U, V independent Uniform(0,1).
struct TwoDExample {};
}  // namespace family

// A sampled-from family in R^d. Every vector family here has independent
// coordinates, so orthant probabilities factor over marginals.
class DistributionModel {
 public:
  using Variant = std::variant<ScalarModel, family::StdNormalVec, family::ProductVec, family::TwoDExample>;

  DistributionModel(Variant v);  // NOLINT
  DistributionModel(ScalarModel m) : DistributionModel(Variant(std::move(m))) {}  // NOLINT

  static DistributionModel std_normal_vec(std::size_t d) { return Variant(family::StdNormalVec{d}); }
  static DistributionModel product(std::vector<ScalarModel> parts) {
    return Variant(family::ProductVec{std::move(parts)});
  }
  static DistributionModel two_d_example() { return Variant(family::TwoDExample{}); }

  const Variant& variant() const noexcept { return v_; }
  std::string name() const;
  std::size_t dim() const;
  bool is_scalar() const noexcept { return std::holds_alternative<ScalarModel>(v_); }
  // The 1-d law; throws for vector families.
  const ScalarModel& scalar() const;
  std::vector<ScalarModel> marginals() const;

  // n i.i.d. draws; a pure function of (model, n, seed).
  SampleSet sample(std::size_t n, std::uint64_t seed) const;

  // Lower-left orthant probability P(X <= x) componentwise.
  double orthant_cdf(std::span<const double> x) const;

  // 1-d conveniences; throw for vector families.
  double cdf(double x) const { return scalar().cdf(x); }
  double quantile(double p) const { return scalar().quantile(p); }

  // Per-coordinate supremum of the support (may contain +inf).
  std::vector<double> upper_corner() const;
  std::vector<double> lower_corner() const;
  std::optional<UnboundedTail> unbounded_tail() const;

 private:
  Variant v_;
};

namespace dist {

inline SampleSet sample(const DistributionModel& model, std::size_t n, std::uint64_t seed) {
  return model.sample(n, seed);
}
inline double cdf(const DistributionModel& model, double x) { return model.cdf(x); }
inline double quantile(const DistributionModel& model, double p) { return model.quantile(p); }

// 1 - F(M - u) for a bounded 1-d model in the Weibull regime. Rejects
// unbounded models and models without a Weibull index.
double weibull_tail(const DistributionModel& model, double u);

}  // namespace dist

}  // namespace tiltlab
