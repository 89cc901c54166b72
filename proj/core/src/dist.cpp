#include "tiltlab/dist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "tiltlab/errors.hpp"
#include "tiltlab/numerics.hpp"

namespace tiltlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void require(bool ok, const char* what) {
  if (!ok) throw InvalidArgument(what);
}

void validate(const family::Uniform01&) {}
void validate(const family::Beta& f) { require(f.a > 0 && f.b > 0, "Beta: a and b must be positive"); }
void validate(const family::TruncNormal& f) {
  require(f.sigma > 0 && std::isfinite(f.mu) && std::isfinite(f.upper), "TruncNormal: need sigma > 0");
}
void validate(const family::TruncExp& f) {
  require(f.lambda > 0 && f.upper > 0 && std::isfinite(f.upper), "TruncExp: need lambda > 0, upper > 0");
}
void validate(const family::Exponential& f) { require(f.lambda > 0, "Exponential: lambda must be positive"); }
void validate(family::DiscreteUniform& f) {
  require(!f.values.empty(), "DiscreteUniform: needs at least one value");
  for (double v : f.values) require(std::isfinite(v), "DiscreteUniform: values must be finite");
  std::sort(f.values.begin(), f.values.end());
}
void validate(const family::SquaredUniform&) {}
void validate(const family::GenNormal& f) { require(f.alpha > 0 && f.K > 0, "GenNormal: alpha, K must be positive"); }

// log of the normalizer 2 Gamma(1 + 1/alpha) K^(-1/alpha).
double gen_normal_log_norm(const family::GenNormal& f) {
  return std::log(2.0) + std::lgamma(1.0 + 1.0 / f.alpha) - std::log(f.K) / f.alpha;
}

double trunc_normal_upper_z(const family::TruncNormal& f) { return (f.upper - f.mu) / f.sigma; }

// Phi(b) - Phi(b - h) for h >= 0, accurate when h is small.
double normal_mass_below(double b, double h) {
  if (h < 0.5) {
    return numerics::kronrod15([](double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); },
                               b - h, b);
  }
  return numerics::normal_cdf(b) - numerics::normal_cdf(b - h);
}

}  // namespace

ScalarModel::ScalarModel(Variant v) : v_(std::move(v)) {
  std::visit([](auto& f) { validate(f); }, v_);
}

std::string ScalarModel::name() const {
  return std::visit(overloaded{
                        [](const family::Uniform01&) -> std::string { return "Uniform01"; },
                        [](const family::Beta&) -> std::string { return "Beta"; },
                        [](const family::TruncNormal&) -> std::string { return "TruncNormal"; },
                        [](const family::TruncExp&) -> std::string { return "TruncExp"; },
                        [](const family::Exponential&) -> std::string { return "Exponential"; },
                        [](const family::DiscreteUniform&) -> std::string { return "DiscreteUniform"; },
                        [](const family::SquaredUniform&) -> std::string { return "SquaredUniform"; },
                        [](const family::GenNormal&) -> std::string { return "GenNormal"; },
                    },
                    v_);
}

double ScalarModel::lower() const {
  return std::visit(overloaded{
                        [](const family::TruncNormal&) { return -kInf; },
                        [](const family::GenNormal&) { return -kInf; },
                        [](const family::DiscreteUniform& f) { return f.values.front(); },
                        [](const auto&) { return 0.0; },
                    },
                    v_);
}

double ScalarModel::upper() const {
  return std::visit(overloaded{
                        [](const family::TruncNormal& f) { return f.upper; },
                        [](const family::TruncExp& f) { return f.upper; },
                        [](const family::Exponential&) { return kInf; },
                        [](const family::GenNormal&) { return kInf; },
                        [](const family::DiscreteUniform& f) { return f.values.back(); },
                        [](const auto&) { return 1.0; },
                    },
                    v_);
}

bool ScalarModel::bounded_above() const { return std::isfinite(upper()); }

bool ScalarModel::is_discrete() const { return std::holds_alternative<family::DiscreteUniform>(v_); }

double ScalarModel::cdf(double x) const {
  if (std::isnan(x)) throw InvalidArgument("cdf: NaN argument");
  return std::visit(
      overloaded{
          [x](const family::Uniform01&) { return std::clamp(x, 0.0, 1.0); },
          [x](const family::Beta& f) { return numerics::beta_inc(f.a, f.b, x); },
          [x](const family::TruncNormal& f) {
            if (x >= f.upper) return 1.0;
            const double b = trunc_normal_upper_z(f);
            const double z = (x - f.mu) / f.sigma;
            return numerics::normal_cdf(z) / numerics::normal_cdf(b);
          },
          [x](const family::TruncExp& f) {
            if (x <= 0) return 0.0;
            if (x >= f.upper) return 1.0;
            return std::expm1(-f.lambda * x) / std::expm1(-f.lambda * f.upper);
          },
          [x](const family::Exponential& f) { return x <= 0 ? 0.0 : -std::expm1(-f.lambda * x); },
          [x](const family::DiscreteUniform& f) {
            const auto it = std::upper_bound(f.values.begin(), f.values.end(), x);
            return static_cast<double>(it - f.values.begin()) / static_cast<double>(f.values.size());
          },
          [x](const family::SquaredUniform&) { return x <= 0 ? 0.0 : (x >= 1 ? 1.0 : std::sqrt(x)); },
          [x](const family::GenNormal& f) {
            const double t = f.K * std::pow(std::abs(x), f.alpha);
            const double a = 1.0 / f.alpha;
            return x >= 0 ? 0.5 + 0.5 * numerics::gamma_p(a, t) : 0.5 * numerics::gamma_q(a, t);
          },
      },
      v_);
}

double ScalarModel::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("quantile: p must lie in (0,1)");
  return std::visit(
      overloaded{
          [p](const family::Uniform01&) { return p; },
          [p, this](const family::Beta&) {
            return numerics::find_root([&](double x) { return cdf(x) - p; }, 0.0, 1.0, 1e-16);
          },
          [p](const family::TruncNormal& f) {
            const double b = trunc_normal_upper_z(f);
            return std::min(f.upper, f.mu + f.sigma * numerics::normal_quantile(p * numerics::normal_cdf(b)));
          },
          [p](const family::TruncExp& f) {
            return -std::log1p(p * std::expm1(-f.lambda * f.upper)) / f.lambda;
          },
          [p](const family::Exponential& f) { return -std::log1p(-p) / f.lambda; },
          [p](const family::DiscreteUniform& f) {
            const std::size_t k = f.values.size();
            // Smallest j with (j+1)/k >= p, using the same arithmetic as cdf.
            std::size_t lo = 0, hi = k - 1;
            while (lo < hi) {
              const std::size_t mid = (lo + hi) / 2;
              if (static_cast<double>(mid + 1) / static_cast<double>(k) >= p)
                hi = mid;
              else
                lo = mid + 1;
            }
            return f.values[lo];
          },
          [p](const family::SquaredUniform&) { return p * p; },
          [p](const family::GenNormal& f) {
            const double a = 1.0 / f.alpha;
            // |x| solves P(a, K|x|^alpha) = |2p - 1|.
            const double target = std::abs(2.0 * p - 1.0);
            double r = 0.0;
            if (target > 0.0) {
              double hi = 1.0;
              while (numerics::gamma_p(a, f.K * std::pow(hi, f.alpha)) < target) hi *= 2.0;
              r = numerics::find_root(
                  [&](double y) { return numerics::gamma_p(a, f.K * std::pow(y, f.alpha)) - target; }, 0.0, hi,
                  1e-15 * hi);
            }
            return p >= 0.5 ? r : -r;
          },
      },
      v_);
}

double ScalarModel::log_pdf(double x) const {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  return std::visit(
      overloaded{
          [x](const family::Uniform01&) { return (x >= 0 && x <= 1) ? 0.0 : kNegInf; },
          [x](const family::Beta& f) {
            if (x < 0 || x > 1) return kNegInf;
            double lp = -numerics::log_beta(f.a, f.b);
            if (f.a != 1.0) lp += (f.a - 1) * std::log(x);
            if (f.b != 1.0) lp += (f.b - 1) * std::log1p(-x);
            return lp;
          },
          [x](const family::TruncNormal& f) {
            if (x > f.upper) return kNegInf;
            const double z = (x - f.mu) / f.sigma;
            return -0.5 * z * z - 0.5 * std::log(2.0 * std::numbers::pi) - std::log(f.sigma) -
                   std::log(numerics::normal_cdf(trunc_normal_upper_z(f)));
          },
          [x](const family::TruncExp& f) {
            if (x < 0 || x > f.upper) return kNegInf;
            return std::log(f.lambda) - f.lambda * x - std::log(-std::expm1(-f.lambda * f.upper));
          },
          [x](const family::Exponential& f) { return x < 0 ? kNegInf : std::log(f.lambda) - f.lambda * x; },
          [](const family::DiscreteUniform&) -> double {
            throw InvalidArgument("log_pdf: DiscreteUniform has no density");
          },
          [x](const family::SquaredUniform&) {
            if (x <= 0 || x > 1) return kNegInf;
            return -std::log(2.0) - 0.5 * std::log(x);
          },
          [x](const family::GenNormal& f) { return -f.K * std::pow(std::abs(x), f.alpha) - gen_normal_log_norm(f); },
      },
      v_);
}

double ScalarModel::pdf(double x) const { return std::exp(log_pdf(x)); }

double ScalarModel::upper_tail(double u) const {
  if (!bounded_above()) throw InvalidArgument("upper_tail: model is unbounded above");
  if (u <= 0) return 0.0;
  return std::visit(overloaded{
                        [u](const family::Uniform01&) { return std::min(u, 1.0); },
                        [u](const family::Beta& f) { return u >= 1 ? 1.0 : numerics::beta_inc(f.b, f.a, u); },
                        [u](const family::TruncNormal& f) {
                          const double b = trunc_normal_upper_z(f);
                          return normal_mass_below(b, u / f.sigma) / numerics::normal_cdf(b);
                        },
                        [u](const family::TruncExp& f) {
                          if (u >= f.upper) return 1.0;
                          // (e^{-l(M-u)} - e^{-lM}) / (1 - e^{-lM})
                          return std::exp(-f.lambda * f.upper) * std::expm1(f.lambda * u) /
                                 -std::expm1(-f.lambda * f.upper);
                        },
                        [u, this](const family::DiscreteUniform& f) {
                          return 1.0 - cdf(f.values.back() - u);
                        },
                        [u](const family::SquaredUniform&) {
                          if (u >= 1) return 1.0;
                          return u / (1.0 + std::sqrt(1.0 - u));
                        },
                        [](const auto&) -> double { throw InvalidArgument("upper_tail: unbounded family"); },
                    },
                    v_);
}

double ScalarModel::sample(Rng& rng) const {
  return std::visit(
      overloaded{
          [&rng](const family::Uniform01&) { return uniform_open(rng); },
          [&rng](const family::Beta& f) {
            std::gamma_distribution<double> ga(f.a, 1.0), gb(f.b, 1.0);
            const double x = ga(rng);
            const double y = gb(rng);
            return x / (x + y);
          },
          [&rng, this](const family::TruncNormal&) { return quantile(uniform_open(rng)); },
          [&rng, this](const family::TruncExp&) { return quantile(uniform_open(rng)); },
          [&rng](const family::Exponential& f) { return -std::log(uniform_open(rng)) / f.lambda; },
          [&rng](const family::DiscreteUniform& f) {
            const auto k = static_cast<std::uint64_t>(f.values.size());
            std::uniform_int_distribution<std::uint64_t> pick(0, k - 1);
            return f.values[pick(rng)];
          },
          [&rng](const family::SquaredUniform&) {
            const double v = uniform_open(rng);
            return v * v;
          },
          [&rng](const family::GenNormal& f) {
            std::gamma_distribution<double> g(1.0 / f.alpha, 1.0);
            const double r = std::pow(g(rng) / f.K, 1.0 / f.alpha);
            return uniform_open(rng) < 0.5 ? -r : r;
          },
      },
      v_);
}

std::optional<WeibullTail> ScalarModel::weibull() const {
  return std::visit(
      overloaded{
          [](const family::Uniform01&) -> std::optional<WeibullTail> { return WeibullTail{1.0, 1.0, 1.0}; },
          [](const family::Beta& f) -> std::optional<WeibullTail> {
            // density near 1 is (1-x)^(b-1) / B(a,b)
            return WeibullTail{f.b, 1.0, std::exp(-numerics::log_beta(f.a, f.b)) / f.b};
          },
          [](const family::TruncNormal& f) -> std::optional<WeibullTail> {
            const double b = trunc_normal_upper_z(f);
            const double dens = std::exp(-0.5 * b * b) / std::sqrt(2.0 * std::numbers::pi) /
                                (f.sigma * numerics::normal_cdf(b));
            return WeibullTail{1.0, f.upper, dens};
          },
          [](const family::TruncExp& f) -> std::optional<WeibullTail> {
            const double dens = f.lambda * std::exp(-f.lambda * f.upper) / -std::expm1(-f.lambda * f.upper);
            return WeibullTail{1.0, f.upper, dens};
          },
          [](const family::SquaredUniform&) -> std::optional<WeibullTail> { return WeibullTail{1.0, 1.0, 0.5}; },
          [](const auto&) -> std::optional<WeibullTail> { return std::nullopt; },
      },
      v_);
}

std::optional<UnboundedTail> ScalarModel::unbounded_tail() const {
  if (const auto* f = std::get_if<family::GenNormal>(&v_)) {
    if (f->alpha > 1.0) return UnboundedTail{f->alpha, f->K, std::exp(-gen_normal_log_norm(*f))};
  }
  return std::nullopt;
}

std::vector<double> ScalarModel::atoms() const {
  if (const auto* f = std::get_if<family::DiscreteUniform>(&v_)) return f->values;
  return {};
}

// ---------------------------------------------------------------------------

DistributionModel::DistributionModel(Variant v) : v_(std::move(v)) {
  if (const auto* f = std::get_if<family::StdNormalVec>(&v_))
    require(f->d >= 1, "StdNormalVec: dimension must be at least 1");
  if (const auto* f = std::get_if<family::ProductVec>(&v_))
    require(!f->components.empty(), "ProductVec: needs at least one component");
}

std::string DistributionModel::name() const {
  return std::visit(overloaded{
                        [](const ScalarModel& m) { return m.name(); },
                        [](const family::StdNormalVec&) -> std::string { return "StdNormalVec"; },
                        [](const family::ProductVec&) -> std::string { return "ProductVec"; },
                        [](const family::TwoDExample&) -> std::string { return "TwoDExample"; },
                    },
                    v_);
}

std::size_t DistributionModel::dim() const {
  return std::visit(overloaded{
                        [](const ScalarModel&) -> std::size_t { return 1; },
                        [](const family::StdNormalVec& f) { return f.d; },
                        [](const family::ProductVec& f) { return f.components.size(); },
                        [](const family::TwoDExample&) -> std::size_t { return 2; },
                    },
                    v_);
}

const ScalarModel& DistributionModel::scalar() const {
  if (const auto* m = std::get_if<ScalarModel>(&v_)) return *m;
  throw InvalidArgument(name() + " is not a one-dimensional model");
}

std::vector<ScalarModel> DistributionModel::marginals() const {
  return std::visit(
      overloaded{
          [](const ScalarModel& m) { return std::vector<ScalarModel>{m}; },
          [](const family::StdNormalVec& f) { return std::vector<ScalarModel>(f.d, ScalarModel::std_normal()); },
          [](const family::ProductVec& f) { return f.components; },
          [](const family::TwoDExample&) {
            return std::vector<ScalarModel>{ScalarModel::uniform01(), ScalarModel::squared_uniform()};
          },
      },
      v_);
}

SampleSet DistributionModel::sample(std::size_t n, std::uint64_t seed) const {
  if (n < 1) throw InvalidArgument("sample: n must be at least 1");
  const auto parts = marginals();
  const std::size_t d = parts.size();
  std::vector<double> flat(n * d);
  Rng rng = make_rng(seed);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) flat[i * d + j] = parts[j].sample(rng);
  return SampleSet(d, std::move(flat));
}

double DistributionModel::orthant_cdf(std::span<const double> x) const {
  const auto parts = marginals();
  if (x.size() != parts.size()) throw InvalidArgument("orthant_cdf: dimension mismatch");
  double p = 1.0;
  for (std::size_t j = 0; j < parts.size(); ++j) p *= parts[j].cdf(x[j]);
  return p;
}

std::vector<double> DistributionModel::upper_corner() const {
  std::vector<double> out;
  for (const auto& m : marginals()) out.push_back(m.upper());
  return out;
}

std::vector<double> DistributionModel::lower_corner() const {
  std::vector<double> out;
  for (const auto& m : marginals()) out.push_back(m.lower());
  return out;
}

std::optional<UnboundedTail> DistributionModel::unbounded_tail() const {
  if (const auto* f = std::get_if<family::StdNormalVec>(&v_)) {
    return UnboundedTail{2.0, 0.5, std::pow(2.0 * std::numbers::pi, -0.5 * static_cast<double>(f->d))};
  }
  if (const auto* m = std::get_if<ScalarModel>(&v_)) return m->unbounded_tail();
  return std::nullopt;
}

namespace dist {

double weibull_tail(const DistributionModel& model, double u) {
  const ScalarModel& m = model.scalar();
  if (!m.bounded_above()) throw InvalidArgument("weibull_tail: model " + m.name() + " is unbounded above");
  if (!m.weibull()) throw AssumptionViolated("weibull_tail: " + m.name() + " is not in the Weibull regime");
  if (!(u > 0.0) || u > m.upper() - m.lower())
    throw InvalidArgument("weibull_tail: u must lie in (0, M - inf support]");
  return m.upper_tail(u);
}

}  // namespace dist

}  // namespace tiltlab
