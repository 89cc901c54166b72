#include "tiltlab/unbounded.hpp"

#include <cmath>
#include <numbers>

#include "tiltlab/errors.hpp"

namespace tiltlab {

void TailProfile::validate() const {
  if (!(alpha > 1.0 && std::isfinite(alpha))) throw InvalidArgument("TailProfile: alpha must exceed 1");
  if (!(K > 0.0 && std::isfinite(K))) throw InvalidArgument("TailProfile: K must be positive");
  if (!(L > 0.0 && std::isfinite(L))) throw InvalidArgument("TailProfile: L must be positive");
  if (d < 1) throw InvalidArgument("TailProfile: dimension must be at least 1");
}

TailProfile TailProfile::from_model(const DistributionModel& model) {
  const auto t = model.unbounded_tail();
  if (!t) throw InvalidArgument(model.name() + " has no light unbounded tail profile");
  TailProfile p{t->alpha, t->K, t->L, model.dim()};
  p.validate();
  return p;
}

double phi(const TailProfile& profile, double c, const Eigen::VectorXd& theta, const Eigen::VectorXd& x) {
  if (theta.size() != x.size()) throw InvalidArgument("phi: dimension mismatch");
  const double r = x.norm();
  return c * theta.dot(x) - (r == 0.0 ? 0.0 : profile.K * std::pow(r, profile.alpha));
}

LaplaceGeometry laplace_geometry(const TailProfile& profile, double c, const Eigen::VectorXd& theta) {
  profile.validate();
  if (!(c > 0.0)) throw InvalidArgument("laplace_geometry: c must be positive");
  if (static_cast<std::size_t>(theta.size()) != profile.d) throw InvalidArgument("laplace_geometry: dimension mismatch");
  if (std::abs(theta.norm() - 1.0) > 1e-12) throw InvalidArgument("laplace_geometry: theta must be a unit vector");
  const double a = profile.alpha;
  const double K = profile.K;
  const auto d = static_cast<Eigen::Index>(profile.d);
  LaplaceGeometry g;
  g.c = c;
  g.theta = theta;
  const double r = std::pow(c / (a * K), 1.0 / (a - 1.0));
  g.m_c = r * theta;
  const double beta = a / (a - 1.0);
  g.phi_max = (a - 1.0) * std::pow(a, -beta) * std::pow(c, beta) * std::pow(K, -1.0 / (a - 1.0));
  const double s = K * a * std::pow(r, a - 2.0);
  const Eigen::MatrixXd P = theta * theta.transpose();
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(d, d);
  g.neg_hessian = s * (I + (a - 2.0) * P);
  // I + (a-2) P has eigenvalue a-1 along theta and 1 elsewhere.
  g.neg_hessian_sqrt = std::sqrt(s) * (I + (std::sqrt(a - 1.0) - 1.0) * P);
  g.det_neg_hessian = std::pow(s, static_cast<double>(d)) * (a - 1.0);
  return g;
}

double log_laplace_normalizer(const TailProfile& profile, double c, const Eigen::VectorXd& theta) {
  const auto g = laplace_geometry(profile, c, theta);
  const double d = static_cast<double>(profile.d);
  return std::log(profile.L) + 0.5 * d * std::log(2.0 * std::numbers::pi) + g.phi_max -
         0.5 * std::log(g.det_neg_hessian);
}

double laplace_normalizer(const TailProfile& profile, double c, const Eigen::VectorXd& theta) {
  return std::exp(log_laplace_normalizer(profile, c, theta));
}

GrowthConstants m_growth_constants(const TailProfile& profile) {
  profile.validate();
  const double a = profile.alpha;
  const double K = profile.K;
  const double d = static_cast<double>(profile.d);
  GrowthConstants out;
  out.beta = a / (a - 1.0);
  out.p = (a - 1.0) * std::pow(a, -out.beta) * std::pow(K, -1.0 / (a - 1.0)) * (std::pow(2.0, out.beta) - 2.0);
  out.c_exponent = d * (a - 2.0) / (2.0 * a - 2.0);
  const double common = std::sqrt(a - 1.0) * std::pow(2.0, -out.c_exponent) * std::pow(a * K, d / (2.0 * a - 2.0));
  out.q_corrected = common / (profile.L * std::pow(2.0 * std::numbers::pi, 0.5 * d));
  out.q_stated = profile.L * common;
  return out;
}

double log_m_growth_prediction(const TailProfile& profile, double c) {
  const auto k = m_growth_constants(profile);
  return std::log(k.q_corrected) + k.p * std::pow(c, k.beta) + k.c_exponent * std::log(c);
}

SampleSet gaussian_limit_transform(const SampleSet& samples_tilted, const LaplaceGeometry& geometry) {
  const auto d = static_cast<std::size_t>(geometry.m_c.size());
  if (samples_tilted.dim() != d) throw InvalidArgument("gaussian_limit_transform: dimension mismatch");
  SampleSet out(d);
  out.reserve(samples_tilted.size());
  Eigen::VectorXd x(static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < samples_tilted.size(); ++i) {
    const auto p = samples_tilted[i];
    for (std::size_t j = 0; j < d; ++j) x[static_cast<Eigen::Index>(j)] = p[j];
    const Eigen::VectorXd z = geometry.neg_hessian_sqrt * (x - geometry.m_c);
    out.push_back(std::span<const double>(z.data(), d));
  }
  return out;
}

}  // namespace tiltlab
