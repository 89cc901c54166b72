#pragma once

#include <Eigen/Dense>
#include <cstddef>

#include "tiltlab/dist.hpp"
#include "tiltlab/sample_set.hpp"

namespace tiltlab {

// Density f with f(x) / exp(-K |x|^alpha) -> L as |x| -> inf, in R^d.
struct TailProfile {
  double alpha = 2.0;
  double K = 0.5;
  double L = 1.0;
  std::size_t d = 1;

  void validate() const;
  static TailProfile from_model(const DistributionModel& model);
};

struct LaplaceGeometry {
  double c = 0.0;
  Eigen::VectorXd theta;
  Eigen::VectorXd m_c;
  double phi_max = 0.0;
  Eigen::MatrixXd neg_hessian;
  Eigen::MatrixXd neg_hessian_sqrt;
  double det_neg_hessian = 0.0;
};

// Phi_c(x) = c theta^T x - K |x|^alpha.
double phi(const TailProfile& profile, double c, const Eigen::VectorXd& theta, const Eigen::VectorXd& x);

// Maximizer, maximum and negated Hessian of Phi_c; theta must be a unit vector.
LaplaceGeometry laplace_geometry(const TailProfile& profile, double c, const Eigen::VectorXd& theta);

// L (2 pi)^{d/2} e^{Phi_max} / sqrt(det): leading term of E[e^{c theta^T X}].
double laplace_normalizer(const TailProfile& profile, double c, const Eigen::VectorXd& theta);
double log_laplace_normalizer(const TailProfile& profile, double c, const Eigen::VectorXd& theta);

// log M_c - p c^beta - exponent log c -> log q_corrected, with
// beta = alpha/(alpha-1) and exponent = d(alpha-2)/(2 alpha-2).
struct GrowthConstants {
  double p = 0.0;
  double q_corrected = 0.0;
  // The constant as commonly stated, L (a-1)^{1/2} 2^{-e} (aK)^{d/(2a-2)};
  // kept for comparison only.
  double q_stated = 0.0;
  double beta = 0.0;
  double c_exponent = 0.0;
};
GrowthConstants m_growth_constants(const TailProfile& profile);
// log q_corrected + p c^beta + c_exponent log c.
double log_m_growth_prediction(const TailProfile& profile, double c);

// neg_hessian_sqrt (x - m_c) for every sample.
SampleSet gaussian_limit_transform(const SampleSet& samples_tilted, const LaplaceGeometry& geometry);

}  // namespace tiltlab
