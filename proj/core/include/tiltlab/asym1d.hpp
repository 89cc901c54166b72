#pragma once

#include <vector>

#include "tiltlab/dist.hpp"
#include "tiltlab/limit_target.hpp"

namespace tiltlab {

struct AsymptoteRow {
  double theta = 0.0;
  double ratio = 0.0;
  double target = 0.0;
  double abs_error = 0.0;
};

// A ratio tracked along a theta grid against its limiting constant.
struct AsymptoteCheck {
  std::vector<double> theta_grid;
  std::vector<double> ratio_values;
  double limit_value = 0.0;
  // |ratio - limit| strictly decreasing along the grid, or already at rounding level.
  bool converged = false;

  std::vector<AsymptoteRow> rows() const;
};

// E[e^{theta X}] / (e^{theta M} (1 - F(M - 1/theta))); tends to Gamma(1 + alpha).
double karamata_ratio(const DistributionModel& model, double theta);
// (1 - F(M - 1/theta)) M_theta; tends to 2^{-alpha} / Gamma(1 + alpha).
double m_theta_asymptote_1d(const DistributionModel& model, double theta);
// E[e^{theta X} 1{X > M - C/theta}] / E[e^{theta X}]; tends to P(alpha, C).
double tail_fraction(const DistributionModel& model, double theta, double C);

double karamata_limit(double alpha);
double m_theta_limit_1d(double alpha);
double tail_fraction_limit(double alpha, double C);

// Gamma(alpha, 1): the law of theta (M - X_theta) as theta grows.
LimitTarget gamma_limit_target(double alpha);

AsymptoteCheck check_karamata(const DistributionModel& model, const std::vector<double>& thetas);
AsymptoteCheck check_m_theta_1d(const DistributionModel& model, const std::vector<double>& thetas);
AsymptoteCheck check_tail_fraction(const DistributionModel& model, const std::vector<double>& thetas, double C);

}  // namespace tiltlab
