#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "tiltlab/dist.hpp"
#include "tiltlab/limit_target.hpp"
#include "tiltlab/tilt.hpp"

namespace tiltlab {

// Fixed-theta Gaussian field G_theta, the limit of sqrt(n)(F_{n,theta} - F_theta).
struct GaussCovSpec {
  DistributionModel model;
  TiltSpec tilt;
  std::vector<double> grid;  // strictly increasing; empty selects the default grid
};

// Covariance kernel of G_theta. With F_s the CDF of the law tilted by s theta
// and M = M_theta:
//   cov(x1, x2) = M [F_2(min) - F_1(x1) F_2(x2) - F_1(x2) F_2(x1) + F_1(x1) F_1(x2)].
class GaussCovKernel {
 public:
  GaussCovKernel(const DistributionModel& model, const TiltSpec& tilt);
  double operator()(double x1, double x2) const;
  double m_theta() const noexcept { return m_; }
  const TiltedCdf& tilted_cdf() const noexcept { return f1_; }

 private:
  TiltedCdf f1_, f2_;
  double m_;
};

double gauss_cov(const GaussCovSpec& spec, double x1, double x2);

// k points between the 1e-4 and 1 - 1e-4 quantiles of the tilted law.
std::vector<double> default_gauss_grid(const DistributionModel& model, const TiltSpec& tilt, std::size_t k = 512);

Eigen::MatrixXd gauss_cov_matrix(const GaussCovSpec& spec);

struct SupGaussDraws {
  std::vector<double> draws;
  std::vector<double> grid;
  double min_eigenvalue = 0.0;  // of the grid covariance before clamping
};
// reps draws of max over the grid of |G_theta|.
SupGaussDraws simulate_sup_gauss(const GaussCovSpec& spec, std::size_t reps, std::uint64_t seed);

struct BandRow {
  double u = 0.0;
  double bound = 0.0;
  double empirical = 0.0;
  bool pass = true;
};
struct BandReport {
  double mean = 0.0;
  double m_theta = 0.0;
  std::vector<BandRow> rows;
  bool pass = true;
};
// Empirical P(|Z - mean Z| > u) against e^{-u^2/M_theta} plus three
// binomial standard errors. An empty u_grid uses u = k sqrt(M)/4, k = 1..16.
BandReport borell_band_check(const std::vector<double>& sup_draws, double m_theta, std::vector<double> u_grid = {});

// Survival exp(-t^alpha): limit of (M - max)/(M - F^{-1}(1 - 1/n)) for pure power tails.
LimitTarget weibull_limit_target(double alpha);

// Poisson random measure on (0, T] with intensity alpha y^{alpha-1} dy.
struct PRMConfig {
  double alpha = 1.0;
  double truncation_T = 0.0;
  double c1 = 1.0;
  double tail_tol = 1e-8;

  // Expected weight beyond T: integral_T^inf e^{-c1 y} alpha y^{alpha-1} dy.
  double neglected_weight() const;
  void validate() const;
  // Smallest convenient T meeting tail_tol.
  static PRMConfig with_tolerance(double alpha, double c1, double tail_tol = 1e-8);
};

// Atoms in increasing order. Built from unit-rate Poisson arrivals G_k as
// y_k = G_k^{1/alpha}, so the count is Poisson(T^alpha) and, given the
// count, locations are i.i.d. with density alpha y^{alpha-1}/T^alpha. A
// larger T with the same seed extends the same atom list.
std::vector<double> simulate_prm_1d(const PRMConfig& config, std::uint64_t seed);

struct ZcprmDraws {
  std::vector<double> draws;
  std::size_t redraws = 0;  // replicates whose PRM had no atoms
};
// Per replicate: pick atom y_i with probability proportional to e^{-c1 y_i}
// and emit c1 y_i.
ZcprmDraws sample_z_cprm(const PRMConfig& config, std::size_t reps, std::uint64_t seed);

double max_weight_stat(const WeightedEmpirical& we);

// C1 = lim theta (M - F^{-1}(1 - 1/n)) for a schedule with M_theta/n -> c,
// under a pure power tail kappa u^alpha: C1 = 2 (c Gamma(1 + alpha))^{1/alpha}.
double c1_from_critical_ratio(double alpha, double c);
double critical_ratio_from_c1(double alpha, double c1);

}  // namespace tiltlab
