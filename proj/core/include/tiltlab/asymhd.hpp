#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tiltlab/dist.hpp"
#include "tiltlab/limit_target.hpp"

namespace tiltlab {

// Axis-aligned box prod_i (lo_i, hi_i]; hi_i may be +inf.
struct Rect {
  std::vector<double> lo;
  std::vector<double> hi;
};

// Regular variation of X (or of g(X) for a per-coordinate power g) at
// the maximizer, for independent coordinates. The limit measure is the
// product nu(prod [a_i, b_i]) = prod_i kappa_i ((b_i/s_i)^rho_i - (a_i/s_i)^rho_i)
// with scaling U(t) = t^alpha, alpha = sum rho_i.
class MvrvModel {
 public:
  // Builds the model at x_theta = maximizer(base, theta).
  MvrvModel(DistributionModel base, std::vector<double> theta);

  const DistributionModel& base() const noexcept { return base_; }
  std::size_t dim() const noexcept { return rho_.size(); }
  const std::vector<double>& theta() const noexcept { return theta_; }
  // Maximizer of theta^T g(x) in the original coordinates.
  const std::vector<double>& x_theta() const noexcept { return x_theta_; }
  // g(x_theta): the point at which this model's variable is regularly varying.
  std::vector<double> point() const;
  const std::vector<double>& exponents() const noexcept { return exponents_; }
  const std::vector<double>& rho() const noexcept { return rho_; }
  const std::vector<double>& kappa() const noexcept { return kappa_; }
  const std::vector<double>& scale() const noexcept { return scale_; }
  double alpha() const noexcept;
  double U(double t) const;

  // P(point_j - g_j(X_j) <= u) for the base law.
  double coord_tail(std::size_t j, double u) const;

 private:
  friend MvrvModel g_pushforward(const MvrvModel&, const std::vector<double>&);
  DistributionModel base_;
  std::vector<double> theta_, x_theta_;
  std::vector<double> exponents_, rho_, kappa_, scale_;
};

// argmax theta^T g(x) over the support, for a monotone per-coordinate g.
std::vector<double> maximizer(const DistributionModel& model, std::span<const double> theta);

double nu_rect(const MvrvModel& mvrv, const Rect& rect);

// (1/U(t)) P((point - g(X))/t in rect), from the per-coordinate tails.
double mvrv_ratio(const MvrvModel& mvrv, double t, const Rect& rect);

struct MonteCarloEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t draws = 0;
};
// Same ratio by direct simulation (at most 1e7 draws).
MonteCarloEstimate mvrv_ratio_mc(const MvrvModel& mvrv, double t, const Rect& rect, std::size_t draws,
                                 std::uint64_t seed);

// integral of e^{-theta^T y} nu(dy).
double nu_laplace(const MvrvModel& mvrv, std::span<const double> theta);

// Law with density proportional to e^{-theta^T y} nu(dy): independent
// Gamma(rho_i, theta_i) coordinates.
LimitTarget z_limit_target(const MvrvModel& mvrv, std::span<const double> theta);

// U(1/c) M_{c theta}; tends to m_theta_limit_hd.
double m_theta_asymptote_hd(const MvrvModel& mvrv, double c);
double m_theta_limit_hd(const MvrvModel& mvrv);

// Model for g(X) with g(x) = (x_1^a_1, ..., x_d^a_d).
MvrvModel g_pushforward(const MvrvModel& mvrv, const std::vector<double>& exponents);

}  // namespace tiltlab
