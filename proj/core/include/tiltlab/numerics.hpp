#pragma once

#include <cstddef>
#include <functional>
#include <vector>
#include <span>

namespace tiltlab::numerics {

// Regularized lower incomplete gamma P(a, x). Series for x < a + 1,
// continued fraction otherwise; relative tolerance 1e-12.
double gamma_p(double a, double x);
// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x), computed
// directly so small tails keep their relative accuracy.
double gamma_q(double a, double x);

// Regularized incomplete beta I_x(a, b) by Lentz continued fraction.
double beta_inc(double a, double b, double x);
double log_beta(double a, double b);

double normal_cdf(double x);
// 1 - normal_cdf(x) without cancellation for large x.
double normal_sf(double x);
double normal_quantile(double p);

double log_sum_exp(std::span<const double> values);

double poisson_pmf(long k, double mean);
// P(chi^2_dof > x).
double chi_square_sf(double x, double dof);

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t evaluations = 0;
  bool converged = true;
};

// Adaptive Gauss-Kronrod (7/15) on a finite interval. Bisects the
// interval with the largest error estimate until the summed error is
// below max(abs_tol, rel_tol * |value|).
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double rel_tol = 1e-12, double abs_tol = 0.0,
                     std::size_t max_intervals = 4000);

// Single 15-point Kronrod rule on [a, b]; for short smooth pieces.
double kronrod15(const std::function<double(double)>& f, double a, double b);

// Solves f(x) = 0 on [lo, hi] given a sign change, by bisection refined
// with secant steps. Tolerance is absolute in x.
double find_root(const std::function<double(double)>& f, double lo, double hi,
                 double x_tol = 1e-14, int max_iter = 300);


// Integrals of exp(ell(x)) over a finite interval, evaluated after
// shifting ell by its maximum so that extreme exponents neither overflow
// nor underflow. Breakpoints accumulate geometrically toward both ends
// and toward the located peak, so mass concentrated on a tiny sub-interval
// is resolved.
class ExpIntegralTable {
 public:
  ExpIntegralTable(std::function<double(double)> ell, double a, double b, double rel_tol = 1e-12);

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  double shift() const noexcept { return shift_; }
  // log of the integral over [a, b]; -inf when the integrand vanishes.
  double log_total() const noexcept { return log_total_; }
  // Integral over [a, x] divided by the integral over [a, b].
  double fraction_below(double x) const;

 private:
  std::function<double(double)> ell_;
  double a_, b_, shift_ = 0.0, log_total_ = 0.0, rel_tol_;
  std::vector<double> breaks_;
  std::vector<double> cumulative_;  // shifted integral over [a, breaks_[j]]
};

// log of the integral of exp(ell) over [a, b] (finite endpoints).
double log_integrate_exp(const std::function<double(double)>& ell, double a, double b, double rel_tol = 1e-12);

}  // namespace tiltlab::numerics
