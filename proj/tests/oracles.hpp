#pragma once

// Independent reference computations used only by the tests.

#include <cmath>
#include <functional>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace oracle {

inline double integrate(const std::function<double(double)>& f, double a, double b) {
  if (std::isinf(a) || std::isinf(b)) {
    boost::math::quadrature::tanh_sinh<double> ts;
    return ts.integrate(f, a, b);
  }
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-14);
}

inline double beta_cdf(double a, double b, double x) {
  if (x <= 0) return 0.0;
  if (x >= 1) return 1.0;
  return boost::math::ibeta(a, b, x);
}

inline double gamma_cdf(double shape, double x) { return x <= 0 ? 0.0 : boost::math::gamma_p(shape, x); }

inline double beta_pdf(double a, double b, double x) {
  if (x <= 0 || x >= 1) return 0.0;
  return std::pow(x, a - 1) * std::pow(1 - x, b - 1) / boost::math::beta(a, b);
}

}  // namespace oracle
