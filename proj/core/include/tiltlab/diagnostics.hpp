#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "tiltlab/tilt.hpp"

namespace tiltlab {

// sup_x |W(x) - F(x)| for the weighted step CDF W, evaluated exactly at
// the atoms (ties merged).
double ks_1d(const WeightedEmpirical& we, const std::function<double(double)>& cdf);
// Equal-weight convenience.
double ks_1d(std::span<const double> draws, const std::function<double(double)>& cdf);

double ks_two_sample(std::span<const double> a, std::span<const double> b);

struct RectKsResult {
  double statistic = 0.0;
  std::size_t grid_k = 0;
  std::size_t evaluations = 0;
  std::vector<double> argmax;  // corner attaining the sup
};
// sup over grid_k^d corners x of the box of |W(X <= x) - G(x)|, with
// corners at lo + (hi - lo) i / grid_k, i = 1..grid_k per axis.
RectKsResult ks_rect_hd(const WeightedEmpirical& we, const std::function<double(std::span<const double>)>& cdf_hd,
                        std::span<const double> box_lo, std::span<const double> box_hi, std::size_t grid_k);

enum class Regime { Accurate, Critical, Undersampled };
std::string to_string(Regime r);

struct RegimeEvidence {
  double n = 0.0;
  double m_theta = 0.0;
  double ratio = 0.0;
};

struct RegimeThresholds {
  double accurate_final_ratio = 0.1;
  double critical_abs_slope = 0.1;
};

struct RegimeReport {
  double m_theta = 0.0;  // last schedule row
  double n = 0.0;
  double ratio = 0.0;
  double slope = 0.0;  // least-squares slope of log(M/n) on log n
  Regime regime = Regime::Critical;
  double admissible_rate_exponent = 0.0;
  std::vector<RegimeEvidence> evidence;
};

RegimeReport regime_classify(const std::vector<std::pair<double, double>>& m_schedule,
                             const RegimeThresholds& thresholds = {});

}  // namespace tiltlab
