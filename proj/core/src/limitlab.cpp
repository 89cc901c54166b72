#include "tiltlab/limitlab.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "tiltlab/errors.hpp"
#include "tiltlab/numerics.hpp"
#include "tiltlab/rng.hpp"

namespace tiltlab {

namespace {

const ScalarModel& continuous_scalar(const DistributionModel& model) {
  const ScalarModel& m = model.scalar();
  if (m.is_discrete()) throw InvalidArgument("Gaussian field: continuous one-dimensional model required");
  return m;
}

double tilted_quantile(const TiltedCdf& F, const ScalarModel& m, double p) {
  double lo = m.lower();
  double hi = m.upper();
  const double mid = m.quantile(0.5);
  for (double step = 1.0; !std::isfinite(lo); step *= 2.0)
    if (F(mid - step) < p) lo = mid - step;
  for (double step = 1.0; !std::isfinite(hi); step *= 2.0)
    if (F(mid + step) > p) hi = mid + step;
  return numerics::find_root([&](double x) { return F(x) - p; }, lo, hi, 1e-13 * std::max(1.0, hi - lo));
}

}  // namespace

GaussCovKernel::GaussCovKernel(const DistributionModel& model, const TiltSpec& tilt)
    : f1_(continuous_scalar(model), tilt),
      f2_(continuous_scalar(model), tilt.scaled(2.0)),
      m_(m_theta_analytic(model, tilt)) {}

double GaussCovKernel::operator()(double x1, double x2) const {
  const double a1 = f1_(x1), a2 = f1_(x2);
  const double b1 = f2_(x1), b2 = f2_(x2);
  const double bmin = x1 <= x2 ? b1 : b2;
  return m_ * (bmin - a1 * b2 - a2 * b1 + a1 * a2);
}

double gauss_cov(const GaussCovSpec& spec, double x1, double x2) {
  return GaussCovKernel(spec.model, spec.tilt)(x1, x2);
}

std::vector<double> default_gauss_grid(const DistributionModel& model, const TiltSpec& tilt, std::size_t k) {
  if (k < 2) throw InvalidArgument("default_gauss_grid: need at least two points");
  const ScalarModel& m = continuous_scalar(model);
  const TiltedCdf F(m, tilt);
  const double lo = tilted_quantile(F, m, 1e-4);
  const double hi = tilted_quantile(F, m, 1.0 - 1e-4);
  std::vector<double> grid(k);
  for (std::size_t i = 0; i < k; ++i) grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(k - 1);
  return grid;
}

Eigen::MatrixXd gauss_cov_matrix(const GaussCovSpec& spec) {
  const auto grid = spec.grid.empty() ? default_gauss_grid(spec.model, spec.tilt) : spec.grid;
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw InvalidArgument("GaussCovSpec: grid must be strictly increasing");
  const GaussCovKernel kern(spec.model, spec.tilt);
  const auto k = static_cast<Eigen::Index>(grid.size());
  Eigen::MatrixXd C(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double v = kern(grid[static_cast<std::size_t>(i)], grid[static_cast<std::size_t>(j)]);
      C(i, j) = v;
      C(j, i) = v;
    }
  return C;
}

SupGaussDraws simulate_sup_gauss(const GaussCovSpec& spec, std::size_t reps, std::uint64_t seed) {
  if (reps < 1) throw InvalidArgument("simulate_sup_gauss: reps must be at least 1");
  SupGaussDraws out;
  out.grid = spec.grid.empty() ? default_gauss_grid(spec.model, spec.tilt) : spec.grid;
  GaussCovSpec s = spec;
  s.grid = out.grid;
  Eigen::MatrixXd C = gauss_cov_matrix(s);
  const auto k = C.rows();
  C += 1e-10 * Eigen::MatrixXd::Identity(k, k);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(C);
  if (eig.info() != Eigen::Success) throw NumericalFailure("simulate_sup_gauss: eigendecomposition failed");
  Eigen::VectorXd lam = eig.eigenvalues();
  out.min_eigenvalue = lam.minCoeff() - 1e-10;
  const double scale = std::max(1.0, lam.maxCoeff());
  if (out.min_eigenvalue < -1e-8 * scale) throw NumericalFailure("simulate_sup_gauss: covariance is not positive semidefinite");
  lam = lam.cwiseMax(0.0).cwiseSqrt();
  const Eigen::MatrixXd A = eig.eigenvectors() * lam.asDiagonal();
  out.draws.assign(reps, 0.0);
  parallel_for(reps, [&](std::size_t r) {
    Rng rng = make_rng(seed, r);
    std::normal_distribution<double> nd;
    Eigen::VectorXd z(k);
    for (Eigen::Index i = 0; i < k; ++i) z[i] = nd(rng);
    out.draws[r] = (A * z).cwiseAbs().maxCoeff();
  });
  return out;
}

BandReport borell_band_check(const std::vector<double>& sup_draws, double m_theta, std::vector<double> u_grid) {
  if (sup_draws.size() < 1000) throw InvalidArgument("borell_band_check: need at least 1000 draws");
  if (!(m_theta >= 1.0 - 1e-12)) throw InvalidArgument("borell_band_check: M_theta must be at least 1");
  BandReport rep;
  rep.m_theta = m_theta;
  const double n = static_cast<double>(sup_draws.size());
  for (double z : sup_draws) rep.mean += z;
  rep.mean /= n;
  if (u_grid.empty())
    for (int k = 1; k <= 16; ++k) u_grid.push_back(0.25 * k * std::sqrt(m_theta));
  for (double u : u_grid) {
    BandRow row;
    row.u = u;
    row.bound = std::exp(-u * u / m_theta);
    std::size_t exceed = 0;
    for (double z : sup_draws) exceed += std::abs(z - rep.mean) > u ? 1 : 0;
    row.empirical = static_cast<double>(exceed) / n;
    const double se = std::sqrt(row.bound * (1.0 - row.bound) / n);
    row.pass = row.empirical <= row.bound + 3.0 * se;
    rep.pass = rep.pass && row.pass;
    rep.rows.push_back(row);
  }
  return rep;
}

LimitTarget weibull_limit_target(double alpha) {
  if (!(alpha > 0.0)) throw InvalidArgument("weibull_limit_target: alpha must be positive");
  return LimitTarget::weibull_min(alpha);
}

double PRMConfig::neglected_weight() const {
  return alpha * std::tgamma(alpha) * numerics::gamma_q(alpha, c1 * truncation_T) / std::pow(c1, alpha);
}

void PRMConfig::validate() const {
  if (!(alpha > 0.0 && std::isfinite(alpha))) throw InvalidArgument("PRMConfig: alpha must be positive");
  if (!(c1 > 0.0 && std::isfinite(c1))) throw InvalidArgument("PRMConfig: c1 must be positive");
  if (!(truncation_T > 0.0 && std::isfinite(truncation_T))) throw InvalidArgument("PRMConfig: T must be positive");
  if (!(tail_tol > 0.0)) throw InvalidArgument("PRMConfig: tail_tol must be positive");
  if (!(neglected_weight() < tail_tol))
    throw InvalidArgument("PRMConfig: truncation T leaves expected weight above tail_tol");
}

PRMConfig PRMConfig::with_tolerance(double alpha, double c1, double tail_tol) {
  PRMConfig cfg{alpha, 1.0 / c1, c1, tail_tol};
  if (!(alpha > 0.0) || !(c1 > 0.0) || !(tail_tol > 0.0)) throw InvalidArgument("PRMConfig: invalid parameters");
  while (cfg.neglected_weight() >= tail_tol) cfg.truncation_T *= 2.0;
  double lo = cfg.truncation_T / 2.0, hi = cfg.truncation_T;
  for (int i = 0; i < 60; ++i) {
    cfg.truncation_T = 0.5 * (lo + hi);
    (cfg.neglected_weight() < tail_tol ? hi : lo) = cfg.truncation_T;
  }
  cfg.truncation_T = hi;
  return cfg;
}

namespace {

std::vector<double> prm_atoms(const PRMConfig& cfg, Rng& rng) {
  const double cap = std::pow(cfg.truncation_T, cfg.alpha);
  std::vector<double> atoms;
  double arrival = 0.0;
  for (;;) {
    arrival += -std::log(uniform_open(rng));
    if (arrival > cap) break;
    atoms.push_back(std::pow(arrival, 1.0 / cfg.alpha));
  }
  return atoms;
}

}  // namespace

std::vector<double> simulate_prm_1d(const PRMConfig& config, std::uint64_t seed) {
  // The tail_tol invariant concerns the weighted functional only.
  if (!(config.alpha > 0.0 && std::isfinite(config.alpha))) throw InvalidArgument("PRMConfig: alpha must be positive");
  if (!(config.truncation_T > 0.0 && std::isfinite(config.truncation_T)))
    throw InvalidArgument("PRMConfig: T must be positive");
  Rng rng = make_rng(seed);
  return prm_atoms(config, rng);
}

ZcprmDraws sample_z_cprm(const PRMConfig& config, std::size_t reps, std::uint64_t seed) {
  config.validate();
  if (config.tail_tol > 1e-6) throw InvalidArgument("sample_z_cprm: tail_tol must be at most 1e-6");
  if (reps < 1) throw InvalidArgument("sample_z_cprm: reps must be at least 1");
  ZcprmDraws out;
  out.draws.assign(reps, 0.0);
  std::vector<std::size_t> redraws(reps, 0);
  parallel_for(reps, [&](std::size_t r) {
    Rng rng = make_rng(seed, r);
    for (;;) {
      const auto atoms = prm_atoms(config, rng);
      if (atoms.empty()) {
        ++redraws[r];
        continue;
      }
      // Atoms are increasing, so weights relative to the first are <= 1.
      double total = 0.0;
      for (double y : atoms) total += std::exp(-config.c1 * (y - atoms.front()));
      const double u = uniform_open(rng) * total;
      double acc = 0.0;
      std::size_t pick = atoms.size() - 1;
      for (std::size_t i = 0; i < atoms.size(); ++i) {
        acc += std::exp(-config.c1 * (atoms[i] - atoms.front()));
        if (u <= acc) {
          pick = i;
          break;
        }
      }
      out.draws[r] = config.c1 * atoms[pick];
      break;
    }
  });
  for (auto k : redraws) out.redraws += k;
  return out;
}

double max_weight_stat(const WeightedEmpirical& we) {
  return *std::max_element(we.weights().begin(), we.weights().end());
}

double c1_from_critical_ratio(double alpha, double c) {
  if (!(alpha > 0.0) || !(c > 0.0)) throw InvalidArgument("c1_from_critical_ratio: alpha and c must be positive");
  return 2.0 * std::pow(c * std::tgamma(1.0 + alpha), 1.0 / alpha);
}

double critical_ratio_from_c1(double alpha, double c1) {
  if (!(alpha > 0.0) || !(c1 > 0.0)) throw InvalidArgument("critical_ratio_from_c1: alpha and c1 must be positive");
  return std::pow(0.5 * c1, alpha) / std::tgamma(1.0 + alpha);
}

}  // namespace tiltlab
