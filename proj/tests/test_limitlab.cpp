#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "oracles.hpp"
#include "tiltlab/tiltlab.hpp"

using namespace tiltlab;

namespace {

// Delta-method covariance of sqrt(n)(F_{n,theta} - F_theta) for Uniform01:
// E[w^2 (1{X<=a} - F(a))(1{X<=b} - F(b))] / E[w]^2 with w = e^{theta X}.
double cov_oracle(double theta, double a, double b) {
  auto ew = [&](double s, double hi) {
    return oracle::integrate([&](double x) { return std::exp(s * theta * x); }, 0.0, std::clamp(hi, 0.0, 1.0));
  };
  const double z = ew(1, 1);
  const double Fa = ew(1, a) / z, Fb = ew(1, b) / z;
  auto part = [&](double lo, double hi, double ia, double ib) {
    if (hi <= lo) return 0.0;
    return (ia - Fa) * (ib - Fb) * (ew(2, hi) - ew(2, lo));
  };
  const double lo = std::min(a, b), hi = std::max(a, b);
  const double ia_mid = a <= b ? 0.0 : 1.0, ib_mid = b <= a ? 0.0 : 1.0;
  const double e = part(0, lo, 1, 1) + part(lo, hi, ia_mid, ib_mid) + part(hi, 1, 0, 0);
  return e / (z * z);
}

}  // namespace

TEST_SUITE("limitlab") {
  TEST_CASE("Gaussian covariance kernel") {
    const GaussCovSpec spec{ScalarModel::uniform01(), TiltSpec::scalar(1.0), {}};
    CHECK(gauss_cov(spec, 5.0, 5.0) == doctest::Approx(0.0));
    CHECK(std::abs(gauss_cov(spec, -1.0, 0.5)) < 1e-15);
    for (auto [a, b] : {std::pair{0.3, 0.7}, {0.1, 0.9}, {0.5, 0.5}, {0.8, 0.2}})
      CHECK(gauss_cov(spec, a, b) == doctest::Approx(cov_oracle(1.0, a, b)).epsilon(1e-10));
    const GaussCovSpec steep{ScalarModel::uniform01(), TiltSpec::scalar(6.0), {}};
    CHECK(gauss_cov(steep, 0.7, 0.9) == doctest::Approx(cov_oracle(6.0, 0.7, 0.9)).epsilon(1e-10));
  }

  TEST_CASE("covariance kernel against replicate simulation") {
    const DistributionModel u = ScalarModel::uniform01();
    const auto tilt = TiltSpec::scalar(1.0);
    const std::size_t n = 4096, reps = 4000;
    const TiltedCdf F(u.scalar(), tilt);
    std::vector<double> d3(reps), d7(reps);
    parallel_for(reps, [&](std::size_t k) {
      const auto we = snis_weights(u.sample(n, derive_seed(77, k)), tilt);
      d3[k] = std::sqrt(double(n)) * (weighted_cdf(we, 0.3) - F(0.3));
      d7[k] = std::sqrt(double(n)) * (weighted_cdf(we, 0.7) - F(0.7));
    });
    const double m3 = std::accumulate(d3.begin(), d3.end(), 0.0) / reps;
    const double m7 = std::accumulate(d7.begin(), d7.end(), 0.0) / reps;
    double c = 0;
    for (std::size_t k = 0; k < reps; ++k) c += (d3[k] - m3) * (d7[k] - m7);
    c /= reps - 1;
    const GaussCovSpec spec{u, tilt, {}};
    CHECK(std::abs(c - gauss_cov(spec, 0.3, 0.7)) < 0.02);
  }

  TEST_CASE("sup of the Gaussian field") {
    const GaussCovSpec flat{ScalarModel::uniform01(), TiltSpec::scalar(1.0), {2.0, 3.0, 4.0}};
    for (double v : simulate_sup_gauss(flat, 50, 1).draws) CHECK(v == doctest::Approx(0.0).epsilon(1e-4));

    for (double theta : {0.5, 1.0, 2.0, 4.0}) {
      const GaussCovSpec spec{ScalarModel::uniform01(), TiltSpec::scalar(theta), {}};
      const auto sup = simulate_sup_gauss(spec, 500, 2);
      const double mean = std::accumulate(sup.draws.begin(), sup.draws.end(), 0.0) / 500.0;
      const double m = GaussCovKernel(spec.model, spec.tilt).m_theta();
      CHECK(mean / std::sqrt(m) > 0.2);
      CHECK(mean / std::sqrt(m) < 3.0);
    }
    const GaussCovSpec bad{ScalarModel::uniform01(), TiltSpec::scalar(1.0), {0.5, 0.4}};
    CHECK_THROWS_AS(simulate_sup_gauss(bad, 10, 1), InvalidArgument);
  }

  TEST_CASE("concentration band") {
    CHECK(borell_band_check(std::vector<double>(2000, 1.3), 1.0).pass);
    // Heavy synthetic tail: half the mass far from the mean.
    std::vector<double> heavy(2000, 0.0);
    for (std::size_t i = 0; i < heavy.size(); i += 2) heavy[i] = 20.0;
    CHECK_FALSE(borell_band_check(heavy, 1.0).pass);
    CHECK_THROWS_AS(borell_band_check(std::vector<double>(10, 1.0), 1.0), InvalidArgument);
  }

  TEST_CASE("extreme value limit of uniform maxima") {
    const auto w = weibull_limit_target(1.0);
    CHECK(1.0 - w.cdf(0.0) == 1.0);
    double prev = 1.0;
    for (double t = 0.25; t < 40; t *= 1.5) {
      const double s = 1.0 - w.cdf(t);
      CHECK(s < prev);
      prev = s;
    }
    CHECK(prev < 1e-10);
    // Max of n uniforms is U^{1/n}.
    const double n = 1e5;
    Rng rng(9);
    std::vector<double> g(10'000);
    for (auto& v : g) v = n * -std::expm1(std::log(uniform_open(rng)) / n);
    CHECK(ks_1d(g, [&](double t) { return w.cdf(t); }) < 0.02);
  }

  TEST_CASE("Poisson random measure") {
    const PRMConfig cfg{1.0, 3.0, 1.0, 1e-8};
    const std::size_t sims = 100'000;
    std::vector<double> total(sims), a(sims), b(sims);
    for (std::size_t k = 0; k < sims; ++k) {
      const auto atoms = simulate_prm_1d(cfg, derive_seed(3, k));
      CHECK(std::is_sorted(atoms.begin(), atoms.end()));
      total[k] = double(atoms.size());
      for (double y : atoms) {
        if (y <= 1.0) a[k] += 1;
        else if (y < 2.0) b[k] += 1;
      }
    }
    CHECK(std::accumulate(total.begin(), total.end(), 0.0) / sims == doctest::Approx(3.0).epsilon(0.01));
    const double ma = std::accumulate(a.begin(), a.end(), 0.0) / sims;
    const double mb = std::accumulate(b.begin(), b.end(), 0.0) / sims;
    double cov = 0;
    for (std::size_t k = 0; k < sims; ++k) cov += (a[k] - ma) * (b[k] - mb);
    CHECK(std::abs(cov / (sims - 1)) < 0.01);
    std::vector<double> obs(7, 0.0);
    for (double v : a) obs[std::min<std::size_t>(6, std::size_t(v))] += 1;
    double chi = 0, acc = 0;
    for (int k = 0; k < 7; ++k) {
      const double e = k < 6 ? sims * boost::math::gamma_p_derivative(k + 1.0, 1.0) : sims - acc;
      acc += e;
      chi += (obs[k] - e) * (obs[k] - e) / e;
    }
    CHECK(boost::math::gamma_q(3.0, chi / 2.0) > 0.01);

    // A larger truncation extends the same atom list.
    const auto small = simulate_prm_1d(cfg, 5);
    const auto big = simulate_prm_1d(PRMConfig{1.0, 6.0, 1.0, 1e-8}, 5);
    REQUIRE(big.size() >= small.size());
    CHECK(std::equal(small.begin(), small.end(), big.begin()));
  }

  TEST_CASE("critical-regime limit law") {
    const auto cfg = PRMConfig{1.0, 40.0, 50.0, 1e-8};
    const auto z = sample_z_cprm(cfg, 5000, 4);
    CHECK(std::all_of(z.draws.begin(), z.draws.end(), [](double v) { return v > 0; }));
    // Essentially c1 times the smallest atom.
    CHECK(ks_1d(z.draws, [](double t) { return -std::expm1(-t / 50.0); }) < 0.05);

    const DistributionModel u = ScalarModel::uniform01();
    const std::size_t n = 200, reps = 3000;
    std::vector<double> snis(reps);
    for (std::size_t k = 0; k < reps; ++k) {
      const auto we = snis_weights(u.sample(n, derive_seed(8, k)), TiltSpec::scalar(2.0 * n));
      snis[k] = 2.0 * n * (1.0 - resample(we, 1, derive_seed(9, k))[0][0]);
    }
    const auto zc = sample_z_cprm(PRMConfig{1.0, 40.0, 2.0, 1e-8}, reps, 10);
    CHECK(ks_two_sample(snis, zc.draws) < 0.05);
    const auto g = LimitTarget::gamma(1.0).sample(reps, 11).flat();
    CHECK(ks_two_sample(snis, g) > 0.1);
  }

  TEST_CASE("critical constant mapping") {
    CHECK(c1_from_critical_ratio(1.0, 1.0) == doctest::Approx(2.0));
    CHECK(critical_ratio_from_c1(1.0, 2.0) == doctest::Approx(1.0));
    CHECK(critical_ratio_from_c1(2.5, c1_from_critical_ratio(2.5, 0.37)) == doctest::Approx(0.37).epsilon(1e-13));
    CHECK_THROWS_AS(sample_z_cprm(PRMConfig{1.0, 3.0, 2.0, 1e-8}, 10, 1), InvalidArgument);
  }

  TEST_CASE("maximum weight") {
    const WeightedEmpirical one(SampleSet::scalar({0.4}), {1.0});
    CHECK(max_weight_stat(one) == 1.0);
    const auto s = DistributionModel(ScalarModel::uniform01()).sample(64, 1);
    CHECK(max_weight_stat(snis_weights(s, TiltSpec::scalar(0.0))) == doctest::Approx(1.0 / 64));
  }
}
