#include <doctest.h>

#include <numeric>

#include "oracles.hpp"
#include "tiltlab/tiltlab.hpp"

using namespace tiltlab;

TEST_SUITE("asym1d") {
  TEST_CASE("karamata ratio") {
    const DistributionModel u = ScalarModel::uniform01();
    CHECK(karamata_ratio(u, 1e3) == doctest::Approx(1.0).epsilon(0.01));
    // Exact value (1 - e^{-theta}).
    CHECK(karamata_ratio(u, 20.0) == doctest::Approx(-std::expm1(-20.0)).epsilon(1e-12));
    const DistributionModel b = ScalarModel::beta(2, 5);
    const double theta = 1e3;
    const double mgf = oracle::integrate(
        [&](double x) { return std::exp(theta * (x - 1)) * oracle::beta_pdf(2, 5, x); }, 0, 1);
    const double ref = mgf / boost::math::ibetac(2.0, 5.0, 1.0 - 1.0 / theta);
    CHECK(karamata_ratio(b, theta) == doctest::Approx(ref).epsilon(1e-8));
    CHECK(karamata_ratio(b, theta) == doctest::Approx(120.0).epsilon(0.03));
    CHECK(karamata_limit(5.0) == doctest::Approx(120.0));
    CHECK(check_karamata(u, {1e2, 1e3, 1e4}).converged);
    CHECK(check_karamata(b, {1e2, 1e3, 1e4}).converged);
  }

  TEST_CASE("second moment asymptote") {
    const DistributionModel u = ScalarModel::uniform01();
    const double mt = m_theta_analytic(u, TiltSpec::scalar(1e3));
    CHECK(mt / 1e3 == doctest::Approx(0.5).epsilon(0.01));
    CHECK(m_theta_limit_1d(5.0) == doctest::Approx(1.0 / 3840.0).epsilon(1e-14));
    const DistributionModel b = ScalarModel::beta(2, 5);
    CHECK(m_theta_asymptote_1d(b, 2000.0) == doctest::Approx(1.0 / 3840.0).epsilon(0.05));
    CHECK(check_m_theta_1d(b, {250, 1000, 4000}).converged);
    CHECK_THROWS_AS(m_theta_asymptote_1d(u, 0.0), InvalidArgument);
    CHECK_THROWS_AS(karamata_ratio(DistributionModel(ScalarModel::exponential(1)), 10.0), InvalidArgument);
  }

  TEST_CASE("tail fraction") {
    const DistributionModel u = ScalarModel::uniform01();
    CHECK(tail_fraction(u, 1e3, std::log(2.0)) == doctest::Approx(0.5).epsilon(0.01));
    const DistributionModel b = ScalarModel::beta(2, 5);
    CHECK(tail_fraction(b, 1e3, 50.0) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(tail_fraction(b, 1e3, 5.0) == doctest::Approx(oracle::gamma_cdf(5, 5)).epsilon(0.03));
    CHECK(tail_fraction_limit(5, 5) == doctest::Approx(oracle::gamma_cdf(5, 5)).epsilon(1e-12));
  }

  TEST_CASE("gamma limit target") {
    const auto g1 = gamma_limit_target(1.0);
    CHECK(g1.cdf(std::log(2.0)) == doctest::Approx(0.5).epsilon(1e-14));
    const auto g5 = gamma_limit_target(5.0);
    const auto d = g5.sample(1'000'000, 17).flat();
    CHECK(std::accumulate(d.begin(), d.end(), 0.0) / 1e6 == doctest::Approx(5.0).epsilon(0.002));
    for (int i = 1; i <= 20; ++i) {
      const double x = 0.75 * i;
      const double ref = oracle::integrate([&](double t) { return g5.pdf(t); }, 0.0, x);
      CHECK(std::abs(g5.cdf(x) - ref) < 1e-8);
    }
  }

  TEST_CASE("unbounded or non-power tails are rejected") {
    const DistributionModel n = ScalarModel::std_normal();
    CHECK_THROWS(tail_fraction(n, 10.0, 1.0));
  }
}
