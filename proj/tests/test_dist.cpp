#include <doctest.h>

#include <array>
#include <numeric>

#include "oracles.hpp"
#include "tiltlab/tiltlab.hpp"

using namespace tiltlab;

TEST_SUITE("dist") {
  TEST_CASE("fair die frequencies") {
    const DistributionModel die = ScalarModel::discrete_uniform({1, 2, 3, 4, 5, 6});
    const auto s = die.sample(6'000'000, 7);
    std::array<double, 6> counts{};
    for (double v : s.flat()) counts[static_cast<std::size_t>(v) - 1] += 1.0;
    for (double c : counts) CHECK(std::abs(c / 6e6 - 1.0 / 6.0) < 0.002);
  }

  TEST_CASE("sampling is a pure function of the seed") {
    const DistributionModel u = ScalarModel::uniform01();
    CHECK(u.sample(1000, 42) == u.sample(1000, 42));
    CHECK_FALSE(u.sample(1000, 42) == u.sample(1000, 43));
  }

  TEST_CASE("Beta(2,5) sample mean") {
    const DistributionModel b = ScalarModel::beta(2, 5);
    const auto s = b.sample(1'000'000, 11);
    const double mean = std::accumulate(s.flat().begin(), s.flat().end(), 0.0) / 1e6;
    CHECK(std::abs(mean - 2.0 / 7.0) < 0.005);
  }

  TEST_CASE("uniform quantile spacing at the top") {
    const auto u = ScalarModel::uniform01();
    for (double n : {10.0, 1e3, 1e6}) CHECK(1.0 - u.quantile(1.0 - 1.0 / n) == doctest::Approx(1.0 / n).epsilon(1e-9));
    CHECK(ScalarModel::exponential(1).cdf(0.0) == 0.0);
  }

  TEST_CASE("Beta(2,5) cdf against integrated density") {
    const auto b = ScalarModel::beta(2, 5);
    for (int i = 1; i <= 20; ++i) {
      const double x = i / 21.0;
      const double ref = oracle::integrate([](double t) { return oracle::beta_pdf(2, 5, t); }, 0.0, x);
      CHECK(std::abs(b.cdf(x) - ref) < 1e-8);
      CHECK(std::abs(b.cdf(x) - oracle::beta_cdf(2, 5, x)) < 1e-12);
    }
  }

  TEST_CASE("quantile inverts cdf") {
    for (const auto& m : {ScalarModel::beta(2, 5), ScalarModel::exponential(3), ScalarModel::trunc_normal(0, 1, 0.5),
                          ScalarModel::trunc_exp(1, 1), ScalarModel::squared_uniform(), ScalarModel::gen_normal(4, 1)}) {
      for (double p : {1e-6, 0.01, 0.3, 0.5, 0.9, 1 - 1e-6}) CHECK(m.cdf(m.quantile(p)) == doctest::Approx(p).epsilon(1e-9));
    }
  }

  TEST_CASE("weibull tail") {
    const DistributionModel u = ScalarModel::uniform01();
    for (double v : {1e-6, 0.1, 0.5, 1.0}) CHECK(dist::weibull_tail(u, v) == doctest::Approx(v).epsilon(1e-12));
    const DistributionModel b = ScalarModel::beta(2, 5);
    CHECK(dist::weibull_tail(b, 2e-3) / dist::weibull_tail(b, 1e-3) == doctest::Approx(32.0).epsilon(0.01));
    const DistributionModel te = ScalarModel::trunc_exp(1, 1);
    CHECK(dist::weibull_tail(te, 3e-6) / dist::weibull_tail(te, 1e-6) == doctest::Approx(3.0).epsilon(0.01));
  }

  TEST_CASE("TwoDExample marginals") {
    const auto m = DistributionModel::two_d_example();
    CHECK(m.dim() == 2);
    const std::array<double, 2> x{0.5, 0.25};
    // P(U <= 0.5) P(V^2 <= 0.25) = 0.5 * 0.5
    CHECK(m.orthant_cdf(x) == doctest::Approx(0.25));
  }

  TEST_CASE("invalid parameters are rejected") {
    CHECK_THROWS_AS(ScalarModel::beta(-1, 2).cdf(0.5), InvalidArgument);
    CHECK_THROWS_AS(ScalarModel::exponential(0).cdf(0.5), InvalidArgument);
    CHECK_THROWS_AS(ScalarModel::uniform01().quantile(1.5), InvalidArgument);
  }
}
