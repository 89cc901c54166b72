#include <doctest.h>

#include <array>
#include <boost/multiprecision/cpp_dec_float.hpp>

#include "oracles.hpp"
#include "tiltlab/tiltlab.hpp"

using namespace tiltlab;

TEST_SUITE("tilt") {
  TEST_CASE("zero tilt gives uniform weights") {
    const auto s = DistributionModel(ScalarModel::uniform01()).sample(100, 1);
    const auto we = snis_weights(s, TiltSpec::scalar(0.0));
    for (double w : we.weights()) CHECK(w == doctest::Approx(0.01).epsilon(1e-14));
    CHECK(m_theta_empirical(s, TiltSpec::scalar(0.0)) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(max_weight_stat(we) == doctest::Approx(0.01));
  }

  TEST_CASE("two-point weights") {
    const auto s = SampleSet::scalar({1.0, 2.0});
    const auto we = snis_weights(s, TiltSpec::scalar(std::log(2.0)));
    CHECK(we.weights()[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(we.weights()[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(m_theta_empirical(s, TiltSpec::scalar(std::log(2.0))) == doctest::Approx(10.0 / 9.0).epsilon(1e-14));
    CHECK(weighted_cdf(we, 1.5) == doctest::Approx(1.0 / 3.0));
  }

  TEST_CASE("weights at theta 300 against 50-digit arithmetic") {
    using big = boost::multiprecision::cpp_dec_float_50;
    const auto s = DistributionModel(ScalarModel::uniform01()).sample(2000, 5);
    const auto we = snis_weights(s, TiltSpec::scalar(300.0));
    std::vector<big> e(s.size());
    big total = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      e[i] = boost::multiprecision::exp(big(300) * big(s[i][0]));
      total += e[i];
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double ref = static_cast<double>(e[i] / total);
      if (ref < 1e-300) continue;
      worst = std::max(worst, std::abs(we.weights()[i] - ref) / ref);
    }
    CHECK(worst < 1e-10);
  }

  TEST_CASE("weighted cdf against brute force") {
    const auto s = DistributionModel(ScalarModel::exponential(1)).sample(500, 3);
    const auto we = snis_weights(s, TiltSpec::scalar(0.4));
    const DistributionModel u = ScalarModel::uniform01();
    const auto q = u.sample(100, 4);
    for (std::size_t k = 0; k < q.size(); ++k) {
      const double x = 4.0 * q[k][0];
      double ref = 0.0;
      for (std::size_t i = 0; i < s.size(); ++i)
        if (s[i][0] <= x) ref += we.weights()[i];
      CHECK(weighted_cdf(we, x) == doctest::Approx(ref).epsilon(1e-12));
    }
    const WeightedEmpirical one(SampleSet::scalar({0.0}), {1.0});
    CHECK(weighted_cdf(one, 0.0) == 1.0);
  }

  TEST_CASE("resampling") {
    const WeightedEmpirical one(SampleSet::scalar({2.5}), {1.0});
    const auto same = resample(one, 50, 1);
    for (double v : same.flat()) CHECK(v == 2.5);

    const WeightedEmpirical two(SampleSet::scalar({1.0, 2.0}), {1.0 / 3.0, 2.0 / 3.0});
    const auto r = resample(two, 300'000, 9);
    const double f1 = std::count(r.flat().begin(), r.flat().end(), 1.0) / 3e5;
    CHECK(std::abs(f1 - 1.0 / 3.0) < 0.005);

    // theta = 0 is the ordinary bootstrap.
    const std::size_t n = 20, m = 200'000;
    const auto pts = DistributionModel(ScalarModel::uniform01()).sample(n, 2);
    const auto boot = resample(snis_weights(pts, TiltSpec::scalar(0.0)), m, 3);
    const double sd = std::sqrt(m * (1.0 / n) * (1 - 1.0 / n));
    for (std::size_t i = 0; i < n; ++i) {
      const double hits = std::count(boot.flat().begin(), boot.flat().end(), pts[i][0]);
      CHECK(std::abs(hits - static_cast<double>(m) / n) < 3.5 * sd);
    }
    CHECK(resample(two, 100, 5) == resample(two, 100, 5));
  }

  TEST_CASE("m_theta empirical and analytic") {
    const DistributionModel e1 = ScalarModel::exponential(1);
    const auto s = e1.sample(1'000'000, 8);
    const double want = 0.7 * 0.7 / 0.4;
    CHECK(m_theta_empirical(s, TiltSpec::scalar(0.3)) == doctest::Approx(want).epsilon(0.02));
    CHECK(m_theta_analytic(e1, TiltSpec::scalar(0.3)) == doctest::Approx(want).epsilon(1e-14));
    CHECK(m_theta_analytic(e1, TiltSpec::scalar(0.4)) == doctest::Approx(1.8).epsilon(1e-14));
    CHECK_THROWS_AS(m_theta_analytic(e1, TiltSpec::scalar(0.5)), DivergentMoment);

    const DistributionModel die = ScalarModel::discrete_uniform({1, 2, 3, 4, 5, 6});
    CHECK(m_theta_analytic(die, TiltSpec::scalar(0.0)) == doctest::Approx(1.0).epsilon(1e-15));

    for (double c : {0.5, 2.0, 4.0})
      CHECK(m_theta_analytic(DistributionModel::std_normal_vec(1), TiltSpec::scalar(c)) ==
            doctest::Approx(std::exp(c * c)).epsilon(1e-12));
  }

  TEST_CASE("m_theta by quadrature matches an independent integral") {
    const DistributionModel b = ScalarModel::beta(2, 5);
    for (double theta : {1.0, 10.0, 50.0}) {
      auto mom = [&](double s) {
        return oracle::integrate([&](double x) { return std::exp(s * theta * (x - 1)) * oracle::beta_pdf(2, 5, x); }, 0,
                                 1);
      };
      const double ref = mom(2) / (mom(1) * mom(1));
      CHECK(m_theta_analytic(b, TiltSpec::scalar(theta)) == doctest::Approx(ref).epsilon(1e-9));
    }
    // Power tilt x^2 on Uniform01 equals the identity tilt on V^2.
    const double a = m_theta_analytic(ScalarModel::uniform01(), TiltSpec::power({3.0}, {2.0}));
    const double c = m_theta_analytic(ScalarModel::squared_uniform(), TiltSpec::scalar(3.0));
    CHECK(a == doctest::Approx(c).epsilon(1e-10));
  }

  TEST_CASE("product families factorize") {
    const auto prod = DistributionModel::product({ScalarModel::uniform01(), ScalarModel::exponential(2)});
    const double m = m_theta_analytic(prod, TiltSpec::identity({1.5, 0.5}));
    const double m1 = m_theta_analytic(ScalarModel::uniform01(), TiltSpec::scalar(1.5));
    const double m2 = m_theta_analytic(ScalarModel::exponential(2), TiltSpec::scalar(0.5));
    CHECK(m == doctest::Approx(m1 * m2).epsilon(1e-12));
  }

  TEST_CASE("tilted cdf") {
    const TiltedCdf f(ScalarModel::exponential(5), TiltSpec::scalar(2));
    for (double x : {0.1, 0.5, 1.0}) CHECK(f(x) == doctest::Approx(-std::expm1(-3 * x)).epsilon(1e-12));
    const TiltedCdf g(ScalarModel::beta(2, 5), TiltSpec::scalar(20));
    const double z = oracle::integrate([](double x) { return std::exp(20 * (x - 1)) * oracle::beta_pdf(2, 5, x); }, 0, 1);
    for (double x : {0.3, 0.6, 0.9}) {
      const double num =
          oracle::integrate([](double t) { return std::exp(20 * (t - 1)) * oracle::beta_pdf(2, 5, t); }, 0, x);
      CHECK(g(x) == doctest::Approx(num / z).epsilon(1e-9));
    }
  }

  TEST_CASE("theta dimension must match the data") {
    const auto s = DistributionModel::two_d_example().sample(10, 1);
    CHECK_THROWS_AS(snis_weights(s, TiltSpec::scalar(1.0)), InvalidArgument);
  }
}
