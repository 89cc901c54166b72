#include <doctest.h>

#include <array>

#include "oracles.hpp"
#include "tiltlab/tiltlab.hpp"

using namespace tiltlab;

namespace {
const double kInf = std::numeric_limits<double>::infinity();
}

TEST_SUITE("asymhd") {
  TEST_CASE("maximizer") {
    const std::array<double, 2> ones{1, 1}, t23{2, 3}, t10{1, 0};
    CHECK(maximizer(DistributionModel::two_d_example(), ones) == std::vector<double>{1, 1});
    const auto box = DistributionModel::product({ScalarModel::uniform01(), ScalarModel::uniform01()});
    CHECK(maximizer(box, t23) == std::vector<double>{1, 1});
    CHECK_THROWS_AS(maximizer(box, t10), AssumptionViolated);
  }

  TEST_CASE("limit measure of rectangles") {
    const MvrvModel mv(DistributionModel::two_d_example(), {1, 1});
    CHECK(mv.alpha() == doctest::Approx(2.0));
    CHECK(nu_rect(mv, Rect{{0, 0}, {1, 2}}) == doctest::Approx(1.0).epsilon(1e-14));
    const Rect r{{0.2, 0.1}, {0.7, 1.3}};
    const Rect r2{{0.4, 0.2}, {1.4, 2.6}};
    CHECK(nu_rect(mv, r2) == doctest::Approx(4.0 * nu_rect(mv, r)).epsilon(1e-13));
    CHECK(nu_rect(mv, Rect{{0.5, 0.5}, {0.5, 1.0}}) == 0.0);
  }

  TEST_CASE("pre-limit ratio") {
    const MvrvModel mv(DistributionModel::two_d_example(), {1, 1});
    const Rect unit{{0, 0}, {1, 1}};
    const double r = mvrv_ratio(mv, 1e-3, unit);
    CHECK(r == doctest::Approx(0.5).epsilon(0.01));
    // Direct evaluation: P(1-U <= t) P(1-V^2 <= t) / t^2.
    const double t = 1e-3;
    CHECK(r == doctest::Approx(t * (1 - std::sqrt(1 - t)) / (t * t)).epsilon(1e-12));
    CHECK(std::abs(mvrv_ratio(mv, 5e-4, unit) - 0.5) < std::abs(r - 0.5));

    const MvrvModel u1(ScalarModel::uniform01(), {1.0});
    for (double c : {0.5, 2.0, 7.0})
      for (double tt : {1.0 / c, 0.1 / c, 1e-5})
        CHECK(mvrv_ratio(u1, tt, Rect{{0}, {c}}) == doctest::Approx(c).epsilon(1e-12));

    const auto mc = mvrv_ratio_mc(mv, 0.05, unit, 2'000'000, 3);
    const double exact = mvrv_ratio(mv, 0.05, unit);
    CHECK(std::abs(mc.value - exact) < 4.0 * mc.std_error);
  }

  TEST_CASE("limit law of the scaled gap") {
    const MvrvModel mv(DistributionModel::two_d_example(), {1, 1});
    const std::array<double, 2> th{1, 1};
    const auto z = z_limit_target(mv, th);
    CHECK(z.kind() == LimitTarget::Kind::ProductGamma);
    CHECK(z.shapes() == std::vector<double>{1, 1});
    CHECK(z.rates() == std::vector<double>{1, 1});
    const std::array<double, 2> lo{0, 0}, hi{kInf, kInf};
    CHECK(z.rect_cdf(lo, hi) == doctest::Approx(1.0));
    const MvrvModel mb(DistributionModel::product({ScalarModel::beta(2, 5), ScalarModel::beta(3, 2)}), {2, 0.5});
    const std::array<double, 2> th2{2, 0.5};
    const auto zb = z_limit_target(mb, th2);
    for (double x : {0.1, 1.0, 3.0, 8.0}) {
      CHECK(std::abs(zb.marginal_cdf(0, x) - oracle::gamma_cdf(5, 2 * x)) < 1e-8);
      CHECK(std::abs(zb.marginal_cdf(1, x) - oracle::gamma_cdf(2, 0.5 * x)) < 1e-8);
    }
  }

  TEST_CASE("second moment growth in d = 2") {
    const auto two = DistributionModel::two_d_example();
    const MvrvModel mv(two, {1, 1});
    CHECK(m_theta_limit_hd(mv) == doctest::Approx(0.5).epsilon(1e-12));
    const double m200 = m_theta_asymptote_hd(mv, 200.0);
    CHECK(m200 == doctest::Approx(0.5).epsilon(0.02));
    CHECK(std::abs(m200 - 0.5) < std::abs(m_theta_asymptote_hd(mv, 100.0) - 0.5));

    const auto box = DistributionModel::product({ScalarModel::uniform01(), ScalarModel::uniform01()});
    const MvrvModel mb(box, {1, 1});
    CHECK(m_theta_limit_hd(mb) == doctest::Approx(0.25).epsilon(1e-12));
    // Independent check: M of a product of uniforms is the square of the 1-d value.
    const double c = 400.0;
    const double m1 = c / (2.0 * std::tanh(c / 2.0));
    CHECK(m_theta_asymptote_hd(mb, c) == doctest::Approx(m1 * m1 / (c * c)).epsilon(1e-10));
  }

  TEST_CASE("power map pushforward") {
    const MvrvModel u1(ScalarModel::uniform01(), {1.0});
    const auto same = g_pushforward(u1, {1.0});
    CHECK(same.rho() == u1.rho());
    CHECK(same.kappa() == u1.kappa());
    CHECK(same.scale() == u1.scale());

    const auto sq = g_pushforward(u1, {2.0});
    const double t = 1e-4;
    for (double y : {0.5, 1.0, 3.0}) {
      CHECK(nu_rect(sq, Rect{{0}, {y}}) == doctest::Approx(y / 2.0).epsilon(1e-12));
      // P(1 - X^2 <= t y) / t, directly.
      const double direct = (1.0 - std::sqrt(1.0 - t * y)) / t;
      CHECK(mvrv_ratio(sq, t, Rect{{0}, {y}}) == doctest::Approx(direct).epsilon(1e-9));
      CHECK(direct == doctest::Approx(y / 2.0).epsilon(1e-3));
      CHECK(nu_rect(sq, Rect{{0}, {3 * y}}) == doctest::Approx(3 * nu_rect(sq, Rect{{0}, {y}})).epsilon(1e-12));
    }
  }

  TEST_CASE("assumptions are enforced") {
    CHECK_THROWS_AS(MvrvModel(DistributionModel::two_d_example(), {-1, 1}), AssumptionViolated);
    CHECK_THROWS_AS(MvrvModel(DistributionModel::std_normal_vec(2), {1, 1}), InvalidArgument);
  }
}
