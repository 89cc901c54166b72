#include <doctest.h>

#include <array>
#include <cmath>

#include "tiltlab/tiltlab.hpp"

using namespace tiltlab;

namespace {
double unif_cdf(double x) { return std::clamp(x, 0.0, 1.0); }
}  // namespace

TEST_SUITE("diagnostics") {
  TEST_CASE("one-dimensional KS") {
    const WeightedEmpirical atom(SampleSet::scalar({0.0}), {1.0});
    CHECK(ks_1d(atom, unif_cdf) == doctest::Approx(1.0));
    const WeightedEmpirical two(SampleSet::scalar({0.0, 1.0}), {0.5, 0.5});
    CHECK(ks_1d(two, unif_cdf) == doctest::Approx(0.5));
  }

  TEST_CASE("KS against a fine grid scan") {
    const auto s = DistributionModel(ScalarModel::beta(2, 2)).sample(300, 5);
    const auto we = snis_weights(s, TiltSpec::scalar(1.7));
    const double exact = ks_1d(we, unif_cdf);
    const std::size_t g = 1'000'000;
    double grid = 0.0;
    for (std::size_t i = 0; i <= g; ++i) {
      const double x = double(i) / g;
      grid = std::max(grid, std::abs(weighted_cdf(we, x) - x));
    }
    CHECK(grid <= exact + 1e-15);
    CHECK(exact <= grid + 1.0 / g);
  }

  TEST_CASE("KS is invariant under increasing relabeling") {
    const auto s = DistributionModel(ScalarModel::uniform01()).sample(500, 6);
    const auto we = snis_weights(s, TiltSpec::scalar(2.0));
    SampleSet cubed(1);
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double v = std::pow(s[i][0], 3);
      cubed.push_back(std::span(&v, 1));
    }
    const WeightedEmpirical we3(cubed, we.weights());
    CHECK(ks_1d(we3, [](double y) { return unif_cdf(std::cbrt(y)); }) ==
          doctest::Approx(ks_1d(we, unif_cdf)).epsilon(1e-12));
  }

  TEST_CASE("two-sample KS") {
    const std::vector<double> a{0.1, 0.4, 0.2};
    CHECK(ks_two_sample(a, a) == 0.0);
    CHECK(ks_two_sample(a, std::vector<double>{2.0, 3.0}) == 1.0);
    const DistributionModel u = ScalarModel::uniform01();
    const double crit = 1.36 * std::sqrt(2.0 / 1e4) * 1.5;
    int below = 0;
    for (std::uint64_t r = 0; r < 200; ++r)
      below += ks_two_sample(u.sample(10'000, derive_seed(1, r)).flat(), u.sample(10'000, derive_seed(2, r)).flat()) < crit;
    CHECK(below >= 190);
  }

  TEST_CASE("rectangle KS in two dimensions") {
    const auto prod = DistributionModel::product({ScalarModel::uniform01(), ScalarModel::exponential(1)});
    const auto s = prod.sample(1'000'000, 7);
    const auto we = snis_weights(s, TiltSpec::identity({0.0, 0.0}));
    const std::array<double, 2> lo{0, 0}, hi{1, 4};
    auto G = [&](std::span<const double> x) { return prod.orthant_cdf(x); };
    CHECK(ks_rect_hd(we, G, lo, hi, 16).statistic < 0.01);

    SampleSet pt(2);
    pt.push_back(std::array<double, 2>{0.5, 2.0});
    const WeightedEmpirical mass(pt, {1.0});
    const auto r = ks_rect_hd(mass, G, lo, hi, 8);
    const std::array<double, 2> at{0.5, 2.0};
    CHECK(r.statistic >= 1.0 - prod.orthant_cdf(at) - 1e-15);

    const auto small = snis_weights(prod.sample(400, 8), TiltSpec::identity({1.0, 0.3}));
    CHECK(ks_rect_hd(small, G, lo, hi, 16).statistic >= ks_rect_hd(small, G, lo, hi, 8).statistic);
  }

  TEST_CASE("rectangle KS against brute force in three dimensions") {
    const auto prod = DistributionModel::product({ScalarModel::uniform01(), ScalarModel::exponential(2),
                                                  ScalarModel::beta(2, 5)});
    const auto we = snis_weights(prod.sample(700, 12), TiltSpec::identity({0.5, 1.0, 3.0}));
    const std::array<double, 3> lo{0.1, 0.0, 0.05}, hi{0.9, 3.0, 0.8};
    auto G = [&](std::span<const double> x) { return prod.orthant_cdf(x); };
    const std::size_t k = 5;
    double brute = 0.0;
    for (std::size_t a = 1; a <= k; ++a)
      for (std::size_t b = 1; b <= k; ++b)
        for (std::size_t c = 1; c <= k; ++c) {
          const std::array<double, 3> x{lo[0] + (hi[0] - lo[0]) * a / k, lo[1] + (hi[1] - lo[1]) * b / k,
                                        lo[2] + (hi[2] - lo[2]) * c / k};
          brute = std::max(brute, std::abs(weighted_cdf(we, x) - G(x)));
        }
    const auto r = ks_rect_hd(we, G, lo, hi, k);
    CHECK(r.statistic == doctest::Approx(brute).epsilon(1e-12));
    CHECK(r.evaluations == k * k * k);
  }

  TEST_CASE("regime classification") {
    std::vector<std::pair<double, double>> exp_sched;
    for (double n = 1e2; n <= 1e8; n *= 10) {
      const double rn = std::sqrt(n);
      exp_sched.emplace_back(n, (rn + 2) * (rn + 2) / (8 * rn));
    }
    const auto r = regime_classify(exp_sched);
    CHECK(r.regime == Regime::Accurate);
    CHECK(r.admissible_rate_exponent == doctest::Approx(0.25).epsilon(0.04));

    // Fair die with theta = log(n)/12. The true second-moment ratio tends
    // to 6, so the admissible exponent is 1/2. Feeding E[e^{theta X}] in
    // place of M gives the smaller exponent (1 - 6C)/2 = 1/4.
    const DistributionModel die = ScalarModel::discrete_uniform({1, 2, 3, 4, 5, 6});
    std::vector<std::pair<double, double>> true_m, mgf;
    for (double n = 1e4; n <= 1e12; n *= 10) {
      const double theta = std::log(n) / 12.0;
      true_m.emplace_back(n, m_theta_analytic(die, TiltSpec::scalar(theta)));
      double e = 0;
      for (int i = 1; i <= 6; ++i) e += std::exp(theta * i) / 6.0;
      mgf.emplace_back(n, e);
    }
    const auto rt = regime_classify(true_m);
    CHECK(rt.regime == Regime::Accurate);
    CHECK(rt.admissible_rate_exponent == doctest::Approx(0.5).epsilon(0.05));
    CHECK(regime_classify(mgf).admissible_rate_exponent == doctest::Approx(0.25).epsilon(0.04));

    const auto rc = regime_classify({{100, 100}, {1000, 1000}, {1e4, 1e4}});
    CHECK(rc.regime == Regime::Critical);
    CHECK(rc.admissible_rate_exponent == 0.0);
    const auto ru = regime_classify({{100, 1e4}, {1000, 1e6}, {1e4, 1e8}});
    CHECK(ru.regime == Regime::Undersampled);
    CHECK(to_string(Regime::Accurate) == "accurate");
  }
}
