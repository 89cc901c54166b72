#include <doctest.h>

#include <sstream>

#include "tiltlab/tiltlab.hpp"

using namespace tiltlab;

TEST_SUITE("io") {
  TEST_CASE("number formatting round-trips") {
    Rng rng(3);
    for (int i = 0; i < 10000; ++i) {
      const double v = std::ldexp(uniform_open(rng) - 0.5, static_cast<int>(rng() % 200) - 100);
      CHECK(io::parse_double(io::format_double(v)) == v);
    }
    CHECK_THROWS_AS(io::parse_double("1.2.3"), InvalidArgument);
  }

  TEST_CASE("model specs round-trip") {
    const std::vector<DistributionModel> models{
        ScalarModel::uniform01(),
        ScalarModel::beta(2, 5),
        ScalarModel::trunc_normal(0.5, 2, 1),
        ScalarModel::trunc_exp(1, 1),
        ScalarModel::exponential(5),
        ScalarModel::discrete_uniform({1, 2, 3}),
        ScalarModel::squared_uniform(),
        ScalarModel::gen_normal(4, 1),
        DistributionModel::std_normal_vec(3),
        DistributionModel::product({ScalarModel::uniform01(), ScalarModel::beta(3, 2)}),
        DistributionModel::two_d_example()};
    for (const auto& m : models) {
      const auto j = io::model_to_json(m);
      const auto back = io::model_from_json(j);
      CHECK(io::model_to_json(back) == j);
      CHECK(back.sample(20, 1) == m.sample(20, 1));
    }
    CHECK_THROWS_AS(io::model_from_json(nlohmann::json{{"family", "Cauchy"}}), InvalidArgument);
    CHECK_THROWS_AS(io::model_from_json(nlohmann::json{{"family", "Beta"}, {"params", {{"a", 1}}}}), InvalidArgument);
  }

  TEST_CASE("sample CSV round-trips") {
    const auto s = DistributionModel::two_d_example().sample(500, 2);
    std::stringstream buf;
    io::write_samples_csv(buf, s, {"x1", "x2"});
    CHECK(io::read_samples_csv(buf, 2) == s);

    std::stringstream headerless;
    io::write_samples_csv(headerless, s);
    CHECK(io::read_samples_csv(headerless) == s);
  }

  TEST_CASE("corrupt rows name their line") {
    std::stringstream bad("x\n1.0\n2.0\nabc\n4.0\n");
    try {
      io::read_samples_csv(bad);
      FAIL("expected an ingestion error");
    } catch (const IngestError& e) {
      CHECK(e.row() == 4);
      CHECK(std::string(e.what()).find("row 4") != std::string::npos);
    }
    std::stringstream ragged("1,2\n3\n");
    CHECK_THROWS_AS(io::read_samples_csv(ragged), IngestError);
    std::stringstream wrong_dim("1,2\n3,4\n");
    CHECK_THROWS_AS(io::read_samples_csv(wrong_dim, 3), IngestError);
    std::stringstream inf("1\ninf\n");
    CHECK_THROWS_AS(io::read_samples_csv(inf), IngestError);
  }

  TEST_CASE("weighted empirical round-trips") {
    const auto s = DistributionModel(ScalarModel::beta(2, 5)).sample(300, 4);
    const auto we = snis_weights(s, TiltSpec::scalar(20.0));
    std::stringstream buf;
    io::write_weighted_csv(buf, we);
    const auto back = io::read_weighted_csv(buf, we.log_normalizer());
    CHECK(back.points() == we.points());
    CHECK(back.weights() == we.weights());

    const auto j = io::weighted_to_json(we);
    const auto jb = io::weighted_from_json(nlohmann::json::parse(j.dump()));
    CHECK(jb.weights() == we.weights());
    CHECK(jb.log_normalizer() == we.log_normalizer());
  }

  TEST_CASE("schedule pairs") {
    std::stringstream buf("n,M\n100,2.5\n1000,3.5\n");
    const auto rows = io::read_pairs_csv(buf);
    REQUIRE(rows.size() == 2);
    CHECK(rows[1] == std::pair<double, double>{1000, 3.5});
  }
}
