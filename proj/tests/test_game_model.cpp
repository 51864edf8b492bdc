#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "sbg/errors.hpp"
#include "sbg/game_model.hpp"
#include "test_support.hpp"

using namespace sbg;

TEST_CASE("bundled case study loads with the published table entries") {
  const GameSpec s = load_spec(testing::data_path("case_study.json"));
  CHECK(s == case_study_spec());
  CHECK_NOTHROW(validate(s));
  CHECK(s.num_k == 3);
  CHECK(s.num_l == 2);
  CHECK(s.p0 == std::vector<double>{0.5, 0.3, 0.2});
  CHECK(s.q0 == std::vector<double>{0.5, 0.5});
  CHECK(s.g(1, 1, 0, 0) == doctest::Approx(24.89));
  CHECK(s.p_trans(0, 0, 1, 1) == doctest::Approx(0.4));
  CHECK(s.q_trans(0, 0, 1, 1) == doctest::Approx(0.5));
  CHECK(g_bar(s) == doctest::Approx(154.4));
}

TEST_CASE("g_bar is the largest entry") {
  CHECK(g_bar(testing::constant_spec(2, 2, 2, 2, 0.0, 0.5, 2)) == 0.0);
  CHECK(g_bar(testing::constant_spec(2, 3, 2, 1, 7.0, 0.5, 2)) == 7.0);
  testing::Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    const GameSpec s = testing::random_small_spec(rng, 3, 3, 0.5, 3);
    const double m = g_bar(s);
    bool attained = false;
    for (double g : s.payoff) {
      CHECK(g <= m);
      attained = attained || g == m;
    }
    CHECK(attained);
  }
}

TEST_CASE("validation rejects broken invariants") {
  GameSpec s = case_study_spec();
  SUBCASE("negative payoff") {
    s.g(0, 1, 1, 0) = -1.0;
    CHECK_THROWS_AS(validate(s), ValidationError);
  }
  SUBCASE("transition row summing to 0.9") {
    s.p_trans(1, 0, 2, 0) -= 0.1;
    CHECK_THROWS_AS(validate(s), ValidationError);
  }
  SUBCASE("initial distribution off the simplex") {
    s.q0 = {0.6, 0.6};
    CHECK_THROWS_AS(validate(s), ValidationError);
  }
  SUBCASE("lambda outside (0,1]") {
    s.lambda = 0.0;
    CHECK_THROWS_AS(validate(s), ValidationError);
    s.lambda = 1.5;
    CHECK_THROWS_AS(validate(s), ValidationError);
  }
  SUBCASE("lambda one with a finite horizon is fine") {
    s.lambda = 1.0;
    CHECK_NOTHROW(validate(s));
  }
  SUBCASE("nonpositive horizon") {
    s.horizon = 0;
    CHECK_THROWS_AS(validate(s), ValidationError);
  }
}

TEST_CASE("random specs validate and round-trip bit-exactly") {
  testing::Rng rng(11);
  const auto dir = std::filesystem::temp_directory_path() / "sbg_game_model_test";
  std::filesystem::create_directories(dir);
  for (int i = 0; i < 25; ++i) {
    const GameSpec s = testing::random_small_spec(rng, 3, 3, 0.1 + 0.8 * (i % 5) / 4.0, 1 + i % 4);
    CHECK_NOTHROW(validate(s));
    CHECK(parse_spec(serialize_spec(s)) == s);
    const auto path = dir / ("spec" + std::to_string(i) + ".json");
    save_spec(s, path);
    CHECK(load_spec(path) == s);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("malformed files are parse errors, invalid games validation errors") {
  const std::string text = serialize_spec(case_study_spec());
  CHECK_THROWS_AS(parse_spec(text.substr(0, text.size() / 2)), ParseError);
  CHECK_THROWS_AS(parse_spec("[1, 2, 3]"), ParseError);
  CHECK_THROWS_AS(parse_spec(R"({"num_k": 1})"), ParseError);

  GameSpec bad = case_study_spec();
  bad.g(0, 0, 0, 0) = -3.0;
  CHECK_THROWS_AS(parse_spec(serialize_spec(bad)), ValidationError);

  CHECK_THROWS_AS(load_spec("/nonexistent/dir/spec.json"), IoError);
}
