#include <doctest.h>

#include <cmath>

#include "sbg/best_response.hpp"
#include "sbg/errors.hpp"
#include "sbg/oracle.hpp"
#include "sbg/primal_solver.hpp"
#include "test_support.hpp"

using namespace sbg;

namespace {

double value(const GameSpec& s, const std::vector<double>& p, const std::vector<double>& q, int n, Side side) {
  return solve_primal(s, Belief(p), Belief(q), n, s.lambda, side).value;
}

double geometric(double c, double lambda, int n) {
  double sum = 0.0, d = 1.0;
  for (int t = 0; t < n; ++t, d *= lambda) sum += c * d;
  return sum;
}

int count_plan_vars(const SequenceBlock& b) { return b.value_offset[1] - b.plan_offset[1]; }

}  // namespace

TEST_CASE("LP sizes") {
  SUBCASE("smallest instance") {
    const GameSpec s = testing::constant_spec(1, 1, 1, 1, 2.0, 0.5, 1);
    for (const auto& prog : {build_primal_p1(s, Belief({1.0}), Belief({1.0}), 1, 0.5),
                             build_primal_p2(s, Belief({1.0}), Belief({1.0}), 1, 0.5)}) {
      CHECK(prog.lp.num_vars() == 2);
      CHECK(prog.lp.num_rows() == 2);
      int equalities = 0;
      for (const auto& r : prog.lp.rows()) equalities += r.relation == lp::Relation::Equal;
      CHECK(equalities == 1);
    }
  }
  SUBCASE("case study n = 1 and n = 2") {
    const GameSpec s = case_study_spec();
    const Belief p(s.p0), q(s.q0);
    CHECK(build_primal_p1(s, p, q, 1, 0.3).lp.num_vars() == 8);
    CHECK(build_primal_p2(s, p, q, 1, 0.3).lp.num_vars() == 2 * 2 + 3);
    const SequenceProgram two = build_primal_p1(s, p, q, 2, 0.3);
    CHECK(two.lp.num_vars() == 78 + 18);
    const SequenceProgram two_p2 = build_primal_p2(s, p, q, 2, 0.3);
    // S: |L||B| + |L|(|A||B||L|)|B| = 4 + 32; Z: |K| + |K|(|A||B||K|) = 3 + 36.
    CHECK(two_p2.lp.num_vars() == 36 + 39);
    // Rows: one flow row per own set, one responder row per (set, action).
    CHECK(two.lp.num_rows() == (3 + 36) + (2 + 16) * 2);
  }
}

TEST_CASE("case study value") {
  const GameSpec s = case_study_spec();
  CHECK(value(s, s.p0, s.q0, 1, Side::PlayerOne) == doctest::Approx(79.379317).epsilon(1e-7));
  CHECK(value(s, s.p0, s.q0, 2, Side::PlayerTwo) == doctest::Approx(103.631508).epsilon(1e-7));
  const PrimalResult r = solve_primal(s, Belief(s.p0), Belief(s.q0), 4, 0.3, Side::PlayerOne);
  CHECK(std::abs(r.value - 112.9049) <= 1e-3);
}

TEST_CASE("play-independent payoff gives the geometric sum") {
  testing::Rng rng(2);
  for (int i = 0; i < 10; ++i) {
    const int n = 1 + i % 3;
    const double c = 1.0 + i;
    const double lambda = 0.2 + 0.08 * i;
    GameSpec s = testing::constant_spec(1 + i % 3, 1 + (i + 1) % 2, 1 + i % 2, 2, c, lambda, n);
    s.p0 = testing::random_distribution(rng, s.num_k);
    for (Side side : {Side::PlayerOne, Side::PlayerTwo}) {
      CHECK(value(s, s.p0, s.q0, n, side) == doctest::Approx(geometric(c, lambda, n)).epsilon(1e-9));
    }
  }
}

TEST_CASE("both LP forms agree and match the oracle") {
  testing::Rng rng(21);
  for (int i = 0; i < 15; ++i) {
    const GameSpec s = testing::random_spec(rng, 2, 2, 2, 2, 0.3 + 0.05 * i, 2);
    const double v1 = value(s, s.p0, s.q0, 2, Side::PlayerOne);
    const double v2 = value(s, s.p0, s.q0, 2, Side::PlayerTwo);
    CHECK(std::abs(v1 - v2) <= 1e-5);
    CHECK(std::abs(v1 - oracle_value(s, Belief(s.p0), Belief(s.q0), 2, s.lambda)) <= 1e-5);
  }
}

TEST_CASE("results are internally consistent") {
  testing::Rng rng(8);
  for (int i = 0; i < 12; ++i) {
    const GameSpec s = testing::random_small_spec(rng, 3, 2, 0.6, 3);
    const int n = 1 + i % 3;
    const Belief p(s.p0), q(s.q0);
    for (Side side : {Side::PlayerOne, Side::PlayerTwo}) {
      const PrimalResult r = solve_primal(s, p, q, n, s.lambda, side);
      const Belief& opp = side == Side::PlayerOne ? q : p;
      double weighted = 0.0;
      for (std::size_t j = 0; j < opp.size(); ++j) weighted += opp[j] * r.weighted_payoffs[0][j];
      CHECK(std::abs(weighted - r.value) <= 1e-6);
      // Vector payoff consistency: opp . (-vector payoff) = v.
      double dot = 0.0;
      for (std::size_t j = 0; j < opp.size(); ++j) dot -= opp[j] * r.initial_vector_payoff[j];
      CHECK(std::abs(dot - r.value) <= 1e-5);
      // Security: a best response against the extracted strategy concedes v.
      const RealizationPlan plan = compose_plan(r.strategy, s, (side == Side::PlayerOne ? p : q).view());
      const double br = side == Side::PlayerOne ? best_response_vs_p1(s, plan, q, n, s.lambda).value
                                                : best_response_vs_p2(s, plan, p, n, s.lambda).value;
      CHECK(std::abs(br - r.value) <= 1e-5);
    }
  }
}

TEST_CASE("homogeneity of the player two objective") {
  testing::Rng rng(31);
  for (int i = 0; i < 6; ++i) {
    const GameSpec s = testing::random_small_spec(rng, 3, 2, 0.5, 2);
    const double base = value(s, s.p0, s.q0, 2, Side::PlayerTwo);
    for (double alpha : {0.5, 2.0}) {
      SequenceProgram prog = build_primal_p2(s, Belief(s.p0), Belief(s.q0), 2, s.lambda);
      for (int k = 0; k < s.num_k; ++k) prog.lp.set_objective(prog.block.value_var(1, k), alpha * s.p0[k]);
      CHECK(solve_bounded(prog.lp, "scaled").objective_value == doctest::Approx(alpha * base).epsilon(1e-9));
    }
  }
}

TEST_CASE("concave in p, convex in q") {
  testing::Rng rng(41);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const GameSpec s = testing::random_small_spec(rng, 3, 2, 0.5, 2);
    const int n = 1 + i % 2;
    const double theta = unit(rng);
    const auto p1 = testing::random_distribution(rng, s.num_k);
    const auto p2 = testing::random_distribution(rng, s.num_k);
    const auto q1 = testing::random_distribution(rng, s.num_l);
    const auto q2 = testing::random_distribution(rng, s.num_l);
    const double mixed_p = value(s, testing::mix(p1, p2, theta), s.q0, n, Side::PlayerOne);
    CHECK(mixed_p >= theta * value(s, p1, s.q0, n, Side::PlayerOne) +
                         (1 - theta) * value(s, p2, s.q0, n, Side::PlayerOne) - 1e-6);
    const double mixed_q = value(s, s.p0, testing::mix(q1, q2, theta), n, Side::PlayerTwo);
    CHECK(mixed_q <= theta * value(s, s.p0, q1, n, Side::PlayerTwo) +
                         (1 - theta) * value(s, s.p0, q2, n, Side::PlayerTwo) + 1e-6);
  }
}

TEST_CASE("value is nondecreasing in the horizon") {
  testing::Rng rng(51);
  for (int i = 0; i < 10; ++i) {
    const GameSpec s = testing::random_small_spec(rng, 3, 2, 0.7, 3);
    double prev = 0.0;
    for (int n = 1; n <= 3; ++n) {
      const double v = value(s, s.p0, s.q0, n, Side::PlayerOne);
      CHECK(v >= prev - 1e-6);
      prev = v;
    }
  }
}

TEST_CASE("strategy extraction") {
  const GameSpec s = testing::constant_spec(2, 1, 2, 1, 1.0, 0.5, 2);
  RealizationPlan plan;
  static_cast<SequenceTable&>(plan) = make_table(s, Side::PlayerOne, 2);
  const std::vector<double> p{0.25, 0.75};
  plan.at(1, 0, 0) = 0.6 * p[0];
  plan.at(1, 0, 1) = 0.4 * p[0];
  plan.at(1, 1, 0) = p[1];
  // Stage two: states reached after action 1 only carry mass.
  const SideIndex idx = plan.index();
  for (int id = 0; id < idx.count(2); ++id) {
    const int parent = idx.parent(2, id);
    const int a = idx.last_pair(2, id) / s.num_b;
    const double reach = s.p_trans(a, 0, idx.last_state(1, parent), idx.last_state(2, id)) * plan.at(1, parent, a);
    plan.at(2, id, 0) = 0.3 * reach;
    plan.at(2, id, 1) = 0.7 * reach;
  }
  const BehavioralStrategy x = extract_strategy(plan, s);
  CHECK(x.at(1, 0, 0) == doctest::Approx(0.6));
  CHECK(x.at(1, 0, 1) == doctest::Approx(0.4));
  CHECK(x.at(1, 1, 0) == doctest::Approx(1.0));
  for (int id = 0; id < idx.count(2); ++id) {
    const int a = idx.last_pair(2, id) / s.num_b;
    const bool reachable = plan.at(1, idx.parent(2, id), a) > 0.0;
    CHECK(x.at(2, id, 0) == doctest::Approx(reachable ? 0.3 : 0.5));
  }
}

TEST_CASE("extracted case study strategy recomposes to the plan") {
  const GameSpec s = case_study_spec();
  const PrimalResult r = solve_primal(s, Belief(s.p0), Belief(s.q0), 2, 0.3, Side::PlayerOne);
  const RealizationPlan back = compose_plan(r.strategy, s, s.p0);
  for (int t = 1; t <= 2; ++t) {
    for (std::size_t i = 0; i < back.stages[t - 1].size(); ++i) {
      CHECK(back.stages[t - 1][i] == doctest::Approx(r.plan.stages[t - 1][i]).epsilon(1e-9));
    }
    for (std::size_t i = 0; i < r.strategy.stages[t - 1].size(); i += 2) {
      CHECK(r.strategy.stages[t - 1][i] + r.strategy.stages[t - 1][i + 1] == doctest::Approx(1.0));
    }
  }
}

TEST_CASE("invalid arguments") {
  const GameSpec s = case_study_spec();
  const Belief p(s.p0), q(s.q0);
  CHECK_THROWS_AS(solve_primal(s, p, q, 0, 0.3, Side::PlayerOne), DomainError);
  CHECK_THROWS_AS(solve_primal(s, p, q, 2, 0.0, Side::PlayerOne), DomainError);
  CHECK_THROWS_AS(solve_primal(s, Belief({0.5, 0.5}), q, 2, 0.3, Side::PlayerOne), ValidationError);
  CHECK_THROWS_AS(solve_primal(s, p, q, 4, 0.3, Side::PlayerOne, 1000), CapacityError);
}
