#include <doctest.h>

#include <cmath>

#include "sbg/best_response.hpp"
#include "sbg/oracle.hpp"
#include "sbg/primal_solver.hpp"
#include "test_support.hpp"

using namespace sbg;

namespace {

BehavioralStrategy random_strategy(testing::Rng& rng, const GameSpec& s, Side side, int n) {
  BehavioralStrategy x;
  static_cast<SequenceTable&>(x) = make_table(s, side, n);
  for (auto& stage : x.stages)
    for (std::size_t i = 0; i < stage.size(); i += x.num_actions) {
      const auto d = testing::random_distribution(rng, x.num_actions);
      std::copy(d.begin(), d.end(), stage.begin() + i);
    }
  return x;
}

// Expected payoff of a behavioral strategy of player one against a pure
// strategy of player two, by forward evaluation over state chains.
double play(const GameSpec& s, const BehavioralStrategy& x, const PureStrategy& y, int t, int i, int j,
            double discount) {
  const SideIndex own(s.num_k, s.num_pairs(), x.depth), opp(s.num_l, s.num_pairs(), x.depth);
  const int k = own.last_state(t, i), l = opp.last_state(t, j), b = y[t - 1][j];
  double v = 0.0;
  for (int a = 0; a < s.num_a; ++a) {
    const double pa = x.at(t, i, a);
    if (pa == 0.0) continue;
    double inner = discount * s.g(k, l, a, b);
    if (t < x.depth) {
      const int pair = s.pair_index(a, b);
      for (int k2 = 0; k2 < s.num_k; ++k2)
        for (int l2 = 0; l2 < s.num_l; ++l2)
          inner += s.p_trans(a, b, k, k2) * s.q_trans(a, b, l, l2) *
                   play(s, x, y, t + 1, own.child(t, i, pair, k2), opp.child(t, j, pair, l2), discount * s.lambda);
    }
    v += pa * inner;
  }
  return v;
}

}  // namespace

TEST_CASE("best response value equals exhaustive minimization over pure responses") {
  testing::Rng rng(71);
  for (int i = 0; i < 10; ++i) {
    const GameSpec s = testing::random_spec(rng, 2, 2, 2, 2, 0.6, 2);
    const BehavioralStrategy x = random_strategy(rng, s, Side::PlayerOne, 2);
    double best = 1e300;
    for (const PureStrategy& y : enumerate_pure_strategies(s, Side::PlayerTwo, 2)) {
      double total = 0.0;
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) total += s.p0[k] * s.q0[l] * play(s, x, y, 1, k, l, 1.0);
      best = std::min(best, total);
    }
    const RealizationPlan plan = compose_plan(x, s, s.p0);
    CHECK(best_response_vs_p1(s, plan, Belief(s.q0), 2, s.lambda).value == doctest::Approx(best).epsilon(1e-9));
    CHECK(best_response_recursive(s, plan, s.q0, s.lambda).value == doctest::Approx(best).epsilon(1e-9));
  }
}

TEST_CASE("play-independent payoff: any plan concedes the geometric sum") {
  testing::Rng rng(72);
  const GameSpec s = testing::constant_spec(2, 3, 2, 2, 4.0, 0.5, 3);
  for (int i = 0; i < 3; ++i) {
    const RealizationPlan r = compose_plan(random_strategy(rng, s, Side::PlayerOne, 3), s, s.p0);
    const RealizationPlan q = compose_plan(random_strategy(rng, s, Side::PlayerTwo, 3), s, s.q0);
    CHECK(best_response_vs_p1(s, r, Belief(s.q0), 3, 0.5).value == doctest::Approx(7.0));
    CHECK(best_response_vs_p2(s, q, Belief(s.p0), 3, 0.5).value == doctest::Approx(7.0));
  }
}

TEST_CASE("security levels sandwich the value") {
  testing::Rng rng(73);
  for (int i = 0; i < 10; ++i) {
    const GameSpec s = testing::random_small_spec(rng, 3, 2, 0.5, 2);
    const int n = 1 + i % 2;
    const double v = solve_primal(s, Belief(s.p0), Belief(s.q0), n, s.lambda, Side::PlayerOne).value;
    const RealizationPlan r = compose_plan(random_strategy(rng, s, Side::PlayerOne, n), s, s.p0);
    const RealizationPlan q = compose_plan(random_strategy(rng, s, Side::PlayerTwo, n), s, s.q0);
    CHECK(best_response_vs_p1(s, r, Belief(s.q0), n, s.lambda).value <= v + 1e-5);
    CHECK(best_response_vs_p2(s, q, Belief(s.p0), n, s.lambda).value >= v - 1e-5);
  }
}

TEST_CASE("weighted payoffs satisfy the backward recursion") {
  testing::Rng rng(74);
  for (int i = 0; i < 6; ++i) {
    const GameSpec s = testing::random_small_spec(rng, 3, 2, 0.5, 2);
    const RealizationPlan plan = compose_plan(random_strategy(rng, s, Side::PlayerOne, 2), s, s.p0);
    const BestResponseResult lp = best_response_vs_p1(s, plan, Belief(s.q0), 2, s.lambda);
    const BestResponseResult rec = best_response_recursive(s, plan, s.q0, s.lambda);
    const SideIndex opp(s.num_l, s.num_pairs(), 2);
    for (int t = 1; t <= 2; ++t)
      for (int j = 0; j < opp.count(t); ++j)
        CHECK(lp.weighted_payoffs[t - 1][j] == doctest::Approx(rec.weighted_payoffs[t - 1][j]).epsilon(1e-9));
    // U_{J_1} = min_b [stage payoff + sum over pairs and transitions of U_{J_2}].
    for (int l = 0; l < s.num_l; ++l) {
      double best = 1e300;
      for (int b = 0; b < s.num_b; ++b) {
        double total = 0.0;
        for (int k = 0; k < s.num_k; ++k)
          for (int a = 0; a < s.num_a; ++a) total += plan.at(1, k, a) * s.g(k, l, a, b);
        for (int a = 0; a < s.num_a; ++a)
          for (int l2 = 0; l2 < s.num_l; ++l2)
            total += s.q_trans(a, b, l, l2) * lp.weighted_payoffs[1][opp.child(1, l, s.pair_index(a, b), l2)];
        best = std::min(best, total);
      }
      CHECK(lp.weighted_payoffs[0][l] == doctest::Approx(best).epsilon(1e-9));
    }
  }
}
