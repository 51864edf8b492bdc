#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "sbg/dual_solver.hpp"
#include "sbg/stat_updater.hpp"
#include "test_support.hpp"

using namespace sbg;

namespace {

StageStrategy random_stage(testing::Rng& rng, int actions, int states) {
  StageStrategy x(actions, states);
  for (int s = 0; s < states; ++s) {
    const auto col = testing::random_distribution(rng, actions);
    for (int a = 0; a < actions; ++a) x(a, s) = col[a];
  }
  return x;
}

GameSpec identity_transitions(GameSpec s) {
  for (int a = 0; a < s.num_a; ++a)
    for (int b = 0; b < s.num_b; ++b) {
      for (int k = 0; k < s.num_k; ++k)
        for (int k2 = 0; k2 < s.num_k; ++k2) s.p_trans(a, b, k, k2) = k == k2;
      for (int l = 0; l < s.num_l; ++l)
        for (int l2 = 0; l2 < s.num_l; ++l2) s.q_trans(a, b, l, l2) = l == l2;
    }
  return s;
}

}  // namespace

TEST_CASE("Bayes update examples") {
  SUBCASE("worked example") {
    const GameSpec s = identity_transitions(testing::constant_spec(2, 2, 2, 2, 1.0, 0.5, 2));
    StageStrategy x(2, 2);
    x(0, 0) = 0.8, x(1, 0) = 0.2, x(0, 1) = 0.2, x(1, 1) = 0.8;
    const Belief next = update_belief_p(s, Belief({0.3, 0.7}), x, 0, 1);
    CHECK(next[0] == doctest::Approx(0.24 / 0.38).epsilon(1e-12));
    CHECK(next[1] == doctest::Approx(0.14 / 0.38).epsilon(1e-12));
    CHECK(next[0] == doctest::Approx(0.63158).epsilon(1e-5));
    // Mirror for player two: same numbers with the roles swapped.
    const Belief next_q = update_belief_q(s, Belief({0.3, 0.7}), x, 1, 0);
    CHECK(next_q[0] == doctest::Approx(0.24 / 0.38).epsilon(1e-12));
  }
  SUBCASE("single state") {
    testing::Rng rng(1);
    const GameSpec s = testing::random_spec(rng, 1, 2, 2, 2, 0.5, 2);
    CHECK(update_belief_p(s, Belief({1.0}), random_stage(rng, 2, 1), 1, 0).probs == std::vector<double>{1.0});
  }
  SUBCASE("state-independent strategy with identity transitions keeps the belief") {
    testing::Rng rng(2);
    const GameSpec s = identity_transitions(testing::random_spec(rng, 3, 2, 2, 2, 0.5, 2));
    StageStrategy x(2, 3);
    for (int k = 0; k < 3; ++k) x(0, k) = 0.35, x(1, k) = 0.65;
    const Belief p({0.2, 0.5, 0.3});
    const Belief next = update_belief_p(s, p, x, 1, 1);
    for (int k = 0; k < 3; ++k) CHECK(next[k] == doctest::Approx(p[k]).epsilon(1e-12));
  }
  SUBCASE("zero-probability action pushes the prior through the transition") {
    testing::Rng rng(3);
    const GameSpec s = testing::random_spec(rng, 2, 2, 2, 2, 0.5, 2);
    StageStrategy x(2, 2);
    x(0, 0) = 1.0, x(0, 1) = 1.0;
    const Belief p({0.4, 0.6});
    const Belief next = update_belief_p(s, p, x, 1, 0);
    for (int k2 = 0; k2 < 2; ++k2) {
      CHECK(next[k2] == doctest::Approx(0.4 * s.p_trans(1, 0, 0, k2) + 0.6 * s.p_trans(1, 0, 1, k2)));
    }
  }
}

TEST_CASE("Bayes update equals the joint-distribution computation") {
  testing::Rng rng(4);
  for (int i = 0; i < 200; ++i) {
    const GameSpec s = testing::random_small_spec(rng, 3, 3, 0.5, 2);
    const Belief p(testing::random_distribution(rng, s.num_k));
    const StageStrategy x = random_stage(rng, s.num_a, s.num_k);
    const int a = static_cast<int>(rng() % s.num_a), b = static_cast<int>(rng() % s.num_b);
    // Pr(k', a) = sum_k p(k) X(a,k) P_ab(k,k'); Pr(a) = sum_k' Pr(k', a).
    std::vector<double> joint(s.num_k, 0.0);
    double marginal = 0.0;
    for (int k = 0; k < s.num_k; ++k)
      for (int k2 = 0; k2 < s.num_k; ++k2) joint[k2] += p[k] * x(a, k) * s.p_trans(a, b, k, k2);
    for (double j : joint) marginal += j;
    const Belief next = update_belief_p(s, p, x, a, b);
    for (int k2 = 0; k2 < s.num_k; ++k2) CHECK(std::abs(next[k2] - joint[k2] / marginal) <= 1e-12);
  }
}

TEST_CASE("beliefs stay normalized along long update chains") {
  testing::Rng rng(5);
  double worst = 0.0;
  for (int chain = 0; chain < 100; ++chain) {
    const GameSpec s = testing::random_small_spec(rng, 3, 3, 0.5, 2);
    Belief p(s.p0), q(s.q0);
    for (int step = 0; step < 100; ++step) {
      const int a = static_cast<int>(rng() % s.num_a), b = static_cast<int>(rng() % s.num_b);
      p = update_belief_p(s, p, random_stage(rng, s.num_a, s.num_k), a, b);
      q = update_belief_q(s, q, random_stage(rng, s.num_b, s.num_l), a, b);
      for (const Belief* x : {&p, &q}) {
        double sum = 0.0;
        for (double v : x->probs) {
          CHECK(v >= 0.0);
          CHECK(v <= 1.0);
          sum += v;
        }
        worst = std::max(worst, std::abs(sum - 1.0));
      }
    }
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("update LP value equals the dual game value") {
  testing::Rng rng(6);
  std::uniform_real_distribution<double> offset(-5.0, 5.0);
  for (int i = 0; i < 12; ++i) {
    const GameSpec s = testing::random_small_spec(rng, 3, 2, 0.3 + 0.05 * i, 3);
    const int n = 1 + i % 3;
    std::vector<double> mu(s.num_k), nu(s.num_l);
    for (double& m : mu) m = offset(rng);
    for (double& m : nu) m = offset(rng);
    const Belief p(s.p0), q(s.q0);
    const int a = static_cast<int>(rng() % s.num_a), b = static_cast<int>(rng() % s.num_b);

    const DualResult d1 = solve_dual1(s, VectorPayoff(mu), q, n, s.lambda);
    const VectorPayoffUpdate u1 = update_mu(s, VectorPayoff(mu), q, stage_one(d1.strategy), a, b, n, s.lambda);
    CHECK(std::abs(u1.value - d1.value) <= 1e-5);
    CHECK(u1.by_pair.size() == static_cast<std::size_t>(s.num_pairs()));
    CHECK(u1.next == u1.by_pair[s.pair_index(a, b)]);

    const DualResult d2 = solve_dual2(s, p, VectorPayoff(nu), n, s.lambda);
    const VectorPayoffUpdate u2 = update_nu(s, VectorPayoff(nu), p, stage_one(d2.strategy), a, b, n, s.lambda);
    CHECK(std::abs(u2.value - d2.value) <= 1e-5);

    // The next-stage statistic is well formed.
    if (n > 1) {
      const Belief q_next = update_belief_q(s, q, stage_one(d1.strategy), a, b);
      const DualResult next = solve_dual1(s, u1.next, q_next, n, s.lambda);
      CHECK(std::isfinite(next.value));
      for (const auto& stage : next.strategy.stages)
        for (double x : stage) CHECK(x >= -1e-9);
    }
  }
}

TEST_CASE("play-independent payoff: rho = max mu + c (1 + lambda)") {
  testing::Rng rng(7);
  for (int i = 0; i < 5; ++i) {
    const double c = 2.0 + i, lambda = 0.25 + 0.1 * i;
    const GameSpec s = testing::constant_spec(2 + i % 2, 2, 2, 2, c, lambda, 2);
    std::vector<double> mu(s.num_k);
    for (double& m : mu) m = double(rng() % 50) / 7.0;
    const DualResult d = solve_dual1(s, VectorPayoff(mu), Belief(s.q0), 2, lambda);
    const VectorPayoffUpdate u = update_mu(s, VectorPayoff(mu), Belief(s.q0), stage_one(d.strategy), 0, 1, 2, lambda);
    CHECK(u.value == doctest::Approx(*std::max_element(mu.begin(), mu.end()) + c * (1 + lambda)).epsilon(1e-9));
  }
}
