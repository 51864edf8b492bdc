#include <doctest.h>

#include <cmath>

#include "sbg/dual_solver.hpp"
#include "sbg/errors.hpp"
#include "sbg/primal_solver.hpp"
#include "sbg/simulator.hpp"
#include "sbg/window_agent.hpp"
#include "test_support.hpp"

using namespace sbg;

namespace {

WindowConfig config(int n, int horizon, bool track = false) {
  WindowConfig c;
  c.window_n = n;
  c.total_horizon = horizon;
  c.update_in_last_window = track;
  return c;
}

// Random public history of length `len`.
std::vector<int> random_pairs(testing::Rng& rng, const GameSpec& s, int len) {
  std::vector<int> out(len);
  for (int& h : out) h = static_cast<int>(rng() % s.num_pairs());
  return out;
}

}  // namespace

TEST_CASE("window layout") {
  testing::Rng rng(91);
  SUBCASE("N = 4, n = 2") {
    GameSpec s = testing::random_spec(rng, 2, 2, 2, 2, 0.5, 4);
    WindowPlanner planner(s, Side::PlayerOne, config(2, 4));
    const std::vector<int> h = random_pairs(rng, s, 4);
    const int expected_start[] = {1, 1, 3, 3, 3};
    for (int len = 0; len <= 4; ++len) {
      const StatisticNode& node = planner.node(std::vector<int>(h.begin(), h.begin() + len));
      CHECK(node.t == len + 1);
      CHECK(node.window->start == expected_start[len]);
      CHECK(node.window->length == 2);
    }
  }
  SUBCASE("N = 5, n = 2 ends with a one-stage window") {
    GameSpec s = testing::random_spec(rng, 2, 2, 2, 2, 0.5, 5);
    WindowPlanner planner(s, Side::PlayerTwo, config(2, 5));
    const StatisticNode& last = planner.node(random_pairs(rng, s, 4));
    CHECK(last.window->start == 5);
    CHECK(last.window->length == 1);
    CHECK(last.window->index == 2);
  }
  SUBCASE("n = N never advances") {
    GameSpec s = testing::random_spec(rng, 2, 2, 2, 2, 0.5, 3);
    WindowPlanner planner(s, Side::PlayerOne, config(3, 3));
    const std::vector<int> h = random_pairs(rng, s, 3);
    for (int len = 0; len <= 3; ++len) {
      CHECK(planner.node(std::vector<int>(h.begin(), h.begin() + len)).window->index == 0);
    }
  }
  CHECK_THROWS_AS(WindowPlanner(case_study_spec(), Side::PlayerOne, config(0, 4)), DomainError);
  CHECK_THROWS_AS(WindowPlanner(case_study_spec(), Side::PlayerOne, config(5, 4)), DomainError);
}

TEST_CASE("initial statistic comes from the primal solve") {
  const GameSpec s = case_study_spec();
  WindowPlanner p1(s, Side::PlayerOne, config(2, 4));
  const PrimalResult r = solve_primal(s, Belief(s.p0), Belief(s.q0), 2, s.lambda, Side::PlayerOne);
  const StatisticNode& root = p1.node({});
  CHECK(root.belief.probs == s.p0);
  for (int l = 0; l < s.num_l; ++l) CHECK(root.payoff[l] == doctest::Approx(-r.weighted_payoffs[0][l]));
  CHECK(root.window->strategy.depth == 2);

  GameSpec single = testing::constant_spec(1, 1, 2, 2, 0.0, 0.6, 3);
  testing::Rng rng(92);
  for (double& g : single.payoff) g = double(rng() % 10);
  WindowPlanner p2(single, Side::PlayerTwo, config(2, 3));
  const double v = solve_primal(single, Belief({1.0}), Belief({1.0}), 2, single.lambda, Side::PlayerOne).value;
  CHECK(p2.node({}).payoff.values.size() == 1);
  CHECK(p2.node({}).payoff[0] == doctest::Approx(-v));
}

TEST_CASE("the first window plays the primal security strategy") {
  const GameSpec s = case_study_spec();
  const PrimalResult r = solve_primal(s, Belief(s.p0), Belief(s.q0), 2, s.lambda, Side::PlayerOne);
  auto planner = std::make_shared<WindowPlanner>(s, Side::PlayerOne, config(2, 4));
  testing::Rng rng(93);
  const SideIndex idx(s.num_k, s.num_pairs(), 2);
  for (int trial = 0; trial < 20; ++trial) {
    WindowAgent agent(planner);
    const int k1 = static_cast<int>(rng() % 3), k2 = static_cast<int>(rng() % 3);
    const int a = static_cast<int>(rng() % 2), b = static_cast<int>(rng() % 2);
    agent.begin(k1);
    const std::vector<double> x1 = agent.act();
    CHECK(x1[0] == r.strategy.at(1, k1, 0));
    CHECK(x1[0] + x1[1] == doctest::Approx(1.0));
    agent.observe(a, b, k2);
    const std::vector<double> x2 = agent.act();
    const int id = idx.encode({{k1, k2}, {s.pair_index(a, b)}});
    CHECK(x2[1] == r.strategy.at(2, id, 1));
  }
}

TEST_CASE("belief is recomputable from the player's own information") {
  const GameSpec s = case_study_spec();
  const PrimalResult r = solve_primal(s, Belief(s.p0), Belief(s.q0), 2, s.lambda, Side::PlayerOne);
  WindowPlanner planner(s, Side::PlayerOne, config(2, 4));
  const SideIndex idx(s.num_k, s.num_pairs(), 2);
  for (int h = 0; h < s.num_pairs(); ++h) {
    // Pr(k_2 | pair) from the first-window plan directly.
    std::vector<double> joint(3, 0.0);
    for (int k = 0; k < 3; ++k)
      for (int k2 = 0; k2 < 3; ++k2) joint[k2] += r.plan.at(1, k, h / s.num_b) * s.p_trans(h / s.num_b, h % s.num_b, k, k2);
    double total = joint[0] + joint[1] + joint[2];
    const StatisticNode& node = planner.node({h});
    for (int k2 = 0; k2 < 3; ++k2) {
      const double expected = total > 1e-9 ? joint[k2] / total : node.belief[k2];
      CHECK(node.belief[k2] == doctest::Approx(expected).epsilon(1e-9));
    }
  }
}

TEST_CASE("single-state beliefs stay degenerate") {
  testing::Rng rng(94);
  const GameSpec s = testing::random_spec(rng, 1, 2, 2, 2, 0.5, 4);
  WindowPlanner planner(s, Side::PlayerOne, config(2, 4, true));
  const std::vector<int> h = random_pairs(rng, s, 4);
  for (int len = 0; len <= 4; ++len) {
    CHECK(planner.node(std::vector<int>(h.begin(), h.begin() + len)).belief.probs == std::vector<double>{1.0});
  }
}

TEST_CASE("statistic trajectories are deterministic and well posed") {
  testing::Rng rng(95);
  for (int i = 0; i < 4; ++i) {
    const GameSpec s = testing::random_small_spec(rng, 3, 2, 0.5, 5);
    for (Side side : {Side::PlayerOne, Side::PlayerTwo}) {
      for (UpdateHorizon mode : {UpdateHorizon::FixedN, UpdateHorizon::RemainingWindow}) {
        WindowConfig c = config(2, 5, true);
        c.update_horizon = mode;
        WindowPlanner a(s, side, c), b(s, side, c);
        const std::vector<int> h = random_pairs(rng, s, 5);
        for (int len = 0; len <= 4; ++len) {
          const std::vector<int> prefix(h.begin(), h.begin() + len);
          const StatisticNode& x = a.node(prefix);
          const StatisticNode& y = b.node(prefix);
          CHECK(x.belief == y.belief);
          CHECK(x.payoff == y.payoff);
          CHECK(x.payoff_current);
          double sum = 0.0;
          for (double v : x.belief.probs) sum += v;
          CHECK(std::abs(sum - 1.0) < 1e-9);
          const int remaining = x.window->start + x.window->length - x.t;
          const double w = side == Side::PlayerOne
                               ? solve_dual2(s, x.belief, x.payoff, remaining, s.lambda).value
                               : solve_dual1(s, x.payoff, x.belief, remaining, s.lambda).value;
          CHECK(std::isfinite(w));
        }
      }
    }
  }
}

TEST_CASE("a single window equals the optimal agent") {
  testing::Rng rng(96);
  const GameSpec s = testing::random_spec(rng, 2, 2, 2, 2, 0.6, 3);
  const auto fixed = fixed_agent_factory({{0.5, 0.5}, {0.2, 0.8}});
  const MonteCarloResult opt = run_monte_carlo(s, optimal_agent_factory(s, Side::PlayerOne), fixed, 200, 7);
  const MonteCarloResult win = run_monte_carlo(s, window_agent_factory(s, Side::PlayerOne, config(3, 3)), fixed, 200, 7);
  CHECK(opt.totals == win.totals);
  CHECK(opt.mean - win.mean == 0.0);
}
