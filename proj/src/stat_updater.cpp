#include "sbg/stat_updater.hpp"

#include <cmath>
#include <string>

#include "sbg/errors.hpp"
#include "sbg/primal_solver.hpp"

namespace sbg {

namespace {

constexpr double kLikelihoodTolerance = 1e-9;

void check_stage_strategy(const StageStrategy& x, int actions, int states, const char* what) {
  if (x.num_actions != actions || x.num_states != states ||
      x.probs.size() != static_cast<std::size_t>(actions) * states) {
    throw ValidationError(std::string(what) + ": stage strategy has the wrong shape");
  }
  for (int s = 0; s < states; ++s) {
    double sum = 0.0;
    for (int a = 0; a < actions; ++a) {
      if (!(x(a, s) >= -1e-9)) throw ValidationError(std::string(what) + ": negative probability");
      sum += x(a, s);
    }
    if (std::abs(sum - 1.0) > 1e-6) throw ValidationError(std::string(what) + ": column does not sum to 1");
  }
}

// Own-belief update of the planner of `view` after `pair`.
std::vector<double> own_posterior(const Perspective& view, std::span<const double> belief, const StageStrategy& x,
                                  int pair) {
  const int n = view.own_states();
  const int o = view.own_action_of(pair);
  const double likelihood = x.marginal(o, belief);
  const bool informative = likelihood > kLikelihoodTolerance;
  std::vector<double> next(n, 0.0);
  for (int s = 0; s < n; ++s) {
    const double w = informative ? belief[s] * x(o, s) : belief[s];
    if (w == 0.0) continue;
    for (int s2 = 0; s2 < n; ++s2) next[s2] += view.own_trans(pair, s, s2) * w;
  }
  double total = 0.0;
  for (double v : next) total += v;
  for (double& v : next) v /= total;
  return next;
}

VectorPayoffUpdate update_vector_payoff(const GameSpec& spec, Side planner, const VectorPayoff& stat,
                                        const Belief& own, const StageStrategy& x, int a, int b, int n, double lambda,
                                        std::int64_t capacity) {
  if (n < 1) throw DomainError("update LP: horizon must be at least 1");
  if (!(lambda > 0.0 && lambda <= 1.0)) throw DomainError("update LP: lambda must lie in (0,1]");
  if (a < 0 || a >= spec.num_a || b < 0 || b >= spec.num_b) throw ValidationError("update LP: action out of range");
  const Perspective view(spec, planner);
  const bool p1 = planner == Side::PlayerOne;
  validate_distribution(own.view(), view.own_states(), p1 ? "p" : "q");
  if (static_cast<int>(stat.size()) != view.opp_states()) {
    throw ValidationError(std::string(p1 ? "nu" : "mu") + ": wrong length");
  }
  check_stage_strategy(x, view.own_actions(), view.own_states(), p1 ? "X*" : "Y*");
  if (n > 1) check_capacity(spec, n - 1, capacity / spec.num_pairs());

  const int pairs = spec.num_pairs();
  const int opp_states = view.opp_states();
  lp::LinearProgram prog(view.maximizes() ? lp::Sense::Maximize : lp::Sense::Minimize);
  const int scalar = prog.add_variable(-lp::kInf, lp::kInf, 1.0);

  std::vector<int> beta(pairs), level(pairs);
  std::vector<SequenceBlock> blocks(pairs);
  for (int h = 0; h < pairs; ++h) {
    beta[h] = prog.add_variables(opp_states, -lp::kInf, lp::kInf);
    level[h] = prog.add_variable(-lp::kInf, lp::kInf, 0.0);
    const std::vector<double> root = own_posterior(view, own.view(), x, h);
    blocks[h] = add_sequence_block(prog, view, n - 1, root, lambda);
    // beta(s) + W_{s} - W_0 (<= for player two, >= for player one) 0.
    for (int s = 0; s < opp_states; ++s) {
      std::vector<lp::Term> terms{{beta[h] + s, 1.0}, {level[h], -1.0}};
      if (n > 1) terms.push_back({blocks[h].value_var(1, s), 1.0});
      prog.add_row(std::move(terms), view.response_relation(), 0.0);
    }
  }

  // Stage rows, one per opponent (action, state):
  //   scalar - lambda sum_o xbar(o) W_0 + lambda sum_o xbar(o) sum_s' T(s,s') beta(s')
  //     (>= for player two, <= for player one)  stat(s) + expected stage payoff.
  const lp::Relation rel = view.maximizes() ? lp::Relation::LessEqual : lp::Relation::GreaterEqual;
  std::vector<double> xbar(view.own_actions());
  for (int o = 0; o < view.own_actions(); ++o) xbar[o] = x.marginal(o, own.view());
  for (int r = 0; r < view.opp_actions(); ++r) {
    for (int s = 0; s < opp_states; ++s) {
      std::vector<lp::Term> terms{{scalar, 1.0}};
      double rhs = stat[s];
      for (int o = 0; o < view.own_actions(); ++o) {
        for (int s_own = 0; s_own < view.own_states(); ++s_own) {
          rhs += view.payoff(s_own, s, o, r) * x(o, s_own) * own[s_own];
        }
        if (xbar[o] == 0.0) continue;
        const int h = view.pair(o, r);
        terms.push_back({level[h], -lambda * xbar[o]});
        for (int s2 = 0; s2 < opp_states; ++s2) {
          const double w = view.opp_trans(h, s, s2);
          if (w != 0.0) terms.push_back({beta[h] + s2, lambda * xbar[o] * w});
        }
      }
      prog.add_row(std::move(terms), rel, rhs);
    }
  }

  const lp::LpSolution sol = solve_bounded(prog, "vector payoff update LP");
  VectorPayoffUpdate out;
  out.value = sol.objective_value;
  for (int h = 0; h < pairs; ++h) {
    out.by_pair.emplace_back(std::vector<double>(sol.primal.begin() + beta[h], sol.primal.begin() + beta[h] + opp_states));
  }
  out.next = out.by_pair[spec.pair_index(a, b)];
  return out;
}

}  // namespace

double StageStrategy::marginal(int a, std::span<const double> belief) const {
  double sum = 0.0;
  for (int s = 0; s < num_states; ++s) sum += (*this)(a, s) * belief[s];
  return sum;
}

StageStrategy stage_one(const BehavioralStrategy& strategy) {
  StageStrategy x(strategy.num_actions, strategy.num_states);
  // At depth one the information set id equals the state.
  for (int s = 0; s < strategy.num_states; ++s)
    for (int a = 0; a < strategy.num_actions; ++a) x(a, s) = strategy.at(1, s, a);
  return x;
}

Belief update_belief_p(const GameSpec& spec, const Belief& p, const StageStrategy& x, int a, int b) {
  validate_distribution(p.view(), spec.num_k, "p");
  check_stage_strategy(x, spec.num_a, spec.num_k, "X");
  return Belief(own_posterior(Perspective(spec, Side::PlayerOne), p.view(), x, spec.pair_index(a, b)));
}

Belief update_belief_q(const GameSpec& spec, const Belief& q, const StageStrategy& y, int a, int b) {
  validate_distribution(q.view(), spec.num_l, "q");
  check_stage_strategy(y, spec.num_b, spec.num_l, "Y");
  return Belief(own_posterior(Perspective(spec, Side::PlayerTwo), q.view(), y, spec.pair_index(a, b)));
}

VectorPayoffUpdate update_mu(const GameSpec& spec, const VectorPayoff& mu, const Belief& q, const StageStrategy& y_star,
                             int a, int b, int n, double lambda, std::int64_t capacity) {
  return update_vector_payoff(spec, Side::PlayerTwo, mu, q, y_star, a, b, n, lambda, capacity);
}

VectorPayoffUpdate update_nu(const GameSpec& spec, const VectorPayoff& nu, const Belief& p, const StageStrategy& x_star,
                             int a, int b, int n, double lambda, std::int64_t capacity) {
  return update_vector_payoff(spec, Side::PlayerOne, nu, p, x_star, a, b, n, lambda, capacity);
}

}  // namespace sbg
