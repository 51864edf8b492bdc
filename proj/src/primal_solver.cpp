#include "sbg/primal_solver.hpp"

#include <string>

#include "sbg/best_response.hpp"
#include "sbg/errors.hpp"

namespace sbg {

namespace {

constexpr double kReachTolerance = 1e-9;

SequenceProgram build_primal(const GameSpec& spec, Side side, const Belief& p, const Belief& q, int n, double lambda,
                             std::int64_t capacity) {
  if (n < 1) throw DomainError("primal LP: horizon must be at least 1");
  if (!(lambda > 0.0 && lambda <= 1.0)) throw DomainError("primal LP: lambda must lie in (0,1]");
  validate_distribution(p.view(), spec.num_k, "p");
  validate_distribution(q.view(), spec.num_l, "q");
  check_capacity(spec, n, capacity);

  const Perspective view(spec, side);
  const Belief& own = side == Side::PlayerOne ? p : q;
  const Belief& opp = side == Side::PlayerOne ? q : p;
  SequenceProgram out;
  out.lp.set_sense(view.maximizes() ? lp::Sense::Maximize : lp::Sense::Minimize);
  out.block = add_sequence_block(out.lp, view, n, own.view(), lambda);
  for (int s = 0; s < view.opp_states(); ++s) out.lp.set_objective(out.block.value_var(1, s), opp[s]);
  return out;
}

}  // namespace

lp::LpSolution solve_bounded(const lp::LinearProgram& program, const char* what) {
  lp::LpSolution sol = lp::solve(program);
  if (sol.status != lp::Status::Optimal) {
    throw NumericalError(std::string(what) + " reported " + lp::to_string(sol.status));
  }
  return sol;
}

SequenceProgram build_primal_p1(const GameSpec& spec, const Belief& p, const Belief& q, int n, double lambda,
                                std::int64_t capacity) {
  return build_primal(spec, Side::PlayerOne, p, q, n, lambda, capacity);
}

SequenceProgram build_primal_p2(const GameSpec& spec, const Belief& p, const Belief& q, int n, double lambda,
                                std::int64_t capacity) {
  return build_primal(spec, Side::PlayerTwo, p, q, n, lambda, capacity);
}

PrimalResult solve_primal(const GameSpec& spec, const Belief& p, const Belief& q, int n, double lambda, Side side,
                          std::int64_t capacity) {
  const SequenceProgram prog = build_primal(spec, side, p, q, n, lambda, capacity);
  const lp::LpSolution sol = solve_bounded(prog.lp, "primal LP");
  const Perspective view(spec, side);

  PrimalResult out;
  out.side = side;
  out.value = sol.objective_value;
  out.plan = read_plan(prog.block, view, sol.primal);
  out.strategy = extract_strategy(out.plan, spec);
  // The LP pins U*_{J_1} only where the opponent belief is positive; the
  // recursion gives the exact weighted payoffs of the plan everywhere.
  const Belief& opp = side == Side::PlayerOne ? q : p;
  out.weighted_payoffs = best_response_recursive(spec, out.plan, opp.view(), lambda).weighted_payoffs;
  std::vector<double> vec(view.opp_states());
  for (int s = 0; s < view.opp_states(); ++s) vec[s] = -out.weighted_payoffs[0][s];
  out.initial_vector_payoff = VectorPayoff(std::move(vec));
  return out;
}

BehavioralStrategy extract_strategy(const RealizationPlan& plan, const GameSpec& spec) {
  BehavioralStrategy out;
  static_cast<SequenceTable&>(out) = make_table(spec, plan.side, plan.depth);
  const SideIndex idx = plan.index();
  const double uniform = 1.0 / plan.num_actions;
  for (int t = 1; t <= plan.depth; ++t) {
    for (int id = 0; id < idx.count(t); ++id) {
      // Under the flow constraint the sum over actions equals
      // T(k_{t-1}, k_t) * R(I_{t-1}, a_{t-1}) (or p(k_1) at t = 1).
      double reach = 0.0;
      for (int a = 0; a < plan.num_actions; ++a) reach += plan.at(t, id, a);
      for (int a = 0; a < plan.num_actions; ++a) {
        out.at(t, id, a) = reach > kReachTolerance ? plan.at(t, id, a) / reach : uniform;
      }
    }
  }
  return out;
}

RealizationPlan compose_plan(const BehavioralStrategy& strategy, const GameSpec& spec, std::span<const double> root) {
  RealizationPlan plan;
  static_cast<SequenceTable&>(plan) = make_table(spec, strategy.side, strategy.depth);
  const Perspective view(spec, strategy.side);
  const SideIndex idx = strategy.index();
  for (int t = 1; t <= strategy.depth; ++t) {
    for (int id = 0; id < idx.count(t); ++id) {
      double reach;
      if (t == 1) {
        reach = root[idx.last_state(1, id)];
      } else {
        const int parent = idx.parent(t, id);
        const int pair = idx.last_pair(t, id);
        reach = view.own_trans(pair, idx.last_state(t - 1, parent), idx.last_state(t, id)) *
                plan.at(t - 1, parent, view.own_action_of(pair));
      }
      for (int a = 0; a < strategy.num_actions; ++a) plan.at(t, id, a) = reach * strategy.at(t, id, a);
    }
  }
  return plan;
}

}  // namespace sbg
