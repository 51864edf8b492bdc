#include "sbg/best_response.hpp"

#include <algorithm>
#include <limits>

#include "sbg/errors.hpp"
#include "sbg/primal_solver.hpp"

namespace sbg {

namespace {

// Stage payoff of responder set (t, jid) choosing r, given the plan.
double stage_term(const Perspective& view, const SideIndex& own, const RealizationPlan& plan, int t, int opp_state,
                  int pub, int r, double discount) {
  double sum = 0.0;
  for (int seq = 0; seq < own.num_sequences(t); ++seq) {
    const int iid = own.make_id(t, seq, pub);
    const int own_state = own.last_state(t, iid);
    for (int a = 0; a < view.own_actions(); ++a) {
      const double x = plan.at(t, iid, a);
      if (x != 0.0) sum += discount * view.payoff(own_state, opp_state, a, r) * x;
    }
  }
  return sum;
}

double continuation(const Perspective& view, const SideIndex& opp, const WeightedPayoffs& values, int t, int jid,
                    int opp_state, int r) {
  if (t >= static_cast<int>(values.size())) return 0.0;
  double sum = 0.0;
  for (int a = 0; a < view.own_actions(); ++a) {
    const int pair = view.pair(a, r);
    for (int s2 = 0; s2 < view.opp_states(); ++s2) {
      const double w = view.opp_trans(pair, opp_state, s2);
      if (w != 0.0) sum += w * values[t][opp.child(t, jid, pair, s2)];
    }
  }
  return sum;
}

void check_plan(const GameSpec& spec, const RealizationPlan& plan, Side side, int n) {
  const SequenceTable expected = make_table(spec, side, n);
  if (plan.side != side || plan.depth != n || plan.stages.size() != expected.stages.size()) {
    throw ValidationError("best response: plan shape does not match the game and horizon");
  }
  for (int t = 0; t < n; ++t) {
    if (plan.stages[t].size() != expected.stages[t].size()) {
      throw ValidationError("best response: plan shape does not match the game and horizon");
    }
  }
}

BestResponseResult best_response_lp(const GameSpec& spec, const RealizationPlan& plan, const Belief& opp_belief, int n,
                                    double lambda) {
  const Perspective view(spec, plan.side);
  check_plan(spec, plan, plan.side, n);
  validate_distribution(opp_belief.view(), view.opp_states(), "opponent belief");
  const SideIndex own = view.own_index(n);
  const SideIndex opp = view.opp_index(n);

  // The responder's values are the extreme feasible point: maximal U when
  // the planner maximizes (U <= stage + continuation), minimal Z otherwise.
  // Optimizing their sum selects that point uniquely.
  lp::LinearProgram prog(view.maximizes() ? lp::Sense::Maximize : lp::Sense::Minimize);
  std::vector<int> offset(n + 2, 0);
  for (int t = 1; t <= n; ++t) offset[t] = prog.add_variables(opp.count(t), -lp::kInf, lp::kInf);
  for (int j = 0; j < prog.num_vars(); ++j) prog.set_objective(j, 1.0);

  const lp::Relation rel = view.response_relation();
  std::vector<lp::Term> terms;
  double discount = 1.0;
  for (int t = 1; t <= n; ++t) {
    for (int jid = 0; jid < opp.count(t); ++jid) {
      const int opp_state = opp.last_state(t, jid);
      const int pub = opp.public_of(t, jid);
      for (int r = 0; r < view.opp_actions(); ++r) {
        terms.clear();
        if (t < n) {
          for (int a = 0; a < view.own_actions(); ++a) {
            const int pair = view.pair(a, r);
            for (int s2 = 0; s2 < view.opp_states(); ++s2) {
              const double w = view.opp_trans(pair, opp_state, s2);
              if (w != 0.0) terms.push_back({offset[t + 1] + opp.child(t, jid, pair, s2), w});
            }
          }
        }
        terms.push_back({offset[t] + jid, -1.0});
        prog.add_row(terms, rel, -stage_term(view, own, plan, t, opp_state, pub, r, discount));
      }
    }
    discount *= lambda;
  }

  const lp::LpSolution sol = solve_bounded(prog, "best response LP");
  BestResponseResult out;
  out.weighted_payoffs.resize(n);
  for (int t = 1; t <= n; ++t) {
    out.weighted_payoffs[t - 1].assign(sol.primal.begin() + offset[t], sol.primal.begin() + offset[t] + opp.count(t));
  }
  for (int s = 0; s < view.opp_states(); ++s) out.value += opp_belief[s] * out.weighted_payoffs[0][s];
  return out;
}

}  // namespace

BestResponseResult best_response_vs_p1(const GameSpec& spec, const RealizationPlan& plan, const Belief& q, int n,
                                       double lambda) {
  if (plan.side != Side::PlayerOne) throw ValidationError("best_response_vs_p1 needs a player-one plan");
  return best_response_lp(spec, plan, q, n, lambda);
}

BestResponseResult best_response_vs_p2(const GameSpec& spec, const RealizationPlan& plan, const Belief& p, int n,
                                       double lambda) {
  if (plan.side != Side::PlayerTwo) throw ValidationError("best_response_vs_p2 needs a player-two plan");
  return best_response_lp(spec, plan, p, n, lambda);
}

BestResponseResult best_response_recursive(const GameSpec& spec, const RealizationPlan& plan,
                                           std::span<const double> opp_belief, double lambda) {
  const Perspective view(spec, plan.side);
  const int n = plan.depth;
  const SideIndex own = view.own_index(n);
  const SideIndex opp = view.opp_index(n);
  BestResponseResult out;
  out.weighted_payoffs.resize(n);
  std::vector<double> discount(n + 1, 1.0);
  for (int t = 2; t <= n; ++t) discount[t] = discount[t - 1] * lambda;

  for (int t = n; t >= 1; --t) {
    auto& values = out.weighted_payoffs[t - 1];
    values.assign(opp.count(t), 0.0);
    for (int pub = 0; pub < opp.num_public(t); ++pub) {
      for (int seq = 0; seq < opp.num_sequences(t); ++seq) {
        const int jid = opp.make_id(t, seq, pub);
        const int opp_state = opp.last_state(t, jid);
        double best = view.maximizes() ? std::numeric_limits<double>::infinity()
                                       : -std::numeric_limits<double>::infinity();
        for (int r = 0; r < view.opp_actions(); ++r) {
          const double v = stage_term(view, own, plan, t, opp_state, pub, r, discount[t]) +
                           continuation(view, opp, out.weighted_payoffs, t, jid, opp_state, r);
          best = view.maximizes() ? std::min(best, v) : std::max(best, v);
        }
        values[jid] = best;
      }
    }
  }
  for (int s = 0; s < view.opp_states(); ++s) out.value += opp_belief[s] * out.weighted_payoffs[0][s];
  return out;
}

}  // namespace sbg
