#include "sbg/sequence_form.hpp"

#include <algorithm>
#include <cmath>

namespace sbg {

Perspective::Perspective(const GameSpec& spec, Side planner) : spec_(&spec), planner_(planner) {
  const bool p1 = planner == Side::PlayerOne;
  own_states_ = p1 ? spec.num_k : spec.num_l;
  own_actions_ = p1 ? spec.num_a : spec.num_b;
  opp_states_ = p1 ? spec.num_l : spec.num_k;
  opp_actions_ = p1 ? spec.num_b : spec.num_a;
}

SequenceTable make_table(const GameSpec& spec, Side side, int depth) {
  SequenceTable table;
  table.side = side;
  table.depth = depth;
  table.num_states = side == Side::PlayerOne ? spec.num_k : spec.num_l;
  table.num_actions = side == Side::PlayerOne ? spec.num_a : spec.num_b;
  table.num_pairs = spec.num_pairs();
  const SideIndex idx = table.index();
  for (int t = 1; t <= depth; ++t) table.stages.emplace_back(static_cast<std::size_t>(idx.count(t)) * table.num_actions, 0.0);
  return table;
}

SequenceBlock add_sequence_block(lp::LinearProgram& lp, const Perspective& view, int depth,
                                 std::span<const double> own_root, double lambda) {
  SequenceBlock block;
  block.depth = depth;
  block.own_actions = view.own_actions();
  block.own = view.own_index(depth);
  block.opp = view.opp_index(depth);
  block.plan_offset.assign(depth + 2, lp.num_vars());
  block.value_offset.assign(depth + 2, lp.num_vars());
  if (depth == 0) return block;

  const int oa = view.own_actions();
  const int ra = view.opp_actions();
  for (int t = 1; t <= depth; ++t) block.plan_offset[t] = lp.add_variables(block.own.count(t) * oa, 0.0, lp::kInf);
  for (int t = 1; t <= depth; ++t) block.value_offset[t] = lp.add_variables(block.opp.count(t), -lp::kInf, lp::kInf);

  // Flow: sum_a x(I_t, a) = T(k_{t-1}, k_t) x(I_{t-1}, a_{t-1}), rooted at own_root.
  std::vector<lp::Term> terms;
  for (int t = 1; t <= depth; ++t) {
    for (int id = 0; id < block.own.count(t); ++id) {
      terms.clear();
      for (int a = 0; a < oa; ++a) terms.push_back({block.plan_var(t, id, a), 1.0});
      if (t == 1) {
        lp.add_row(terms, lp::Relation::Equal, own_root[block.own.last_state(1, id)]);
        continue;
      }
      const int parent = block.own.parent(t, id);
      const int pair = block.own.last_pair(t, id);
      const double w = view.own_trans(pair, block.own.last_state(t - 1, parent), block.own.last_state(t, id));
      if (w != 0.0) terms.push_back({block.plan_var(t - 1, parent, view.own_action_of(pair)), -w});
      lp.add_row(terms, lp::Relation::Equal, 0.0);
    }
  }

  // Responder rows: for each responder set J_t and action r,
  //   sum_{compatible I_t} sum_a lambda^(t-1) G x(I_t, a)
  //     + sum_a sum_{s'} T_opp(s_t, s') u(J_{t+1}) - u(J_t)  (>= or <=) 0.
  const lp::Relation rel = view.response_relation();
  double discount = 1.0;
  for (int t = 1; t <= depth; ++t) {
    for (int pub = 0; pub < block.opp.num_public(t); ++pub) {
      const std::vector<int> own_ids = block.own.compatible(t, pub);
      for (int seq = 0; seq < block.opp.num_sequences(t); ++seq) {
        const int jid = block.opp.make_id(t, seq, pub);
        const int opp_state = block.opp.last_state(t, jid);
        for (int r = 0; r < ra; ++r) {
          terms.clear();
          for (int iid : own_ids) {
            const int own_state = block.own.last_state(t, iid);
            for (int a = 0; a < oa; ++a) {
              const double g = view.payoff(own_state, opp_state, a, r);
              if (g != 0.0) terms.push_back({block.plan_var(t, iid, a), discount * g});
            }
          }
          if (t < depth) {
            for (int a = 0; a < oa; ++a) {
              const int pair = view.pair(a, r);
              for (int s2 = 0; s2 < view.opp_states(); ++s2) {
                const double w = view.opp_trans(pair, opp_state, s2);
                if (w != 0.0) terms.push_back({block.value_var(t + 1, block.opp.child(t, jid, pair, s2)), w});
              }
            }
          }
          terms.push_back({block.value_var(t, jid), -1.0});
          lp.add_row(terms, rel, 0.0);
        }
      }
    }
    discount *= lambda;
  }
  return block;
}

RealizationPlan read_plan(const SequenceBlock& block, const Perspective& view, std::span<const double> primal) {
  RealizationPlan plan;
  static_cast<SequenceTable&>(plan) = make_table(view.spec(), view.planner(), block.depth);
  for (int t = 1; t <= block.depth; ++t) {
    auto& stage = plan.stages[t - 1];
    for (std::size_t i = 0; i < stage.size(); ++i) stage[i] = std::max(0.0, primal[block.plan_offset[t] + i]);
  }
  return plan;
}

}  // namespace sbg
