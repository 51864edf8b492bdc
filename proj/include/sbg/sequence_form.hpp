#pragma once

#include <span>
#include <vector>

#include "sbg/game_model.hpp"
#include "sbg/history_index.hpp"
#include "sbg/lp.hpp"

namespace sbg {

// The game seen from one player (the planner) choosing a realization plan
// against the other (the responder). Payoffs are always player one's; the
// planner maximizes them iff it is player one.
class Perspective {
 public:
  Perspective(const GameSpec& spec, Side planner);

  Side planner() const { return planner_; }
  bool maximizes() const { return planner_ == Side::PlayerOne; }
  const GameSpec& spec() const { return *spec_; }

  int own_states() const { return own_states_; }
  int own_actions() const { return own_actions_; }
  int opp_states() const { return opp_states_; }
  int opp_actions() const { return opp_actions_; }
  int num_pairs() const { return spec_->num_pairs(); }

  int pair(int own_action, int opp_action) const {
    return planner_ == Side::PlayerOne ? spec_->pair_index(own_action, opp_action)
                                       : spec_->pair_index(opp_action, own_action);
  }
  int own_action_of(int pair) const {
    return planner_ == Side::PlayerOne ? pair / spec_->num_b : pair % spec_->num_b;
  }
  int opp_action_of(int pair) const {
    return planner_ == Side::PlayerOne ? pair % spec_->num_b : pair / spec_->num_b;
  }
  double payoff(int own_state, int opp_state, int own_action, int opp_action) const {
    return planner_ == Side::PlayerOne ? spec_->g(own_state, opp_state, own_action, opp_action)
                                       : spec_->g(opp_state, own_state, opp_action, own_action);
  }
  double own_trans(int pair, int from, int to) const {
    const int a = pair / spec_->num_b, b = pair % spec_->num_b;
    return planner_ == Side::PlayerOne ? spec_->p_trans(a, b, from, to) : spec_->q_trans(a, b, from, to);
  }
  double opp_trans(int pair, int from, int to) const {
    const int a = pair / spec_->num_b, b = pair % spec_->num_b;
    return planner_ == Side::PlayerOne ? spec_->q_trans(a, b, from, to) : spec_->p_trans(a, b, from, to);
  }

  SideIndex own_index(int depth) const { return SideIndex(own_states_, num_pairs(), depth); }
  SideIndex opp_index(int depth) const { return SideIndex(opp_states_, num_pairs(), depth); }

  // Relation of the responder rows: >= when the planner maximizes.
  lp::Relation response_relation() const {
    return maximizes() ? lp::Relation::GreaterEqual : lp::Relation::LessEqual;
  }

 private:
  const GameSpec* spec_;
  Side planner_;
  int own_states_;
  int own_actions_;
  int opp_states_;
  int opp_actions_;
};

// Values attached to (information set, own action) pairs of one player, per
// stage. Entry [t-1][id * num_actions + a].
struct SequenceTable {
  Side side = Side::PlayerOne;
  int depth = 0;
  int num_states = 1;
  int num_actions = 1;
  int num_pairs = 1;
  std::vector<std::vector<double>> stages;

  SideIndex index() const { return SideIndex(num_states, num_pairs, depth); }
  double at(int t, int id, int a) const { return stages[t - 1][static_cast<std::size_t>(id) * num_actions + a]; }
  double& at(int t, int id, int a) { return stages[t - 1][static_cast<std::size_t>(id) * num_actions + a]; }
  std::span<const double> row(int t, int id) const {
    return std::span<const double>(stages[t - 1]).subspan(static_cast<std::size_t>(id) * num_actions, num_actions);
  }
};

// Zero-filled table shaped for `side` at the given depth.
SequenceTable make_table(const GameSpec& spec, Side side, int depth);

// R or S: reach probability of an information set times own action weights.
struct RealizationPlan : SequenceTable {};

// Per-information-set action distributions.
struct BehavioralStrategy : SequenceTable {};

// Weighted payoffs U (over player two's sets) or Z (over player one's),
// indexed [t-1][id].
using WeightedPayoffs = std::vector<std::vector<double>>;

// Column layout of one sequence-form block inside a larger LP.
struct SequenceBlock {
  int depth = 0;
  int own_actions = 1;
  SideIndex own;
  SideIndex opp;
  std::vector<int> plan_offset;   // [t], first plan column of stage t
  std::vector<int> value_offset;  // [t], first weighted-payoff column of stage t

  int plan_var(int t, int id, int a) const { return plan_offset[t] + id * own_actions + a; }
  int value_var(int t, int id) const { return value_offset[t] + id; }
};

// Adds the planner's plan variables (>= 0) and the responder's weighted
// payoff variables (free) for stages 1..depth, the flow equalities rooted at
// `own_root`, and one responder row per (responder set, responder action).
// Stage t payoffs carry the factor lambda^(t-1). Weighted payoffs after the
// last stage are the constant 0 and do not appear. depth 0 adds nothing.
SequenceBlock add_sequence_block(lp::LinearProgram& lp, const Perspective& view, int depth,
                                 std::span<const double> own_root, double lambda);

RealizationPlan read_plan(const SequenceBlock& block, const Perspective& view, std::span<const double> primal);

}  // namespace sbg
