#pragma once

#include <cstdint>
#include <vector>

#include "sbg/game_model.hpp"
#include "sbg/history_index.hpp"
#include "sbg/sequence_form.hpp"

namespace sbg {

// One stage of a player's strategy as an (action x own state) matrix; every
// column is a distribution over actions.
struct StageStrategy {
  int num_actions = 1;
  int num_states = 1;
  std::vector<double> probs;  // [a * num_states + s]

  StageStrategy() = default;
  StageStrategy(int actions, int states) : num_actions(actions), num_states(states), probs(actions * states, 0.0) {}

  double operator()(int a, int s) const { return probs[static_cast<std::size_t>(a) * num_states + s]; }
  double& operator()(int a, int s) { return probs[static_cast<std::size_t>(a) * num_states + s]; }
  // Probability of action a when the state is drawn from `belief`.
  double marginal(int a, std::span<const double> belief) const;
};

// The stage-one part of a behavioral strategy (information sets {k}).
StageStrategy stage_one(const BehavioralStrategy& strategy);

// Bayes update of player one's belief after the public pair (a, b):
//   p+(k') = sum_k P_ab(k,k') p(k) X(a,k) / xbar(a).
// When xbar(a) <= 1e-9 the likelihood is dropped and the prior is pushed
// through the transition.
Belief update_belief_p(const GameSpec& spec, const Belief& p, const StageStrategy& x, int a, int b);

// Mirror for player two: q+(l') = sum_l Q_ab(l,l') q(l) Y(b,l) / ybar(b).
Belief update_belief_q(const GameSpec& spec, const Belief& q, const StageStrategy& y, int a, int b);

struct VectorPayoffUpdate {
  // Vector payoff for the next stage given the observed pair.
  VectorPayoff next;
  // Optimal objective (rho* or phi*), equal to the dual game value.
  double value = 0.0;
  // Every pair's vector payoff, indexed by a * |B| + b.
  std::vector<VectorPayoff> by_pair;
};

// Player two's update of mu given its stage-one dual strategy Y*.
VectorPayoffUpdate update_mu(const GameSpec& spec, const VectorPayoff& mu, const Belief& q, const StageStrategy& y_star,
                             int a, int b, int n, double lambda, std::int64_t capacity = kDefaultVariableCapacity);

// Player one's update of nu given its stage-one dual strategy X*.
VectorPayoffUpdate update_nu(const GameSpec& spec, const VectorPayoff& nu, const Belief& p, const StageStrategy& x_star,
                             int a, int b, int n, double lambda, std::int64_t capacity = kDefaultVariableCapacity);

}  // namespace sbg
