#pragma once

#include "sbg/game_model.hpp"
#include "sbg/sequence_form.hpp"

namespace sbg {

struct BestResponseResult {
  // Expected payoff the opponent's best response concedes, weighted by the
  // opponent's initial belief.
  double value = 0.0;
  // U* (against a player-one plan) or Z* (against a player-two plan).
  WeightedPayoffs weighted_payoffs;
};

// Player two best-responds to player one's plan: value = sum_l q(l) U*_{J_1}.
BestResponseResult best_response_vs_p1(const GameSpec& spec, const RealizationPlan& plan, const Belief& q, int n,
                                       double lambda);

// Player one best-responds to player two's plan: value = sum_k p(k) Z*_{I_1}.
BestResponseResult best_response_vs_p2(const GameSpec& spec, const RealizationPlan& plan, const Belief& p, int n,
                                       double lambda);

// Same quantities by backward recursion instead of an LP: at every
// opponent information set, the best opponent action given the
// continuation values.
BestResponseResult best_response_recursive(const GameSpec& spec, const RealizationPlan& plan,
                                           std::span<const double> opp_belief, double lambda);

}  // namespace sbg
