#pragma once

#include <cstdint>
#include <span>

#include "sbg/game_model.hpp"
#include "sbg/history_index.hpp"
#include "sbg/lp.hpp"
#include "sbg/sequence_form.hpp"

namespace sbg {

// A sequence-form LP together with the column layout of its block.
struct SequenceProgram {
  lp::LinearProgram lp;
  SequenceBlock block;
};

// Player one's LP: max sum_l q(l) U_{J_1} over plans R and weighted payoffs U.
SequenceProgram build_primal_p1(const GameSpec& spec, const Belief& p, const Belief& q, int n, double lambda,
                                std::int64_t capacity = kDefaultVariableCapacity);

// Player two's LP: min sum_k p(k) Z_{I_1} over plans S and weighted payoffs Z.
SequenceProgram build_primal_p2(const GameSpec& spec, const Belief& p, const Belief& q, int n, double lambda,
                                std::int64_t capacity = kDefaultVariableCapacity);

struct PrimalResult {
  Side side = Side::PlayerOne;
  double value = 0.0;
  RealizationPlan plan;
  BehavioralStrategy strategy;
  // U* over player two's sets (side one) or Z* over player one's (side two),
  // evaluated exactly for the returned plan.
  WeightedPayoffs weighted_payoffs;
  // nu* = -U*_{J_1} for side one, mu* = -Z*_{I_1} for side two.
  VectorPayoff initial_vector_payoff;
};

PrimalResult solve_primal(const GameSpec& spec, const Belief& p, const Belief& q, int n, double lambda, Side side,
                          std::int64_t capacity = kDefaultVariableCapacity);

// sigma(I_t)(a) = R(I_t, a) / (reach weight of I_t); uniform where the
// information set is unreachable (weight <= 1e-9).
BehavioralStrategy extract_strategy(const RealizationPlan& plan, const GameSpec& spec);

// Inverse of extract_strategy: rebuilds the plan from a strategy and the
// owner's initial belief.
RealizationPlan compose_plan(const BehavioralStrategy& strategy, const GameSpec& spec, std::span<const double> root);

// Solves an LP that must have an optimum; anything else is a NumericalError.
lp::LpSolution solve_bounded(const lp::LinearProgram& program, const char* what);

}  // namespace sbg
