#pragma once

#include <cstdint>

#include "sbg/game_model.hpp"
#include "sbg/primal_solver.hpp"
#include "sbg/sequence_form.hpp"

namespace sbg {

// A dual-game LP: the primal block of the planner plus the scalar column
// (Z_0 or U_0) and one linking row per opponent initial state.
struct DualProgram {
  lp::LinearProgram lp;
  SequenceBlock block;
  int scalar_var = -1;
};

struct DualResult {
  double value = 0.0;
  RealizationPlan plan;
  BehavioralStrategy strategy;
  // Exact weighted payoffs of the returned plan (Z* for type one, U* for type two).
  WeightedPayoffs weighted_payoffs;
};

// Type one dual game, player two plans: w1 = min Z_0 with mu(k) + Z_{I_1} <= Z_0.
DualProgram build_dual1(const GameSpec& spec, const VectorPayoff& mu, const Belief& q, int n, double lambda,
                        std::int64_t capacity = kDefaultVariableCapacity);
DualResult solve_dual1(const GameSpec& spec, const VectorPayoff& mu, const Belief& q, int n, double lambda,
                       std::int64_t capacity = kDefaultVariableCapacity);

// Type two dual game, player one plans: w2 = max U_0 with nu(l) + U_{J_1} >= U_0.
DualProgram build_dual2(const GameSpec& spec, const Belief& p, const VectorPayoff& nu, int n, double lambda,
                        std::int64_t capacity = kDefaultVariableCapacity);
DualResult solve_dual2(const GameSpec& spec, const Belief& p, const VectorPayoff& nu, int n, double lambda,
                       std::int64_t capacity = kDefaultVariableCapacity);

}  // namespace sbg
