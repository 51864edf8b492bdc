#pragma once

#include <cstdint>
#include <vector>

#include "sbg/game_model.hpp"

namespace sbg {

// Largest number of pure behavioral strategies per player the oracle accepts.
inline constexpr std::int64_t kOracleStrategyLimit = 4096;

// A pure behavioral strategy: one action per information set, stored as
// [t-1][id] over the player's dense ids. Sets the strategy itself makes
// unreachable hold -1.
using PureStrategy = std::vector<std::vector<int>>;

// Every pure behavioral strategy of `side` over n stages, up to actions at
// sets its own earlier choices exclude. Throws CapacityError above `limit`.
std::vector<PureStrategy> enumerate_pure_strategies(const GameSpec& spec, Side side, int n,
                                                    std::int64_t limit = kOracleStrategyLimit);

// Exact expected discounted payoff of two pure strategies by forward
// evaluation over the state chains.
double evaluate_pure(const GameSpec& spec, const Belief& p, const Belief& q, const PureStrategy& s1,
                     const PureStrategy& s2, double lambda);

// Value of the n-stage game from the matrix game over pure behavioral
// strategies, solved exactly by iterating restricted matrix games and adding
// best responses until the two bounds meet.
double oracle_value(const GameSpec& spec, const Belief& p, const Belief& q, int n, double lambda);

}  // namespace sbg
