#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <random>
#include <string>
#include <span>
#include <vector>

#include "sbg/agent.hpp"
#include "sbg/game_model.hpp"

namespace sbg {

// Random stream of one episode: mt19937_64 seeded with splitmix64(seed).
class EpisodeRng {
 public:
  explicit EpisodeRng(std::uint64_t seed);
  // Uniform double in [0, 1) from the top 53 bits of one draw.
  double uniform();
  // Index drawn from `probs` by inverse CDF.
  int sample(std::span<const double> probs);

 private:
  std::mt19937_64 engine_;
};

struct StageRecord {
  int t = 1;
  int k = 0;
  int l = 0;
  int a = 0;
  int b = 0;
  double payoff = 0.0;  // lambda^(t-1) G
};

struct EpisodeTrace {
  std::uint64_t seed = 0;
  std::vector<StageRecord> stages;
  double total = 0.0;
};

// Plays spec.horizon stages: k_1 ~ p0, l_1 ~ q0, then per stage both
// actions, the payoff, the state transitions and both observe calls.
EpisodeTrace run_episode(const GameSpec& spec, Agent& first, Agent& second, std::uint64_t seed);

struct MonteCarloResult {
  int runs = 0;
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation, 0 for a single run
  double stderr_mean = 0.0;
  std::vector<std::uint64_t> seeds;
  std::vector<double> totals;
};

// Episode i uses seed base_seed + i and fresh agents from the factories.
MonteCarloResult run_monte_carlo(const GameSpec& spec, const AgentFactory& first, const AgentFactory& second,
                                 int num_runs, std::uint64_t base_seed);

// `seed,total` rows, then `runs,mean,stddev,stderr` and its row.
void write_results_csv(std::ostream& out, const MonteCarloResult& result);

// Stationary policy: one action distribution per own state.
class FixedPolicyAgent : public Agent {
 public:
  explicit FixedPolicyAgent(std::vector<std::vector<double>> by_state);

  void begin(int own_state) override { state_ = own_state; }
  std::vector<double> act() override { return by_state_[state_]; }
  void observe(int, int, int own_next_state) override { state_ = own_next_state; }

 private:
  std::vector<std::vector<double>> by_state_;
  int state_ = 0;
};

// Loads a policy file: {"1": [..], "2": [..]} mapping 1-based own states to
// action distributions. Checks it against the player's dimensions.
std::vector<std::vector<double>> load_fixed_policy(const std::string& path, int num_states, int num_actions);

AgentFactory fixed_agent_factory(std::vector<std::vector<double>> by_state);

}  // namespace sbg
