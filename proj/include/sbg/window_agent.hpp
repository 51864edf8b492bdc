#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include "sbg/agent.hpp"
#include "sbg/game_model.hpp"
#include "sbg/history_index.hpp"
#include "sbg/sequence_form.hpp"
#include "sbg/stat_updater.hpp"

namespace sbg {

enum class UpdateHorizon {
  // The vector payoff update always looks n stages ahead (clipped to the
  // stages left in the game).
  FixedN,
  // The update looks ahead only to the end of the current window.
  RemainingWindow,
};

struct WindowConfig {
  int window_n = 1;
  int total_horizon = 1;
  UpdateHorizon update_horizon = UpdateHorizon::FixedN;
  // Keep updating the vector payoff inside the last window, where no later
  // window consumes it. Off by default: it only matters for traces and
  // costs one dual solve per stage at the full window depth.
  bool update_in_last_window = false;
  std::int64_t capacity = kDefaultVariableCapacity;
};

// Strategy of one window, solved at the statistic of its first stage.
struct WindowPlan {
  int index = 0;  // 0-based window number
  int start = 1;  // global stage of the first window stage
  int length = 1;
  RealizationPlan plan;
  BehavioralStrategy strategy;
};

// Sufficient statistic and active window at one public history.
struct StatisticNode {
  int t = 1;
  Belief belief;        // own belief (p_t or q_t)
  VectorPayoff payoff;  // nu_t for player one, mu_t for player two
  bool payoff_current = true;
  std::shared_ptr<const WindowPlan> window;
};

// Solves and caches the window-by-window strategy of one player. The
// statistic is a function of the public history only, so every solve is
// memoized by public history and shared by all agents of the planner.
class WindowPlanner {
 public:
  WindowPlanner(const GameSpec& spec, Side side, const WindowConfig& config);

  const GameSpec& spec() const { return spec_; }
  Side side() const { return side_; }
  const WindowConfig& config() const { return config_; }

  // Node at the public history `pairs` (one pair per completed stage).
  const StatisticNode& node(const std::vector<int>& pairs);

  // Realized stage strategy of the active window at `node`, marginalized
  // over the own histories compatible with the window's public pairs.
  StageStrategy realized_stage_strategy(const StatisticNode& node, std::span<const int> window_pairs) const;

 private:
  std::unique_ptr<StatisticNode> root() const;
  std::unique_ptr<StatisticNode> advance(const StatisticNode& from, std::span<const int> window_pairs, int pair) const;
  std::shared_ptr<const WindowPlan> solve_window(const StatisticNode& at, int index) const;

  GameSpec spec_;
  Side side_;
  WindowConfig config_;
  std::map<std::vector<int>, std::unique_ptr<StatisticNode>> nodes_;
};

// Algorithm agent for one player backed by a (possibly shared) planner.
class WindowAgent : public Agent {
 public:
  explicit WindowAgent(std::shared_ptr<WindowPlanner> planner);

  void begin(int own_state) override;
  std::vector<double> act() override;
  void observe(int a, int b, int own_next_state) override;

  const StatisticNode& statistic() const { return *node_; }
  const std::vector<int>& public_history() const { return pairs_; }

 private:
  std::shared_ptr<WindowPlanner> planner_;
  std::vector<int> pairs_;
  std::vector<int> window_states_;
  const StatisticNode* node_ = nullptr;
};

// Window agent whose window spans the whole game: the optimal player.
AgentFactory optimal_agent_factory(const GameSpec& spec, Side side);
AgentFactory window_agent_factory(const GameSpec& spec, Side side, const WindowConfig& config);

}  // namespace sbg
