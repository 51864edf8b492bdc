#include "sbg/window_agent.hpp"

#include <algorithm>

#include "sbg/dual_solver.hpp"
#include "sbg/errors.hpp"
#include "sbg/primal_solver.hpp"

namespace sbg {

WindowPlanner::WindowPlanner(const GameSpec& spec, Side side, const WindowConfig& config)
    : spec_(spec), side_(side), config_(config) {
  validate(spec_);
  if (config_.window_n < 1) throw DomainError("window agent: window size must be at least 1");
  if (config_.total_horizon < config_.window_n) throw DomainError("window agent: horizon shorter than the window");
  check_capacity(spec_, config_.window_n, config_.capacity);
}

const StatisticNode& WindowPlanner::node(const std::vector<int>& pairs) {
  if (auto it = nodes_.find(pairs); it != nodes_.end()) return *it->second;
  if (static_cast<int>(pairs.size()) > config_.total_horizon) {
    throw DomainError("window agent: public history longer than the game");
  }
  std::unique_ptr<StatisticNode> made;
  if (pairs.empty()) {
    made = root();
  } else {
    const std::vector<int> prefix(pairs.begin(), pairs.end() - 1);
    const StatisticNode& parent = node(prefix);
    const std::span<const int> window_pairs = std::span<const int>(prefix).subspan(parent.window->start - 1);
    made = advance(parent, window_pairs, pairs.back());
  }
  return *nodes_.emplace(pairs, std::move(made)).first->second;
}

std::unique_ptr<StatisticNode> WindowPlanner::root() const {
  auto out = std::make_unique<StatisticNode>();
  out->t = 1;
  const bool p1 = side_ == Side::PlayerOne;
  out->belief = Belief(p1 ? spec_.p0 : spec_.q0);
  const int length = std::min(config_.window_n, config_.total_horizon);
  const PrimalResult primal = solve_primal(spec_, Belief(spec_.p0), Belief(spec_.q0), length, spec_.lambda, side_,
                                           config_.capacity);
  out->payoff = primal.initial_vector_payoff;
  auto window = std::make_shared<WindowPlan>();
  window->index = 0;
  window->start = 1;
  window->length = length;
  window->plan = primal.plan;
  window->strategy = primal.strategy;
  out->window = std::move(window);
  return out;
}

std::shared_ptr<const WindowPlan> WindowPlanner::solve_window(const StatisticNode& at, int index) const {
  auto window = std::make_shared<WindowPlan>();
  window->index = index;
  window->start = at.t;
  window->length = std::min(config_.window_n, config_.total_horizon - at.t + 1);
  const DualResult dual =
      side_ == Side::PlayerOne
          ? solve_dual2(spec_, at.belief, at.payoff, window->length, spec_.lambda, config_.capacity)
          : solve_dual1(spec_, at.payoff, at.belief, window->length, spec_.lambda, config_.capacity);
  window->plan = dual.plan;
  window->strategy = dual.strategy;
  return window;
}

StageStrategy WindowPlanner::realized_stage_strategy(const StatisticNode& node,
                                                     std::span<const int> window_pairs) const {
  const WindowPlan& w = *node.window;
  const int d = static_cast<int>(window_pairs.size()) + 1;
  const SideIndex idx = w.plan.index();
  const int actions = w.plan.num_actions;
  const int states = w.plan.num_states;
  StageStrategy x(actions, states);
  std::vector<double> reach(states, 0.0);
  for (int id : idx.compatible(d, idx.public_index(window_pairs))) {
    const int s = idx.last_state(d, id);
    for (int a = 0; a < actions; ++a) {
      x(a, s) += w.plan.at(d, id, a);
      reach[s] += w.plan.at(d, id, a);
    }
  }
  // States the plan cannot be in at this public history act uniformly.
  for (int s = 0; s < states; ++s)
    for (int a = 0; a < actions; ++a) x(a, s) = reach[s] > 1e-9 ? x(a, s) / reach[s] : 1.0 / actions;
  return x;
}

std::unique_ptr<StatisticNode> WindowPlanner::advance(const StatisticNode& from, std::span<const int> window_pairs,
                                                      int pair) const {
  const WindowPlan& w = *from.window;
  const int t = from.t;
  const int d = t - w.start + 1;
  const int a = pair / spec_.num_b;
  const int b = pair % spec_.num_b;
  const bool p1 = side_ == Side::PlayerOne;
  const int horizon = config_.total_horizon;

  auto out = std::make_unique<StatisticNode>();
  out->t = t + 1;
  const StageStrategy realized = realized_stage_strategy(from, window_pairs);
  out->belief = p1 ? update_belief_p(spec_, from.belief, realized, a, b)
                   : update_belief_q(spec_, from.belief, realized, a, b);

  const bool last_window = w.start + w.length - 1 == horizon;
  if (t < horizon && from.payoff_current && (!last_window || config_.update_in_last_window)) {
    const int lookahead = config_.update_horizon == UpdateHorizon::FixedN ? std::min(config_.window_n, horizon - t + 1)
                                                                          : w.length - d + 1;
    // At a later window's first stage the window strategy already is the
    // dual solution at this statistic and depth.
    StageStrategy dual_stage;
    if (w.index > 0 && d == 1 && lookahead == w.length) {
      dual_stage = stage_one(w.strategy);
    } else {
      const DualResult dual =
          p1 ? solve_dual2(spec_, from.belief, from.payoff, lookahead, spec_.lambda, config_.capacity)
             : solve_dual1(spec_, from.payoff, from.belief, lookahead, spec_.lambda, config_.capacity);
      dual_stage = stage_one(dual.strategy);
    }
    const VectorPayoffUpdate update =
        p1 ? update_nu(spec_, from.payoff, from.belief, dual_stage, a, b, lookahead, spec_.lambda, config_.capacity)
           : update_mu(spec_, from.payoff, from.belief, dual_stage, a, b, lookahead, spec_.lambda, config_.capacity);
    out->payoff = update.next;
  } else {
    out->payoff = from.payoff;
    out->payoff_current = false;
  }

  if (d == w.length && t + 1 <= horizon) {
    if (!out->payoff_current) throw DomainError("window agent: a new window needs a current vector payoff");
    out->window = solve_window(*out, w.index + 1);
  } else {
    out->window = from.window;
  }
  return out;
}

WindowAgent::WindowAgent(std::shared_ptr<WindowPlanner> planner) : planner_(std::move(planner)) {}

void WindowAgent::begin(int own_state) {
  pairs_.clear();
  window_states_.assign(1, own_state);
  node_ = &planner_->node(pairs_);
}

std::vector<double> WindowAgent::act() {
  const WindowPlan& w = *node_->window;
  HistoryPath path;
  path.states = window_states_;
  path.pairs.assign(pairs_.begin() + (w.start - 1), pairs_.end());
  const int d = static_cast<int>(path.states.size());
  const int id = w.strategy.index().encode(path);
  const auto row = w.strategy.row(d, id);
  return std::vector<double>(row.begin(), row.end());
}

void WindowAgent::observe(int a, int b, int own_next_state) {
  const GameSpec& spec = planner_->spec();
  if (a < 0 || a >= spec.num_a || b < 0 || b >= spec.num_b) throw ValidationError("window agent: action out of range");
  pairs_.push_back(spec.pair_index(a, b));
  const StatisticNode& next = planner_->node(pairs_);
  if (next.window != node_->window) {
    window_states_.assign(1, own_next_state);
  } else {
    window_states_.push_back(own_next_state);
  }
  node_ = &next;
}

AgentFactory window_agent_factory(const GameSpec& spec, Side side, const WindowConfig& config) {
  auto planner = std::make_shared<WindowPlanner>(spec, side, config);
  return [planner]() -> std::unique_ptr<Agent> { return std::make_unique<WindowAgent>(planner); };
}

AgentFactory optimal_agent_factory(const GameSpec& spec, Side side) {
  WindowConfig config;
  config.window_n = spec.horizon;
  config.total_horizon = spec.horizon;
  return window_agent_factory(spec, side, config);
}

}  // namespace sbg
