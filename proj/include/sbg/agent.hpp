#pragma once

#include <functional>
#include <memory>
#include <vector>

namespace sbg {

// A player as seen by the simulator. It only ever learns its own states and
// the public action pairs.
class Agent {
 public:
  virtual ~Agent() = default;
  // Starts an episode in the given own initial state.
  virtual void begin(int own_state) = 0;
  // Distribution over own actions at the current stage.
  virtual std::vector<double> act() = 0;
  // Both actions of the stage just played and the own state that follows.
  virtual void observe(int a, int b, int own_next_state) = 0;
};

using AgentFactory = std::function<std::unique_ptr<Agent>()>;

}  // namespace sbg
