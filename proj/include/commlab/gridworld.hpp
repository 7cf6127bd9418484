// Two-agent cooperative navigation on a square grid.
//
// Both agents must stand on the treasure cell at the same time. Moves are
// applied simultaneously; moving into a wall leaves the agent in place.
// Every step costs -1 and the success step adds +10 (net +9). The
// episode ends on success or when the step budget is exhausted.
#pragma once

#include <array>
#include <cstddef>
#include <optional>

#include "commlab/rng.hpp"

namespace commlab {

struct GridPos {
  int x = 0;
  int y = 0;
  friend bool operator==(const GridPos&, const GridPos&) = default;
};

// Canonical ordering; the index is the Q-network output slot.
enum class MoveAction : int { Up = 0, Down = 1, Left = 2, Right = 3, Stay = 4 };
inline constexpr std::size_t kNumMoves = 5;

enum class AgentId : int { A1 = 0, A2 = 1 };
inline constexpr std::size_t kNumAgents = 2;

// Channel tokens C_A..C_D.
enum class Symbol : int { A = 0, B = 1, C = 2, D = 3 };
inline constexpr std::size_t kNumSymbols = 4;

inline constexpr std::size_t kObservationSize = 8;
using Observation = std::array<double, kObservationSize>;

struct EnvState {
  GridPos pos_a1;
  GridPos pos_a2;
  GridPos treasure;
  int step_count = 0;

  const GridPos& position(AgentId agent) const {
    return agent == AgentId::A1 ? pos_a1 : pos_a2;
  }
  friend bool operator==(const EnvState&, const EnvState&) = default;
};

struct StepResult {
  EnvState state;
  double reward = 0.0;
  bool done = false;
  bool success = false;
  friend bool operator==(const StepResult&, const StepResult&) = default;
};

struct GridWorldParams {
  int size = 5;
  int max_steps = 100;
  double step_penalty = -1.0;
  double success_bonus = 10.0;
};

class GridWorld {
 public:
  explicit GridWorld(GridWorldParams params = {});

  const GridWorldParams& params() const { return params_; }

  // Agents at opposite corners, treasure uniform over all cells.
  EnvState reset(Rng& rng) const;

  // Throws std::logic_error when `state` is already terminal.
  StepResult step(const EnvState& state, MoveAction move_a1, MoveAction move_a2) const;

  // (self_x, self_y, treasure_x, treasure_y) scaled to [0, 1], then the
  // one-hot received symbol (all zeros when nothing was received).
  Observation observe(const EnvState& state, AgentId agent,
                      std::optional<Symbol> received) const;

  bool is_success(const EnvState& state) const;
  bool is_terminal(const EnvState& state) const;

  GridPos apply_move(GridPos pos, MoveAction move) const;

 private:
  GridWorldParams params_;
};

}  // namespace commlab
