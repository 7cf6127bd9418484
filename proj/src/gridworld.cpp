#include "commlab/gridworld.hpp"

#include <algorithm>
#include <stdexcept>

namespace commlab {

GridWorld::GridWorld(GridWorldParams params) : params_(params) {
  if (params_.size < 2) throw std::invalid_argument("grid size must be at least 2");
  if (params_.max_steps < 1) throw std::invalid_argument("max steps must be positive");
}

EnvState GridWorld::reset(Rng& rng) const {
  const int n = params_.size;
  const auto cell = static_cast<int>(rng.index(static_cast<std::size_t>(n * n)));
  EnvState s;
  s.pos_a1 = {0, 0};
  s.pos_a2 = {n - 1, n - 1};
  s.treasure = {cell % n, cell / n};
  s.step_count = 0;
  return s;
}

GridPos GridWorld::apply_move(GridPos pos, MoveAction move) const {
  switch (move) {
    case MoveAction::Up: ++pos.y; break;
    case MoveAction::Down: --pos.y; break;
    case MoveAction::Left: --pos.x; break;
    case MoveAction::Right: ++pos.x; break;
    case MoveAction::Stay: break;
  }
  const int hi = params_.size - 1;
  pos.x = std::clamp(pos.x, 0, hi);
  pos.y = std::clamp(pos.y, 0, hi);
  return pos;
}

bool GridWorld::is_success(const EnvState& s) const {
  return s.pos_a1 == s.treasure && s.pos_a2 == s.treasure;
}

bool GridWorld::is_terminal(const EnvState& s) const {
  return is_success(s) || s.step_count >= params_.max_steps;
}

StepResult GridWorld::step(const EnvState& state, MoveAction move_a1,
                           MoveAction move_a2) const {
  if (is_terminal(state)) {
    throw std::logic_error("step called on a terminated episode");
  }
  StepResult r;
  r.state = state;
  r.state.pos_a1 = apply_move(state.pos_a1, move_a1);
  r.state.pos_a2 = apply_move(state.pos_a2, move_a2);
  r.state.step_count = state.step_count + 1;
  r.success = is_success(r.state);
  r.reward = params_.step_penalty + (r.success ? params_.success_bonus : 0.0);
  r.done = r.success || r.state.step_count >= params_.max_steps;
  return r;
}

Observation GridWorld::observe(const EnvState& state, AgentId agent,
                               std::optional<Symbol> received) const {
  const double scale = 1.0 / static_cast<double>(params_.size - 1);
  const GridPos& self = state.position(agent);
  Observation obs{};
  obs[0] = self.x * scale;
  obs[1] = self.y * scale;
  obs[2] = state.treasure.x * scale;
  obs[3] = state.treasure.y * scale;
  if (received) obs[4 + static_cast<int>(*received)] = 1.0;
  return obs;
}

}  // namespace commlab
