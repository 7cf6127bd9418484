// Independent DQN learners playing the cooperative navigation task.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "commlab/gridworld.hpp"
#include "commlab/neural/mlp.hpp"
#include "commlab/neural/qhead.hpp"
#include "commlab/neural/replay.hpp"
#include "commlab/protocol.hpp"
#include "commlab/rng.hpp"

namespace commlab {

struct TrainingParams {
  GridWorldParams grid;
  int episodes = 500;
  double gamma = 0.95;
  double lr = 1e-3;
  double epsilon = 0.1;
  std::size_t buffer_capacity = 2000;
  std::size_t batch_size = 32;
  std::size_t hidden_units = 32;
  // Updates between target-network refreshes; 0 bootstraps from the
  // online network.
  int target_sync = 200;
  // Treat the step limit as truncation: bootstrap from the next state
  // instead of cutting the return. Only success is terminal then.
  bool bootstrap_truncation = true;
  // Gradient updates per agent per environment step, once the buffer
  // holds a full batch.
  int updates_per_step = 2;
  Condition condition = Condition::EC;

  // Throws std::invalid_argument describing the first invalid field.
  void validate() const;
};

// One agent's private learning state. Nothing here is shared between agents.
struct AgentNets {
  neural::QHead move;
  CommPolicy comm;
  neural::ReplayBuffer buffer;

  static AgentNets create(const TrainingParams& params, Rng& rng);
};

struct SymbolEvent {
  int t = 0;  // 1-based timestep within the episode
  AgentId agent = AgentId::A1;
  Symbol symbol = Symbol::A;
  Symbol context = Symbol::A;  // sender's PSP quadrant when it emitted

  friend bool operator==(const SymbolEvent&, const SymbolEvent&) = default;
};

struct EpisodeRecord {
  int episode = 0;
  int steps = 0;
  bool success = false;
  double total_reward = 0.0;
  std::vector<SymbolEvent> symbols;  // two per timestep, A1 then A2

  friend bool operator==(const EpisodeRecord&, const EpisodeRecord&) = default;
};

struct RunResult {
  std::uint64_t seed = 0;
  Condition condition = Condition::EC;
  std::vector<EpisodeRecord> episodes;
  std::array<AgentNets, kNumAgents> agents;
};

struct TrainStats {
  double move_loss = 0.0;
  std::optional<double> comm_loss;
};

MoveAction select_move(const neural::Mlp& qnet, const Observation& obs, double epsilon,
                       Rng& rng);

// reward if done, else reward + gamma * max_a Q(next_obs, a).
double td_target(double reward, bool done, const Observation& next_obs,
                 const neural::Mlp& qnet, double gamma);

// One Adam update of the movement head (and the comm head when learned)
// on the mean squared TD error of the taken actions. An empty batch is a
// no-op.
TrainStats train_step(AgentNets& agent, std::span<const neural::Transition> batch, double gamma,
                      double lr, int target_sync = 0);

// Plays one episode, learning online; `rng` drives the treasure, both
// agents' exploration and replay sampling.
EpisodeRecord run_episode(const GridWorld& env, std::array<AgentNets, kNumAgents>& agents,
                          const TrainingParams& params, Rng& rng, int episode_index);

// Fresh environment and agents, then `params.episodes` sequential episodes.
RunResult run_training(const TrainingParams& params, std::uint64_t seed);

}  // namespace commlab
