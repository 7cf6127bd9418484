#include "commlab/training.hpp"

#include <algorithm>
#include <stdexcept>

namespace commlab {
namespace {

// Independent RNG streams derived from a run seed.
enum Stream : std::uint64_t { kEpisodeStream = 0, kAgent1Init = 1, kAgent2Init = 2 };

}  // namespace

void TrainingParams::validate() const {
  if (grid.size < 2) throw std::invalid_argument("grid_size must be at least 2");
  if (grid.max_steps < 1) throw std::invalid_argument("max_steps must be positive");
  if (episodes < 1) throw std::invalid_argument("episodes must be positive");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::invalid_argument("gamma out of range");
  if (!(lr > 0.0)) throw std::invalid_argument("lr out of range");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw std::invalid_argument("epsilon out of range");
  if (buffer_capacity == 0) throw std::invalid_argument("buffer_capacity must be positive");
  if (batch_size == 0) throw std::invalid_argument("batch_size must be positive");
  if (batch_size > buffer_capacity) {
    throw std::invalid_argument("batch_size exceeds buffer_capacity");
  }
  if (hidden_units == 0) throw std::invalid_argument("hidden_units must be positive");
  if (target_sync < 0) throw std::invalid_argument("target_sync must be non-negative");
  if (updates_per_step < 1) throw std::invalid_argument("updates_per_step must be positive");
}

AgentNets AgentNets::create(const TrainingParams& params, Rng& rng) {
  auto move = neural::QHead::create(kObservationSize, params.hidden_units, kNumMoves, rng);
  CommPolicy comm = params.condition == Condition::EC
                        ? CommPolicy::ec(params.hidden_units, rng)
                        : CommPolicy::psp();
  return AgentNets{std::move(move), std::move(comm), neural::ReplayBuffer(params.buffer_capacity)};
}

MoveAction select_move(const neural::Mlp& qnet, const Observation& obs, double epsilon,
                       Rng& rng) {
  const auto q = qnet.predict(obs);
  return static_cast<MoveAction>(epsilon_greedy(q, epsilon, rng));
}

double td_target(double reward, bool done, const Observation& next_obs,
                 const neural::Mlp& qnet, double gamma) {
  if (done) return reward;
  const auto q = qnet.predict(next_obs);
  return reward + gamma * *std::max_element(q.begin(), q.end());
}

namespace {

// Mean squared TD error on the taken action index; updates `head` in place.
template <typename ActionOf>
double fit_head(neural::QHead& head, std::span<const neural::Transition> batch, double gamma,
                double lr, int target_sync, ActionOf action_of) {
  const neural::Mlp& net = head.online;
  const neural::Mlp& bootstrap = head.bootstrap(target_sync);
  const double n = static_cast<double>(batch.size());
  std::vector<double> targets(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    targets[i] = td_target(batch[i].reward, batch[i].done, batch[i].next_obs, bootstrap, gamma);
  }
  neural::MlpGradients grads(net.shape());
  std::vector<double> out_grad(net.shape().out, 0.0);
  double loss = 0.0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const auto cache = net.forward(batch[i].obs);
    const auto a = static_cast<std::size_t>(action_of(batch[i]));
    const double diff = cache.output[a] - targets[i];
    loss += diff * diff / n;
    std::fill(out_grad.begin(), out_grad.end(), 0.0);
    out_grad[a] = 2.0 * diff / n;
    net.backward(cache, out_grad, grads);
  }
  head.apply(grads, lr, target_sync);
  return loss;
}

}  // namespace

TrainStats train_step(AgentNets& agent, std::span<const neural::Transition> batch, double gamma,
                      double lr, int target_sync) {
  TrainStats stats;
  if (batch.empty()) return stats;
  for (const auto& t : batch) {
    if (t.move < 0 || t.move >= static_cast<int>(kNumMoves)) {
      throw std::invalid_argument("train_step: move index out of range");
    }
    if (agent.comm.learned() &&
        (!t.symbol || *t.symbol < 0 || *t.symbol >= static_cast<int>(kNumSymbols))) {
      throw std::invalid_argument("train_step: transition lacks a valid symbol action");
    }
  }
  stats.move_loss = fit_head(agent.move, batch, gamma, lr, target_sync,
                             [](const neural::Transition& t) { return t.move; });
  if (agent.comm.learned()) {
    stats.comm_loss = fit_head(*agent.comm.head, batch, gamma, lr, target_sync,
                               [](const neural::Transition& t) { return *t.symbol; });
  }
  return stats;
}

EpisodeRecord run_episode(const GridWorld& env, std::array<AgentNets, kNumAgents>& agents,
                          const TrainingParams& params, Rng& rng, int episode_index) {
  constexpr std::array<AgentId, kNumAgents> ids{AgentId::A1, AgentId::A2};
  EpisodeRecord rec;
  rec.episode = episode_index;

  EnvState state = env.reset(rng);
  std::array<std::optional<Symbol>, kNumAgents> received{};
  std::array<Observation, kNumAgents> obs{};
  for (std::size_t i = 0; i < kNumAgents; ++i) obs[i] = env.observe(state, ids[i], received[i]);

  bool done = false;
  while (!done) {
    const int t = state.step_count + 1;
    std::array<Symbol, kNumAgents> sent{};
    std::array<MoveAction, kNumAgents> moves{};
    for (std::size_t i = 0; i < kNumAgents; ++i) {
      sent[i] = agents[i].comm.emit(state, ids[i], obs[i], params.epsilon, rng);
      moves[i] = select_move(agents[i].move.online, obs[i], params.epsilon, rng);
      rec.symbols.push_back(
          {t, ids[i], sent[i], psp_symbol(state.position(ids[i]), state.treasure)});
    }

    const StepResult r = env.step(state, moves[0], moves[1]);
    received = {sent[1], sent[0]};
    std::array<Observation, kNumAgents> next_obs{};
    for (std::size_t i = 0; i < kNumAgents; ++i) {
      next_obs[i] = env.observe(r.state, ids[i], received[i]);
      neural::Transition tr;
      tr.obs = obs[i];
      tr.move = static_cast<int>(moves[i]);
      if (agents[i].comm.learned()) tr.symbol = static_cast<int>(sent[i]);
      tr.reward = r.reward;
      tr.next_obs = next_obs[i];
      tr.done = params.bootstrap_truncation ? r.success : r.done;
      agents[i].buffer.push(tr);
    }
    for (auto& agent : agents) {
      for (int k = 0; k < params.updates_per_step; ++k) {
        if (auto batch = agent.buffer.sample(params.batch_size, rng)) {
          train_step(agent, *batch, params.gamma, params.lr, params.target_sync);
        }
      }
    }

    rec.total_reward += r.reward;
    state = r.state;
    obs = next_obs;
    done = r.done;
    rec.success = r.success;
  }
  rec.steps = state.step_count;
  return rec;
}

RunResult run_training(const TrainingParams& params, std::uint64_t seed) {
  params.validate();
  const GridWorld env(params.grid);
  Rng init1(seed, kAgent1Init);
  Rng init2(seed, kAgent2Init);
  Rng rng(seed, kEpisodeStream);

  RunResult result{seed, params.condition, {},
                   {AgentNets::create(params, init1), AgentNets::create(params, init2)}};
  result.episodes.reserve(static_cast<std::size_t>(params.episodes));
  for (int e = 0; e < params.episodes; ++e) {
    result.episodes.push_back(run_episode(env, result.agents, params, rng, e));
  }
  return result;
}

}  // namespace commlab
