#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "commlab/gridworld.hpp"
#include "commlab/rng.hpp"

namespace commlab::neural {

struct Transition {
  Observation obs{};
  int move = 0;
  std::optional<int> symbol;  // set only when the comm head is learned
  double reward = 0.0;
  Observation next_obs{};
  bool done = false;  // next state is terminal: the TD target does not bootstrap

  friend bool operator==(const Transition&, const Transition&) = default;
};

// Fixed-capacity ring buffer; the oldest transition is overwritten first.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  void push(const Transition& t);

  // `batch` transitions drawn uniformly with replacement, or nullopt when
  // fewer than `batch` transitions are stored.
  std::optional<std::vector<Transition>> sample(std::size_t batch, Rng& rng) const;

  std::size_t size() const { return size_; }
  std::size_t capacity() const { return slots_.size(); }

  // i-th oldest stored transition, i < size().
  const Transition& at(std::size_t i) const;

 private:
  std::vector<Transition> slots_;
  std::size_t cursor_ = 0;  // next slot to write
  std::size_t size_ = 0;
};

}  // namespace commlab::neural
