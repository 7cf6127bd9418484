#include "commlab/neural/replay.hpp"

#include <stdexcept>

namespace commlab::neural {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : slots_(capacity) {
  if (capacity == 0) throw std::invalid_argument("replay capacity must be positive");
}

void ReplayBuffer::push(const Transition& t) {
  slots_[cursor_] = t;
  cursor_ = (cursor_ + 1) % slots_.size();
  if (size_ < slots_.size()) ++size_;
}

const Transition& ReplayBuffer::at(std::size_t i) const {
  if (i >= size_) throw std::out_of_range("ReplayBuffer::at");
  const std::size_t oldest = size_ < slots_.size() ? 0 : cursor_;
  return slots_[(oldest + i) % slots_.size()];
}

std::optional<std::vector<Transition>> ReplayBuffer::sample(std::size_t batch, Rng& rng) const {
  if (batch == 0 || size_ < batch) return std::nullopt;
  std::vector<Transition> out;
  out.reserve(batch);
  for (std::size_t i = 0; i < batch; ++i) out.push_back(slots_[rng.index(size_)]);
  return out;
}

}  // namespace commlab::neural
