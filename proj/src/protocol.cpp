#include "commlab/protocol.hpp"

#include <stdexcept>
#include <string>

namespace commlab {

std::string_view to_string(Condition c) { return c == Condition::EC ? "EC" : "PSP"; }

Condition parse_condition(std::string_view s) {
  if (s == "EC") return Condition::EC;
  if (s == "PSP") return Condition::PSP;
  throw std::invalid_argument("unknown condition: " + std::string(s));
}

Symbol psp_symbol(GridPos self, GridPos treasure) {
  const int dx = treasure.x - self.x;
  const int dy = treasure.y - self.y;
  if (dx >= 0) return dy >= 0 ? Symbol::A : Symbol::B;
  return dy >= 0 ? Symbol::C : Symbol::D;
}

std::array<double, kNumSymbols> encode_symbol(std::optional<Symbol> s) {
  std::array<double, kNumSymbols> v{};
  if (s) v[static_cast<std::size_t>(*s)] = 1.0;
  return v;
}

std::optional<Symbol> decode_symbol(std::span<const double> v) {
  if (v.size() != kNumSymbols) throw std::invalid_argument("decode_symbol: wrong length");
  std::optional<Symbol> found;
  for (std::size_t i = 0; i < kNumSymbols; ++i) {
    if (v[i] == 0.0) continue;
    if (v[i] != 1.0 || found) throw std::invalid_argument("decode_symbol: not one-hot");
    found = static_cast<Symbol>(i);
  }
  return found;
}

std::size_t argmax(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("argmax of empty range");
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

std::size_t epsilon_greedy(std::span<const double> values, double epsilon, Rng& rng) {
  if (rng.uniform() < epsilon) return rng.index(values.size());
  return argmax(values);
}

Symbol ec_symbol_select(const neural::Mlp& head, const Observation& obs, double epsilon,
                        Rng& rng) {
  const auto q = head.predict(obs);
  return static_cast<Symbol>(epsilon_greedy(q, epsilon, rng));
}

CommPolicy CommPolicy::psp() { return {}; }

CommPolicy CommPolicy::ec(std::size_t hidden, Rng& rng, neural::AdamParams adam) {
  CommPolicy p;
  p.condition = Condition::EC;
  p.head = neural::QHead::create(kObservationSize, hidden, kNumSymbols, rng, adam);
  return p;
}

Symbol CommPolicy::emit(const EnvState& state, AgentId self, const Observation& obs,
                        double epsilon, Rng& rng) const {
  if (condition == Condition::PSP) return psp_symbol(state.position(self), state.treasure);
  return ec_symbol_select(head->online, obs, epsilon, rng);
}

}  // namespace commlab
