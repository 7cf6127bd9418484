// The two ways an agent fills the communication channel.
//
//   PSP: a fixed rule mapping the sign quadrant of the sender's offset to
//        the treasure onto a symbol.
//   EC:  a learned 8->hidden->4 Q-head over symbol-actions, chosen
//        epsilon-greedily and trained with the movement head's TD rule.
#pragma once

#include <array>
#include <optional>
#include <span>
#include <string_view>

#include "commlab/gridworld.hpp"
#include "commlab/neural/mlp.hpp"
#include "commlab/neural/qhead.hpp"
#include "commlab/rng.hpp"

namespace commlab {

enum class Condition { EC, PSP };

std::string_view to_string(Condition c);
// Accepts "EC" / "PSP"; throws std::invalid_argument otherwise.
Condition parse_condition(std::string_view s);

// dx = treasure.x - self.x, dy = treasure.y - self.y:
//   dx>=0,dy>=0 -> A   dx>=0,dy<0 -> B   dx<0,dy>=0 -> C   dx<0,dy<0 -> D
Symbol psp_symbol(GridPos self, GridPos treasure);

std::array<double, kNumSymbols> encode_symbol(std::optional<Symbol> s);
// Inverse of encode_symbol. Throws std::invalid_argument when the vector
// is not all-zero or one-hot.
std::optional<Symbol> decode_symbol(std::span<const double> v);

// Index of the largest value; ties go to the lowest index.
std::size_t argmax(std::span<const double> values);

// With probability epsilon a uniform index in [0, n), otherwise argmax.
// Draws one uniform, plus one index only on the exploratory branch.
std::size_t epsilon_greedy(std::span<const double> values, double epsilon, Rng& rng);

Symbol ec_symbol_select(const neural::Mlp& head, const Observation& obs, double epsilon,
                        Rng& rng);

// Communication policy owned by one agent.
struct CommPolicy {
  Condition condition = Condition::PSP;
  std::optional<neural::QHead> head;  // EC only, output size 4

  static CommPolicy psp();
  static CommPolicy ec(std::size_t hidden, Rng& rng, neural::AdamParams adam = {});

  bool learned() const { return head.has_value(); }

  // Emits the symbol for this timestep. PSP draws nothing from `rng`.
  Symbol emit(const EnvState& state, AgentId self, const Observation& obs, double epsilon,
              Rng& rng) const;
};

}  // namespace commlab
