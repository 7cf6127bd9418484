// Experiment configuration, read from a flat JSON object. Missing keys
// take the defaults below; unknown keys are rejected.
#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "commlab/protocol.hpp"
#include "commlab/training.hpp"

namespace commlab::harness {

class ConfigError : public std::runtime_error {
 public:
  enum class Kind { Io, Parse, UnknownKey, InvalidValue };
  ConfigError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

struct Config {
  int grid_size = 5;
  int episodes = 500;
  int runs = 10;
  int max_steps = 100;
  double gamma = 0.95;
  double lr = 1e-3;
  double epsilon = 0.1;
  int buffer_capacity = 2000;
  int batch_size = 32;
  int hidden_units = 32;
  std::uint64_t base_seed = 0;
  std::vector<Condition> conditions{Condition::EC, Condition::PSP};
  std::string output_dir = "results";
  int target_sync = 200;
  bool bootstrap_truncation = true;
  int updates_per_step = 2;

  TrainingParams training(Condition condition) const;
  std::uint64_t seed(int run_index) const { return base_seed + static_cast<std::uint64_t>(run_index); }

  // Canonical JSON text of every field, keys in declaration order.
  std::string to_json() const;
};

// Throws ConfigError; the message names the offending key.
Config parse_config(std::string_view json_text);
Config load_config(const std::filesystem::path& path);

}  // namespace commlab::harness
