#include "commlab/harness/config.hpp"

#include <fstream>
#include <json.hpp>
#include <limits>
#include <set>
#include <sstream>

namespace commlab::harness {
namespace {

using Json = nlohmann::json;
using Kind = ConfigError::Kind;

[[noreturn]] void invalid(const std::string& msg) { throw ConfigError(Kind::InvalidValue, msg); }

int positive_int(const Json& v, const std::string& key) {
  if (!v.is_number_integer()) invalid(key + " must be an integer");
  const auto x = v.get<std::int64_t>();
  if (x < 1 || x > std::numeric_limits<int>::max()) invalid(key + " out of range");
  return static_cast<int>(x);
}

int non_negative_int(const Json& v, const std::string& key) {
  if (!v.is_number_integer()) invalid(key + " must be an integer");
  const auto x = v.get<std::int64_t>();
  if (x < 0 || x > std::numeric_limits<int>::max()) invalid(key + " out of range");
  return static_cast<int>(x);
}

double real_in(const Json& v, const std::string& key, double lo, double hi, bool lo_open) {
  if (!v.is_number()) invalid(key + " must be a number");
  const double x = v.get<double>();
  const bool ok = (lo_open ? x > lo : x >= lo) && x <= hi;
  if (!ok) invalid(key + " out of range");
  return x;
}

}  // namespace

TrainingParams Config::training(Condition condition) const {
  TrainingParams p;
  p.grid.size = grid_size;
  p.grid.max_steps = max_steps;
  p.episodes = episodes;
  p.gamma = gamma;
  p.lr = lr;
  p.epsilon = epsilon;
  p.buffer_capacity = static_cast<std::size_t>(buffer_capacity);
  p.batch_size = static_cast<std::size_t>(batch_size);
  p.hidden_units = static_cast<std::size_t>(hidden_units);
  p.target_sync = target_sync;
  p.bootstrap_truncation = bootstrap_truncation;
  p.updates_per_step = updates_per_step;
  p.condition = condition;
  return p;
}

std::string Config::to_json() const {
  nlohmann::ordered_json j;
  j["grid_size"] = grid_size;
  j["episodes"] = episodes;
  j["runs"] = runs;
  j["max_steps"] = max_steps;
  j["gamma"] = gamma;
  j["lr"] = lr;
  j["epsilon"] = epsilon;
  j["buffer_capacity"] = buffer_capacity;
  j["batch_size"] = batch_size;
  j["hidden_units"] = hidden_units;
  j["base_seed"] = base_seed;
  auto conds = nlohmann::ordered_json::array();
  for (auto c : conditions) conds.push_back(std::string(to_string(c)));
  j["conditions"] = conds;
  j["output_dir"] = output_dir;
  j["target_sync"] = target_sync;
  j["bootstrap_truncation"] = bootstrap_truncation;
  j["updates_per_step"] = updates_per_step;
  return j.dump(2) + "\n";
}

Config parse_config(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(Kind::Parse, std::string("config parse error: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError(Kind::Parse, "config parse error: expected a JSON object");

  Config c;
  for (const auto& [key, v] : doc.items()) {
    if (key == "grid_size") {
      c.grid_size = positive_int(v, key);
      if (c.grid_size < 2) invalid("grid_size out of range");
    } else if (key == "episodes") {
      c.episodes = positive_int(v, key);
      if (c.episodes < 2) invalid("episodes out of range");
    } else if (key == "runs") {
      c.runs = positive_int(v, key);
    } else if (key == "max_steps") {
      c.max_steps = positive_int(v, key);
    } else if (key == "gamma") {
      c.gamma = real_in(v, key, 0.0, 1.0, false);
    } else if (key == "lr") {
      c.lr = real_in(v, key, 0.0, 1.0, true);
    } else if (key == "epsilon") {
      c.epsilon = real_in(v, key, 0.0, 1.0, false);
    } else if (key == "buffer_capacity") {
      c.buffer_capacity = positive_int(v, key);
    } else if (key == "batch_size") {
      c.batch_size = positive_int(v, key);
    } else if (key == "hidden_units") {
      c.hidden_units = positive_int(v, key);
    } else if (key == "base_seed") {
      if (!v.is_number_unsigned()) invalid("base_seed must be a non-negative integer");
      c.base_seed = v.get<std::uint64_t>();
    } else if (key == "conditions") {
      if (!v.is_array() || v.empty()) invalid("conditions must be a non-empty array");
      std::set<Condition> seen;
      c.conditions.clear();
      for (const auto& item : v) {
        if (!item.is_string()) invalid("conditions entries must be \"EC\" or \"PSP\"");
        Condition cond;
        try {
          cond = parse_condition(item.get<std::string>());
        } catch (const std::invalid_argument&) {
          invalid("conditions entries must be \"EC\" or \"PSP\"");
        }
        if (!seen.insert(cond).second) invalid("conditions contains a duplicate");
        c.conditions.push_back(cond);
      }
    } else if (key == "output_dir") {
      if (!v.is_string() || v.get<std::string>().empty()) {
        invalid("output_dir must be a non-empty string");
      }
      c.output_dir = v.get<std::string>();
    } else if (key == "target_sync") {
      c.target_sync = non_negative_int(v, key);
    } else if (key == "bootstrap_truncation") {
      if (!v.is_boolean()) invalid("bootstrap_truncation must be true or false");
      c.bootstrap_truncation = v.get<bool>();
    } else if (key == "updates_per_step") {
      c.updates_per_step = positive_int(v, key);
    } else {
      throw ConfigError(Kind::UnknownKey, "unknown config key: " + key);
    }
  }
  if (c.batch_size > c.buffer_capacity) invalid("batch_size exceeds buffer_capacity");
  return c;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(Kind::Io, "cannot read config file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace commlab::harness
