// Per-run CSV logs.
//
//   episodes.csv  episode,steps,success,return
//   symbols.csv   episode,t,agent,symbol,context
//
// `success` is 0/1, `agent` is A1/A2, `symbol` and `context` are symbol
// indices 0..3 (context = the sender's PSP quadrant when it emitted).
#pragma once

#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "commlab/training.hpp"

namespace commlab::harness {

inline constexpr const char* kEpisodesFile = "episodes.csv";
inline constexpr const char* kSymbolsFile = "symbols.csv";
inline constexpr const char* kEpisodesHeader = "episode,steps,success,return";
inline constexpr const char* kSymbolsHeader = "episode,t,agent,symbol,context";

// Malformed or missing log; the message carries the file and line.
class LogError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shortest text that round-trips `x` exactly.
std::string format_real(double x);

void write_episodes_csv(const std::filesystem::path& path,
                        std::span<const EpisodeRecord> episodes);
void write_symbols_csv(const std::filesystem::path& path,
                       std::span<const EpisodeRecord> episodes);

// Reads both files from `run_dir` and rebuilds the episode records.
std::vector<EpisodeRecord> read_run_logs(const std::filesystem::path& run_dir);

}  // namespace commlab::harness
