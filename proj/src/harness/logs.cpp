#include "commlab/harness/logs.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace commlab::harness {
namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

class CsvReader {
 public:
  CsvReader(const std::filesystem::path& path, const char* header) : path_(path), in_(path) {
    if (!in_) throw LogError(path.string() + ": missing or unreadable");
    std::string first;
    if (!std::getline(in_, first) || strip(first) != header) {
      fail("expected header '" + std::string(header) + "'");
    }
    line_no_ = 1;
  }

  // Next row split into exactly `n` fields; false at end of file.
  bool next(std::vector<std::string>& fields, std::size_t n) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      line = strip(line);
      if (line.empty()) continue;
      fields = split(line);
      if (fields.size() != n) fail("expected " + std::to_string(n) + " fields");
      return true;
    }
    return false;
  }

  long integer(const std::string& s) {
    long v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) fail("bad integer '" + s + "'");
    return v;
  }

  double real(const std::string& s) {
    double v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) fail("bad number '" + s + "'");
    return v;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw LogError(path_.string() + ":" + std::to_string(line_no_) + ": " + msg);
  }

 private:
  static std::string strip(std::string s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
  }

  std::filesystem::path path_;
  std::ifstream in_;
  long line_no_ = 0;
};

}  // namespace

std::string format_real(double x) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, p);
}

void write_episodes_csv(const std::filesystem::path& path,
                        std::span<const EpisodeRecord> episodes) {
  auto out = open_out(path);
  out << kEpisodesHeader << '\n';
  for (const auto& e : episodes) {
    out << e.episode << ',' << e.steps << ',' << (e.success ? 1 : 0) << ','
        << format_real(e.total_reward) << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

void write_symbols_csv(const std::filesystem::path& path,
                       std::span<const EpisodeRecord> episodes) {
  auto out = open_out(path);
  out << kSymbolsHeader << '\n';
  for (const auto& e : episodes) {
    for (const auto& s : e.symbols) {
      out << e.episode << ',' << s.t << ',' << (s.agent == AgentId::A1 ? "A1" : "A2") << ','
          << static_cast<int>(s.symbol) << ',' << static_cast<int>(s.context) << '\n';
    }
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::vector<EpisodeRecord> read_run_logs(const std::filesystem::path& run_dir) {
  std::vector<EpisodeRecord> episodes;
  std::vector<std::string> f;
  {
    CsvReader csv(run_dir / kEpisodesFile, kEpisodesHeader);
    while (csv.next(f, 4)) {
      EpisodeRecord e;
      e.episode = static_cast<int>(csv.integer(f[0]));
      e.steps = static_cast<int>(csv.integer(f[1]));
      const long success = csv.integer(f[2]);
      e.total_reward = csv.real(f[3]);
      if (e.episode != static_cast<int>(episodes.size())) csv.fail("episodes out of order");
      if (e.steps < 1) csv.fail("steps must be positive");
      if (success != 0 && success != 1) csv.fail("success must be 0 or 1");
      e.success = success == 1;
      episodes.push_back(std::move(e));
    }
    if (episodes.empty()) csv.fail("no episodes");
  }
  {
    CsvReader csv(run_dir / kSymbolsFile, kSymbolsHeader);
    while (csv.next(f, 5)) {
      const long ep = csv.integer(f[0]);
      if (ep < 0 || ep >= static_cast<long>(episodes.size())) csv.fail("unknown episode");
      SymbolEvent ev;
      ev.t = static_cast<int>(csv.integer(f[1]));
      if (f[2] == "A1") {
        ev.agent = AgentId::A1;
      } else if (f[2] == "A2") {
        ev.agent = AgentId::A2;
      } else {
        csv.fail("agent must be A1 or A2");
      }
      const long sym = csv.integer(f[3]);
      const long ctx = csv.integer(f[4]);
      if (sym < 0 || sym > 3 || ctx < 0 || ctx > 3) csv.fail("symbol index out of range");
      auto& rec = episodes[static_cast<std::size_t>(ep)];
      if (ev.t < 1 || ev.t > rec.steps) csv.fail("timestep outside the episode");
      ev.symbol = static_cast<Symbol>(sym);
      ev.context = static_cast<Symbol>(ctx);
      rec.symbols.push_back(ev);
    }
  }
  return episodes;
}

}  // namespace commlab::harness
