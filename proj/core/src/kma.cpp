#include "rfdeauth/kma.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>

#include "rfdeauth/error.hpp"
#include "rfdeauth/structured_text.hpp"

namespace rfdeauth {

std::size_t InputTrace::size() const {
  std::size_t n = 0;
  for (const auto& [w, ticks] : inputs) n += ticks.size();
  return n;
}

IdleTracker::IdleTracker(std::vector<int> workstations, Tick origin) : labels_(std::move(workstations)) {
  std::sort(labels_.begin(), labels_.end());
  for (int w : labels_) last_[w] = origin;
}

void IdleTracker::record(int workstation, Tick t) {
  const auto it = last_.find(workstation);
  if (it == last_.end()) throw ValidationError("input for unknown workstation w" + std::to_string(workstation));
  if (t < it->second) throw ValidationError("inputs must be recorded in time order");
  it->second = t;
}

Tick IdleTracker::last_input(int workstation) const {
  const auto it = last_.find(workstation);
  if (it == last_.end()) throw ValidationError("unknown workstation w" + std::to_string(workstation));
  return it->second;
}

std::set<int> IdleTracker::idle_set(Tick t, Tick s) const {
  std::set<int> out;
  for (const auto& [w, last] : last_) {
    if (s == 0 || last <= t - s) out.insert(w);
  }
  return out;
}

std::set<int> idle_set(const InputTrace& inputs, std::span<const int> workstations, Tick t, Tick s) {
  std::set<int> out;
  for (int w : workstations) {
    bool busy = false;
    if (const auto it = inputs.inputs.find(w); it != inputs.inputs.end()) {
      // Any input in (t - s, t]?
      const auto first = std::upper_bound(it->second.begin(), it->second.end(), t - s);
      busy = first != it->second.end() && *first <= t;
    }
    if (!busy) out.insert(w);
  }
  return out;
}

InputTrace simulate_inputs(Tick length, const Occupancy& occupancy, double p, Tick interval, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("input probability must lie in [0, 1]");
  if (interval < 1) throw ValidationError("input interval must be at least one tick");
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution active(p);
  InputTrace trace;
  for (std::size_t u = 0; u < occupancy.users.size(); ++u) {
    const int user = occupancy.users[u];
    auto& out = trace.inputs[user];
    const auto& away = occupancy.away[u];
    std::vector<Tick> seated;
    std::size_t next_away = 0;  // away intervals are sorted and disjoint
    for (Tick start = 0; start < length; start += interval) {
      const Tick end = std::min(start + interval, length);
      seated.clear();
      for (Tick t = start; t < end; ++t) {
        while (next_away < away.size() && away[next_away].end <= t) ++next_away;
        if (next_away < away.size() && t >= away[next_away].begin) continue;
        seated.push_back(t);
      }
      if (seated.empty()) continue;
      if (!active(rng)) continue;
      std::uniform_int_distribution<std::size_t> pick(0, seated.size() - 1);
      out.push_back(seated[pick(rng)]);
    }
  }
  return trace;
}

void write_inputs(std::ostream& out, const InputTrace& inputs, double sample_rate_hz) {
  std::vector<std::pair<Tick, int>> rows;
  for (const auto& [w, ticks] : inputs.inputs) {
    for (Tick t : ticks) rows.emplace_back(t, w);
  }
  std::sort(rows.begin(), rows.end());
  out << "t,workstation\n";
  for (const auto& [t, w] : rows) out << format_time(t, sample_rate_hz) << ",w" << w << '\n';
}

void write_inputs(const std::filesystem::path& path, const InputTrace& inputs, double sample_rate_hz) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  write_inputs(out, inputs, sample_rate_hz);
}

InputTrace read_inputs(std::istream& in, double sample_rate_hz, const std::string& source) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != "t,workstation") {
    throw InputError(source + ":1: expected header 't,workstation'");
  }
  InputTrace trace;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto f = split_list(line);
    const auto where = source + ":" + std::to_string(line_no);
    if (f.size() != 2) throw InputError(where + ": expected 2 fields");
    try {
      const Tick t = parse_time(f[0], sample_rate_hz);
      const Label w = parse_label(f[1]);
      if (w.is_entry()) throw InputError("w0 is not a workstation");
      trace.inputs[w.index].push_back(t);
    } catch (const InputError& e) {
      throw InputError(where + ": " + e.what());
    }
  }
  for (auto& [w, ticks] : trace.inputs) {
    std::sort(ticks.begin(), ticks.end());
    ticks.erase(std::unique(ticks.begin(), ticks.end()), ticks.end());
  }
  return trace;
}

InputTrace read_inputs(const std::filesystem::path& path, double sample_rate_hz) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  return read_inputs(in, sample_rate_hz, path.string());
}

}  // namespace rfdeauth
