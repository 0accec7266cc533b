#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <span>
#include <vector>

#include "rfdeauth/rfsim.hpp"
#include "rfdeauth/types.hpp"

namespace rfdeauth {

// Per-workstation input times, sorted and unique.
struct InputTrace {
  std::map<int, std::vector<Tick>> inputs;  // workstation label -> ticks

  std::size_t size() const;
  friend bool operator==(const InputTrace&, const InputTrace&) = default;
};

// Last-input bookkeeping for the controller. A workstation that never saw an
// input counts its idle time from `origin`.
class IdleTracker {
 public:
  IdleTracker() = default;
  IdleTracker(std::vector<int> workstations, Tick origin = 0);

  void record(int workstation, Tick t);
  Tick last_input(int workstation) const;
  const std::vector<int>& workstations() const { return labels_; }

  // Workstations with no input in (t - s, t], s in ticks.
  std::set<int> idle_set(Tick t, Tick s) const;
  bool idle(int workstation, Tick t, Tick s) const { return t - last_input(workstation) >= s; }

 private:
  std::vector<int> labels_;
  std::map<int, Tick> last_;
};

// Same query answered directly from a full input trace (no streaming state).
std::set<int> idle_set(const InputTrace& inputs, std::span<const int> workstations, Tick t, Tick s);

// For each `interval`-tick slot in which the user is seated for at least one
// tick, with probability p one input lands on a uniformly drawn seated tick of
// that slot.
InputTrace simulate_inputs(Tick length, const Occupancy& occupancy, double p, Tick interval, std::uint64_t seed);

// CSV `t,workstation`.
void write_inputs(std::ostream& out, const InputTrace& inputs, double sample_rate_hz);
void write_inputs(const std::filesystem::path& path, const InputTrace& inputs, double sample_rate_hz);
InputTrace read_inputs(std::istream& in, double sample_rate_hz, const std::string& source = "<stream>");
InputTrace read_inputs(const std::filesystem::path& path, double sample_rate_hz);

}  // namespace rfdeauth
