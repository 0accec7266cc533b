#pragma once

#include <cstddef>
#include <deque>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "rfdeauth/config.hpp"
#include "rfdeauth/kde.hpp"
#include "rfdeauth/trace.hpp"

namespace rfdeauth {

enum class Decision { Normal, Anomalous };

// Sum over `streams` of the population standard deviation of the readings in
// ticks [t - n_d, t] (n_d + 1 samples). Throws ValidationError when t < n_d.
double sum_std(const RssiTrace& trace, std::span<const std::size_t> streams, Tick t, Tick n_d);

// Same quantity maintained incrementally over a stream of ticks.
class SumStdTracker {
 public:
  SumStdTracker(std::size_t stream_count, Tick n_d);

  void push(std::span<const double> readings);
  bool ready() const { return filled_ == window_; }
  double value() const;

 private:
  void recompute();

  std::size_t streams_;
  std::size_t window_;
  std::size_t filled_{0};
  std::size_t head_{0};
  std::size_t since_recompute_{0};
  std::vector<double> ring_;   // window_ x streams_, tick-major
  std::vector<double> shift_;  // per-stream offset subtracted before summing
  std::vector<double> sum_;
  std::vector<double> sum_sq_;
};

class NormalProfile {
 public:
  NormalProfile(std::vector<double> values, const Config& config);

  double threshold() const { return ub_; }
  const KernelDensity& density() const { return density_; }
  const std::deque<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  // Drops the |batch| oldest values, appends the batch, re-estimates.
  void replace_oldest(std::span<const double> batch);

 private:
  void estimate();

  std::deque<double> values_;
  BandwidthRule rule_;
  double alpha_;
  KernelDensity density_;
  double ub_{0.0};
};

struct UpdateQueue {
  std::size_t capacity{100};
  std::vector<double> pending;
  std::size_t anomalous{0};
};

// Returns Anomalous iff s_t >= ub. Appends s_t to the queue; once it holds b
// values the batch replaces the b oldest profile values if its anomalous
// fraction is below tau, otherwise it is discarded. Either way the queue is
// emptied. Returns true in `committed` when the profile was updated.
Decision md_step(NormalProfile& profile, UpdateQueue& queue, double s_t, double tau, bool* committed = nullptr);

struct VariationWindow {
  Tick t1{0};
  Tick t2{0};  // last anomalous tick

  Tick duration() const { return t2 - t1; }
  friend bool operator==(const VariationWindow&, const VariationWindow&) = default;
};

// Coalesces per-tick decisions into windows. A window stays open across up to
// `gap` normal ticks and is reported closed on the first tick after that.
class WindowTracker {
 public:
  explicit WindowTracker(int gap) : gap_(gap) {}

  // Returns the window that closed at tick t, if any.
  std::optional<VariationWindow> push(Tick t, Decision d);
  std::optional<VariationWindow> finish();
  bool is_open() const { return open_.has_value(); }
  const std::optional<VariationWindow>& current() const { return open_; }

 private:
  int gap_;
  std::optional<VariationWindow> open_;
};

struct MdTick {
  bool ready{false};  // profile initialized; before that decisions are Normal
  double s{0.0};      // valid once the first d seconds have elapsed
  double ub{0.0};
  Decision decision{Decision::Normal};
};

// Streaming movement detector over a subset of a trace's streams.
class MovementDetector {
 public:
  MovementDetector(const Config& config, std::size_t stream_count);

  MdTick push(std::span<const double> readings);
  Tick now() const { return t_; }  // ticks pushed so far
  const std::optional<NormalProfile>& profile() const { return profile_; }
  std::size_t committed_updates() const { return updates_; }

 private:
  Config config_;
  SumStdTracker sums_;
  Tick boot_ticks_;
  Tick t_{0};
  std::vector<double> bootstrap_;
  std::optional<NormalProfile> profile_;
  UpdateQueue queue_;
  std::size_t updates_{0};
};

struct DetectionResult {
  std::vector<VariationWindow> windows;
  std::vector<MdTick> ticks;  // one per trace tick
  std::size_t committed_updates{0};
};

// Runs MD over the whole trace (all streams unless a subset is given) and
// returns every variation window regardless of its duration.
DetectionResult detect(const RssiTrace& trace, const Config& config, std::span<const std::size_t> streams);
DetectionResult detect(const RssiTrace& trace, const Config& config);
std::vector<VariationWindow> detect_variation_windows(const RssiTrace& trace, const Config& config);

std::vector<VariationWindow> filter_windows(std::span<const VariationWindow> windows, Tick min_duration);

// CSV `t,s_t,ub,decision`, one row per tick with a valid s_t.
void write_md_debug(std::ostream& out, const DetectionResult& result, double sample_rate_hz);
// CSV `t1,t2,duration`.
void write_windows(std::ostream& out, std::span<const VariationWindow> windows, double sample_rate_hz);
std::vector<VariationWindow> read_windows(std::istream& in, double sample_rate_hz, const std::string& source);

}  // namespace rfdeauth
