#include "rfdeauth/md.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "rfdeauth/error.hpp"
#include "rfdeauth/structured_text.hpp"

namespace rfdeauth {

double sum_std(const RssiTrace& trace, std::span<const std::size_t> streams, Tick t, Tick n_d) {
  if (t < n_d) throw ValidationError("sum_std: t precedes the first full window");
  if (t >= trace.length()) throw ValidationError("sum_std: t beyond the end of the trace");
  const auto n = static_cast<double>(n_d + 1);
  double total = 0.0;
  for (auto s : streams) {
    const auto v = trace.stream(s).subspan(static_cast<std::size_t>(t - n_d), static_cast<std::size_t>(n_d + 1));
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= n;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    total += std::sqrt(ss / n);
  }
  return total;
}

SumStdTracker::SumStdTracker(std::size_t stream_count, Tick n_d)
    : streams_(stream_count),
      window_(static_cast<std::size_t>(n_d + 1)),
      ring_(window_ * stream_count, 0.0),
      shift_(stream_count, 0.0),
      sum_(stream_count, 0.0),
      sum_sq_(stream_count, 0.0) {
  if (n_d < 1) throw ValidationError("sliding window must span at least two samples");
}

void SumStdTracker::push(std::span<const double> readings) {
  if (readings.size() != streams_) throw ValidationError("reading count does not match the stream count");
  double* slot = ring_.data() + head_ * streams_;
  const bool full = ready();
  if (filled_ == 0) {
    std::copy(readings.begin(), readings.end(), shift_.begin());
  }
  for (std::size_t i = 0; i < streams_; ++i) {
    const double add = readings[i] - shift_[i];
    sum_[i] += add;
    sum_sq_[i] += add * add;
    if (full) {
      const double drop = slot[i] - shift_[i];
      sum_[i] -= drop;
      sum_sq_[i] -= drop * drop;
    }
    slot[i] = readings[i];
  }
  head_ = (head_ + 1) % window_;
  if (!full) ++filled_;
  if (++since_recompute_ >= 4096) recompute();
}

void SumStdTracker::recompute() {
  since_recompute_ = 0;
  for (std::size_t i = 0; i < streams_; ++i) {
    // Re-anchor on the oldest sample to keep the shifted sums small.
    const std::size_t oldest = filled_ == window_ ? head_ : 0;
    shift_[i] = ring_[oldest * streams_ + i];
    sum_[i] = 0.0;
    sum_sq_[i] = 0.0;
    for (std::size_t k = 0; k < filled_; ++k) {
      const double v = ring_[k * streams_ + i] - shift_[i];
      sum_[i] += v;
      sum_sq_[i] += v * v;
    }
  }
}

double SumStdTracker::value() const {
  if (!ready()) throw ValidationError("sum_std: window not yet full");
  const auto n = static_cast<double>(window_);
  double total = 0.0;
  for (std::size_t i = 0; i < streams_; ++i) {
    const double mean = sum_[i] / n;
    total += std::sqrt(std::max(0.0, sum_sq_[i] / n - mean * mean));
  }
  return total;
}

NormalProfile::NormalProfile(std::vector<double> values, const Config& config)
    : values_(values.begin(), values.end()),
      rule_(config.kde_bandwidth_rule),
      alpha_(config.alpha),
      density_(values.empty() ? std::vector<double>{0.0} : values, 1.0) {
  if (values_.size() < 2) throw ValidationError("normal profile needs at least two values");
  estimate();
}

void NormalProfile::estimate() {
  std::vector<double> v(values_.begin(), values_.end());
  const bool flat = std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
  if (flat && rule_.kind == BandwidthRule::Kind::Silverman) {
    // A perfectly still environment: fall back to the bandwidth floor.
    density_ = KernelDensity(std::move(v), kMinBandwidth);
  } else {
    density_ = kde_estimate(std::move(v), rule_);
  }
  ub_ = percentile_threshold(density_, alpha_);
}

void NormalProfile::replace_oldest(std::span<const double> batch) {
  const auto size = values_.size();
  values_.insert(values_.end(), batch.begin(), batch.end());
  while (values_.size() > size) values_.pop_front();
  estimate();
}

Decision md_step(NormalProfile& profile, UpdateQueue& queue, double s_t, double tau, bool* committed) {
  const Decision d = s_t >= profile.threshold() ? Decision::Anomalous : Decision::Normal;
  queue.pending.push_back(s_t);
  if (d == Decision::Anomalous) ++queue.anomalous;
  bool commit = false;
  if (queue.pending.size() >= queue.capacity) {
    const double fraction = static_cast<double>(queue.anomalous) / static_cast<double>(queue.pending.size());
    if (fraction < tau) {
      profile.replace_oldest(queue.pending);
      commit = true;
    }
    queue.pending.clear();
    queue.anomalous = 0;
  }
  if (committed) *committed = commit;
  return d;
}

std::optional<VariationWindow> WindowTracker::push(Tick t, Decision d) {
  if (d == Decision::Anomalous) {
    if (open_) {
      open_->t2 = t;
    } else {
      open_ = VariationWindow{t, t};
    }
    return std::nullopt;
  }
  if (open_ && t - open_->t2 > gap_) {
    auto closed = open_;
    open_.reset();
    return closed;
  }
  return std::nullopt;
}

std::optional<VariationWindow> WindowTracker::finish() {
  auto closed = open_;
  open_.reset();
  return closed;
}

MovementDetector::MovementDetector(const Config& config, std::size_t stream_count)
    : config_(config),
      sums_(stream_count, config.ticks(config.d)),
      boot_ticks_(config.ticks(config.profile_bootstrap)) {
  queue_.capacity = static_cast<std::size_t>(config.b);
  if (boot_ticks_ < config.ticks(config.d) + 2) {
    throw ValidationError("config key 'profile_bootstrap': must exceed d by at least two ticks");
  }
}

MdTick MovementDetector::push(std::span<const double> readings) {
  sums_.push(readings);
  const Tick t = t_++;
  MdTick out;
  if (!sums_.ready()) return out;
  out.s = sums_.value();
  if (t < boot_ticks_) {
    bootstrap_.push_back(out.s);
    return out;
  }
  if (!profile_) {
    profile_.emplace(std::move(bootstrap_), config_);
    bootstrap_.clear();
  }
  out.ready = true;
  out.ub = profile_->threshold();
  bool committed = false;
  out.decision = md_step(*profile_, queue_, out.s, config_.tau, &committed);
  if (committed) ++updates_;
  return out;
}

DetectionResult detect(const RssiTrace& trace, const Config& config, std::span<const std::size_t> streams) {
  DetectionResult result;
  const Tick n_d = config.ticks(config.d);
  if (trace.length() <= n_d) return result;
  MovementDetector md(config, streams.size());
  WindowTracker windows(config.coalesce_gap);
  std::vector<double> readings(streams.size());
  result.ticks.reserve(static_cast<std::size_t>(trace.length()));
  for (Tick t = 0; t < trace.length(); ++t) {
    for (std::size_t i = 0; i < streams.size(); ++i) readings[i] = trace.at(streams[i], t);
    const auto tick = md.push(readings);
    result.ticks.push_back(tick);
    if (auto w = windows.push(t, tick.decision)) result.windows.push_back(*w);
  }
  if (auto w = windows.finish()) result.windows.push_back(*w);
  result.committed_updates = md.committed_updates();
  return result;
}

DetectionResult detect(const RssiTrace& trace, const Config& config) {
  const auto streams = all_streams(trace);
  return detect(trace, config, streams);
}

std::vector<VariationWindow> detect_variation_windows(const RssiTrace& trace, const Config& config) {
  return detect(trace, config).windows;
}

std::vector<VariationWindow> filter_windows(std::span<const VariationWindow> windows, Tick min_duration) {
  std::vector<VariationWindow> out;
  for (const auto& w : windows) {
    if (w.duration() >= min_duration) out.push_back(w);
  }
  return out;
}

void write_md_debug(std::ostream& out, const DetectionResult& result, double sample_rate_hz) {
  out << "t,s_t,ub,decision\n";
  for (std::size_t t = 0; t < result.ticks.size(); ++t) {
    const auto& k = result.ticks[t];
    if (!k.ready) continue;
    out << format_time(static_cast<Tick>(t), sample_rate_hz) << ',' << format_double(k.s) << ','
        << format_double(k.ub) << ',' << (k.decision == Decision::Anomalous ? "anomalous" : "normal") << '\n';
  }
}

void write_windows(std::ostream& out, std::span<const VariationWindow> windows, double sample_rate_hz) {
  out << "t1,t2,duration\n";
  for (const auto& w : windows) {
    out << format_time(w.t1, sample_rate_hz) << ',' << format_time(w.t2, sample_rate_hz) << ','
        << format_time(w.duration(), sample_rate_hz) << '\n';
  }
}

std::vector<VariationWindow> read_windows(std::istream& in, double sample_rate_hz, const std::string& source) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != "t1,t2,duration") {
    throw InputError(source + ":1: expected header 't1,t2,duration'");
  }
  std::vector<VariationWindow> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto f = split_list(line);
    const auto where = source + ":" + std::to_string(line_no);
    if (f.size() != 3) throw InputError(where + ": expected 3 fields");
    try {
      const VariationWindow w{parse_time(f[0], sample_rate_hz), parse_time(f[1], sample_rate_hz)};
      if (w.t2 < w.t1) throw InputError("t2 precedes t1");
      out.push_back(w);
    } catch (const InputError& e) {
      throw InputError(where + ": " + e.what());
    }
  }
  return out;
}

}  // namespace rfdeauth
