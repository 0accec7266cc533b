#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "rfdeauth/types.hpp"

namespace rfdeauth {

// Signal-strength readings (dBm) for every stream on a common sampling grid.
// Storage is stream-major so per-stream windows are contiguous.
class RssiTrace {
 public:
  RssiTrace() = default;
  // `streams` must be sorted and unique; values start at 0 dBm.
  RssiTrace(double sample_rate_hz, std::vector<StreamId> streams, Tick length);

  double sample_rate_hz() const { return sample_rate_hz_; }
  Tick length() const { return length_; }
  double duration() const { return static_cast<double>(length_) / sample_rate_hz_; }
  std::size_t stream_count() const { return streams_.size(); }
  const std::vector<StreamId>& streams() const { return streams_; }
  std::optional<std::size_t> index_of(StreamId id) const;
  // Sorted distinct device ids appearing in any stream.
  std::vector<int> devices() const;

  std::span<const double> stream(std::size_t i) const {
    return {values_.data() + i * static_cast<std::size_t>(length_), static_cast<std::size_t>(length_)};
  }
  std::span<double> stream(std::size_t i) {
    return {values_.data() + i * static_cast<std::size_t>(length_), static_cast<std::size_t>(length_)};
  }
  double at(std::size_t stream_index, Tick t) const {
    return values_[stream_index * static_cast<std::size_t>(length_) + static_cast<std::size_t>(t)];
  }

  friend bool operator==(const RssiTrace&, const RssiTrace&) = default;

 private:
  double sample_rate_hz_{4.0};
  std::vector<StreamId> streams_;
  Tick length_{0};
  std::vector<double> values_;
};

// Indices of the streams whose transmitter and receiver are both in `devices`.
std::vector<std::size_t> streams_among(const RssiTrace& trace, std::span<const int> devices);
std::vector<std::size_t> all_streams(const RssiTrace& trace);

// Seconds with six decimals, as used by every CSV in this project.
std::string format_time(Tick t, double sample_rate_hz);
// Inverse of format_time; throws InputError when `text` is off the grid.
Tick parse_time(std::string_view text, double sample_rate_hz);

// CSV: header `t,tx,rx,rssi_dbm`, one row per (tick, stream), tick-major.
void write_trace(std::ostream& out, const RssiTrace& trace);
void write_trace(const std::filesystem::path& path, const RssiTrace& trace);
RssiTrace read_trace(std::istream& in, double sample_rate_hz, const std::string& source = "<stream>");
RssiTrace read_trace(const std::filesystem::path& path, double sample_rate_hz);

}  // namespace rfdeauth
