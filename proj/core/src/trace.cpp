#include "rfdeauth/trace.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <string>

#include "rfdeauth/error.hpp"
#include "rfdeauth/structured_text.hpp"

namespace rfdeauth {

RssiTrace::RssiTrace(double sample_rate_hz, std::vector<StreamId> streams, Tick length)
    : sample_rate_hz_(sample_rate_hz), streams_(std::move(streams)), length_(length) {
  if (!(sample_rate_hz_ > 0.0)) throw ValidationError("sample rate must be > 0");
  if (length_ < 0) throw ValidationError("trace length must be >= 0");
  if (!std::is_sorted(streams_.begin(), streams_.end()) ||
      std::adjacent_find(streams_.begin(), streams_.end()) != streams_.end()) {
    throw ValidationError("trace streams must be sorted and unique");
  }
  for (const auto& s : streams_) {
    if (s.tx == s.rx) throw ValidationError("stream with tx == rx (" + std::to_string(s.tx) + ")");
  }
  values_.assign(streams_.size() * static_cast<std::size_t>(length_), 0.0);
}

std::optional<std::size_t> RssiTrace::index_of(StreamId id) const {
  const auto it = std::lower_bound(streams_.begin(), streams_.end(), id);
  if (it == streams_.end() || *it != id) return std::nullopt;
  return static_cast<std::size_t>(it - streams_.begin());
}

std::vector<int> RssiTrace::devices() const {
  std::set<int> ids;
  for (const auto& s : streams_) {
    ids.insert(s.tx);
    ids.insert(s.rx);
  }
  return {ids.begin(), ids.end()};
}

std::vector<std::size_t> streams_among(const RssiTrace& trace, std::span<const int> devices) {
  const std::set<int> allowed(devices.begin(), devices.end());
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < trace.stream_count(); ++i) {
    const auto& s = trace.streams()[i];
    if (allowed.contains(s.tx) && allowed.contains(s.rx)) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> all_streams(const RssiTrace& trace) {
  std::vector<std::size_t> out(trace.stream_count());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = i;
  return out;
}

std::string format_time(Tick t, double sample_rate_hz) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", static_cast<double>(t) / sample_rate_hz);
  return buf;
}

Tick parse_time(std::string_view text, double sample_rate_hz) {
  double secs = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), secs);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(secs) || secs < 0.0) {
    throw InputError("invalid time '" + std::string(text) + "'");
  }
  const double scaled = secs * sample_rate_hz;
  const auto tick = static_cast<Tick>(std::llround(scaled));
  if (std::abs(scaled - static_cast<double>(tick)) > 1e-3) {
    throw InputError("time " + std::string(text) + " is not on the " + format_double(sample_rate_hz) +
                     " Hz sampling grid");
  }
  return tick;
}

void write_trace(std::ostream& out, const RssiTrace& trace) {
  out << "t,tx,rx,rssi_dbm\n";
  const auto& streams = trace.streams();
  for (Tick t = 0; t < trace.length(); ++t) {
    const auto time = format_time(t, trace.sample_rate_hz());
    for (std::size_t s = 0; s < streams.size(); ++s) {
      out << time << ',' << streams[s].tx << ',' << streams[s].rx << ',' << format_double(trace.at(s, t))
          << '\n';
    }
  }
}

void write_trace(const std::filesystem::path& path, const RssiTrace& trace) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  write_trace(out, trace);
}

namespace {

struct TraceRow {
  Tick tick;
  StreamId id;
  double rssi;
};

TraceRow parse_trace_row(const std::string& line, double rate, const std::string& where) {
  const auto fields = split_list(line);
  if (fields.size() != 4) throw InputError(where + ": expected 4 fields, got " + std::to_string(fields.size()));
  TraceRow row{};
  try {
    row.tick = parse_time(fields[0], rate);
    row.id = {parse_device_id(fields[1]), parse_device_id(fields[2])};
  } catch (const InputError& e) {
    throw InputError(where + ": " + e.what());
  }
  const auto& v = fields[3];
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), row.rssi);
  if (ec != std::errc{} || ptr != v.data() + v.size() || !std::isfinite(row.rssi)) {
    throw InputError(where + ": non-numeric rssi '" + v + "'");
  }
  return row;
}

}  // namespace

RssiTrace read_trace(std::istream& in, double sample_rate_hz, const std::string& source) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line) || trim(line) != "t,tx,rx,rssi_dbm") {
    throw InputError(source + ":1: expected header 't,tx,rx,rssi_dbm'");
  }

  std::vector<TraceRow> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    rows.push_back(parse_trace_row(line, sample_rate_hz, source + ":" + std::to_string(line_no)));
  }
  if (rows.empty()) return RssiTrace(sample_rate_hz, {}, 0);

  std::vector<StreamId> streams;
  for (const auto& r : rows) {
    if (r.tick != rows.front().tick) break;
    streams.push_back(r.id);
  }
  if (rows.front().tick != 0) throw InputError(source + ":2: trace must start at t=0");
  if (!std::is_sorted(streams.begin(), streams.end()) ||
      std::adjacent_find(streams.begin(), streams.end()) != streams.end()) {
    throw InputError(source + ": streams in the first tick must be sorted by (tx, rx) and unique");
  }
  if (rows.size() % streams.size() != 0) {
    throw InputError(source + ": stream-length mismatch (" + std::to_string(rows.size()) +
                     " rows for " + std::to_string(streams.size()) + " streams)");
  }

  const auto length = static_cast<Tick>(rows.size() / streams.size());
  RssiTrace trace(sample_rate_hz, streams, length);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto t = static_cast<Tick>(i / streams.size());
    const auto s = i % streams.size();
    if (rows[i].tick != t || rows[i].id != streams[s]) {
      // +2: header line plus 1-based numbering; blank lines are not expected in our own output.
      throw InputError(source + ":" + std::to_string(i + 2) + ": stream-length mismatch, expected t=" +
                       format_time(t, sample_rate_hz) + " stream " + std::to_string(streams[s].tx) + "->" +
                       std::to_string(streams[s].rx));
    }
    trace.stream(s)[static_cast<std::size_t>(t)] = rows[i].rssi;
  }
  return trace;
}

RssiTrace read_trace(const std::filesystem::path& path, double sample_rate_hz) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  return read_trace(in, sample_rate_hz, path.string());
}

}  // namespace rfdeauth
