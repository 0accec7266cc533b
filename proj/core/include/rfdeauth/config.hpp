#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "rfdeauth/types.hpp"

namespace rfdeauth {

struct BandwidthRule {
  enum class Kind { Silverman, Fixed };
  Kind kind{Kind::Silverman};
  double h{0.0};  // used when kind == Fixed

  static BandwidthRule silverman() { return {}; }
  static BandwidthRule fixed(double h) { return {Kind::Fixed, h}; }

  friend bool operator==(const BandwidthRule&, const BandwidthRule&) = default;
};

// Pipeline parameters. All durations are in seconds and are quantized to the
// sampling grid (nearest tick) wherever they are used as tick counts.
struct Config {
  double sample_rate_hz{4.0};
  double d{30.0};         // MD sliding-window length
  double t_delta{4.5};    // variation-window decision threshold
  double alpha{5.0};      // anomaly percentile parameter, percent
  int b{100};             // profile-update batch size
  double tau{0.1};        // max anomalous fraction for a committed update
  double t_id{5.0};       // alert idle threshold before screen saver
  double t_ss{3.0};       // screen-saver grace period
  double T{300.0};        // baseline time-out
  double delta{3.0};      // true-window half width
  int ac_lag{1};          // autocorrelation lag, samples
  double entropy_bin_width{1.0};  // dB
  BandwidthRule kde_bandwidth_rule{};
  double profile_bootstrap{120.0};  // movement-free prefix used for the initial profile
  int coalesce_gap{1};              // normal ticks tolerated inside one variation window

  Tick ticks(double seconds) const;
  double seconds(Tick t) const { return static_cast<double>(t) / sample_rate_hz; }

  friend bool operator==(const Config&, const Config&) = default;
};

// Throws ValidationError naming the first offending key.
void validate(const Config& config);

Config parse_config(const std::string& text, const std::string& source = "<string>");
Config load_config(const std::filesystem::path& path);
std::string serialize_config(const Config& config);

}  // namespace rfdeauth
