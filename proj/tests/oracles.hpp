#pragma once

// Independent batch reimplementations used as test oracles.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "rfdeauth/kde.hpp"
#include "rfdeauth/md.hpp"
#include "rfdeauth/trace.hpp"

namespace oracle {

// Population std of x over [a, b], two-pass.
inline double window_std(std::span<const double> x, std::size_t a, std::size_t b) {
  double mean = 0.0;
  for (std::size_t i = a; i <= b; ++i) mean += x[i];
  mean /= static_cast<double>(b - a + 1);
  double ss = 0.0;
  for (std::size_t i = a; i <= b; ++i) ss += (x[i] - mean) * (x[i] - mean);
  return std::sqrt(ss / static_cast<double>(b - a + 1));
}

struct BatchMd {
  std::vector<rfdeauth::Decision> decisions;  // one per tick
  std::size_t commits{0};
};

// Recomputes s_t from the stored trace at every tick and re-estimates the
// density from the full profile whenever it changes.
inline BatchMd batch_md(const rfdeauth::RssiTrace& trace, const rfdeauth::Config& cfg) {
  using namespace rfdeauth;
  const auto n_d = static_cast<std::size_t>(cfg.ticks(cfg.d));
  const auto boot = static_cast<std::size_t>(cfg.ticks(cfg.profile_bootstrap));
  const auto len = static_cast<std::size_t>(trace.length());
  BatchMd out;
  out.decisions.assign(len, Decision::Normal);
  std::vector<double> profile, queue;
  std::size_t anomalous = 0;
  double ub = 0.0;
  const auto estimate = [&] {
    const bool flat = std::all_of(profile.begin(), profile.end(), [&](double v) { return v == profile.front(); });
    const KernelDensity k = flat && cfg.kde_bandwidth_rule.kind == BandwidthRule::Kind::Silverman
                                ? KernelDensity(profile, kMinBandwidth)
                                : kde_estimate(profile, cfg.kde_bandwidth_rule);
    ub = percentile_threshold(k, cfg.alpha);
  };
  for (std::size_t t = n_d; t < len; ++t) {
    double s = 0.0;
    for (std::size_t i = 0; i < trace.stream_count(); ++i) s += window_std(trace.stream(i), t - n_d, t);
    if (t < boot) {
      profile.push_back(s);
      continue;
    }
    if (t == boot) estimate();
    const bool anom = s >= ub;
    out.decisions[t] = anom ? Decision::Anomalous : Decision::Normal;
    queue.push_back(s);
    anomalous += anom;
    if (queue.size() == static_cast<std::size_t>(cfg.b)) {
      if (static_cast<double>(anomalous) / static_cast<double>(queue.size()) < cfg.tau) {
        profile.erase(profile.begin(), profile.begin() + static_cast<std::ptrdiff_t>(queue.size()));
        profile.insert(profile.end(), queue.begin(), queue.end());
        estimate();
        ++out.commits;
      }
      queue.clear();
      anomalous = 0;
    }
  }
  return out;
}

// Noise on every stream plus a few bursts of strong fluctuation.
inline rfdeauth::RssiTrace bursty_trace(std::size_t streams, rfdeauth::Tick length, std::uint64_t seed,
                                        const std::vector<std::pair<rfdeauth::Tick, rfdeauth::Tick>>& bursts) {
  std::vector<rfdeauth::StreamId> ids;
  for (std::size_t i = 0; i < streams; ++i) ids.push_back({1, static_cast<int>(i) + 2});
  rfdeauth::RssiTrace trace(4.0, ids, length);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (std::size_t s = 0; s < streams; ++s) {
    auto v = trace.stream(s);
    for (rfdeauth::Tick t = 0; t < length; ++t) {
      double x = -60.0 + noise(rng);
      for (const auto& [a, b] : bursts) {
        if (t >= a && t < b) x += 6.0 * noise(rng);
      }
      v[static_cast<std::size_t>(t)] = x;
    }
  }
  return trace;
}

}  // namespace oracle
