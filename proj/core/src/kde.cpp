#include "rfdeauth/kde.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "rfdeauth/error.hpp"

namespace rfdeauth {

KernelDensity::KernelDensity(std::vector<double> values, double bandwidth)
    : values_(std::move(values)), h_(bandwidth) {
  if (values_.empty()) throw ValidationError("kernel density needs at least one value");
  if (!(h_ > 0.0) || !std::isfinite(h_)) throw ValidationError("kernel bandwidth must be > 0");
  std::sort(values_.begin(), values_.end());
}

double KernelDensity::pdf(double x) const {
  const double norm = 1.0 / (static_cast<double>(values_.size()) * h_ * std::sqrt(2.0 * std::numbers::pi));
  // Kernels further than 40 h away contribute below double precision.
  const auto lo = std::lower_bound(values_.begin(), values_.end(), x - 40.0 * h_);
  const auto hi = std::upper_bound(lo, values_.end(), x + 40.0 * h_);
  double sum = 0.0;
  for (auto it = lo; it != hi; ++it) {
    const double u = (x - *it) / h_;
    sum += std::exp(-0.5 * u * u);
  }
  return norm * sum;
}

double KernelDensity::cdf(double x) const {
  double sum = 0.0;
  for (double v : values_) sum += 0.5 * std::erfc(-(x - v) / (h_ * std::numbers::sqrt2));
  return sum / static_cast<double>(values_.size());
}

double silverman_bandwidth(std::span<const double> values) {
  const auto n = static_cast<double>(values.size());
  if (values.size() < 2) return 0.0;
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  if (sd == 0.0) return 0.0;
  return std::max(1.06 * sd * std::pow(n, -0.2), kMinBandwidth);
}

KernelDensity kde_estimate(std::vector<double> values, const BandwidthRule& rule) {
  if (values.size() < 2) throw ValidationError("kde_estimate needs at least two values");
  double h = rule.h;
  if (rule.kind == BandwidthRule::Kind::Silverman) {
    h = silverman_bandwidth(values);
    if (h == 0.0) throw ValidationError("degenerate profile: all values identical, bandwidth would be 0");
  }
  return KernelDensity(std::move(values), h);
}

double percentile_threshold(const KernelDensity& density, double alpha) {
  if (!(alpha > 0.0 && alpha < 100.0)) throw ValidationError("alpha must lie in (0, 100)");
  const double q = (100.0 - alpha) / 100.0;
  double lo = density.min() - 40.0 * density.bandwidth();
  double hi = density.max() + 40.0 * density.bandwidth();
  // Invariant: CDF(lo) < q <= CDF(hi).
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (density.cdf(mid) >= q) {
      hi = mid;
    } else {
      lo = mid;
    }
    if (hi - lo <= 1e-12 * std::max(1.0, std::abs(hi))) break;
  }
  return hi;
}

}  // namespace rfdeauth
