#pragma once

#include <span>
#include <vector>

#include "rfdeauth/config.hpp"

namespace rfdeauth {

// Gaussian kernel density estimate f(x) = 1/(n h) sum K((x - x_i) / h).
class KernelDensity {
 public:
  KernelDensity(std::vector<double> values, double bandwidth);

  double pdf(double x) const;
  double cdf(double x) const;
  double bandwidth() const { return h_; }
  const std::vector<double>& values() const { return values_; }  // sorted
  double min() const { return values_.front(); }
  double max() const { return values_.back(); }

 private:
  std::vector<double> values_;
  double h_;
};

// 1.06 * sample std * n^(-1/5), floored at 1e-3. Returns 0 for identical values.
double silverman_bandwidth(std::span<const double> values);

inline constexpr double kMinBandwidth = 1e-3;

// Throws ValidationError with fewer than two values, or when every value is
// identical under the Silverman rule (degenerate profile).
KernelDensity kde_estimate(std::vector<double> values, const BandwidthRule& rule);

// Smallest x with CDF(x) >= (100 - alpha) / 100, found by bisection.
double percentile_threshold(const KernelDensity& density, double alpha);

}  // namespace rfdeauth
