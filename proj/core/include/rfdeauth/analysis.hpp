#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "rfdeauth/re.hpp"
#include "rfdeauth/rfsim.hpp"

namespace rfdeauth {

double pearson(std::span<const double> x, std::span<const double> y);

struct CorrelationMatrix {
  std::vector<std::size_t> features;  // included feature indices
  std::vector<std::size_t> excluded;  // zero-variance features
  std::vector<double> values;         // features.size()^2, row-major

  double at(std::size_t i, std::size_t j) const { return values[i * features.size() + j]; }
};

// Pearson correlation over the selected features (all when empty).
CorrelationMatrix correlation_matrix(std::span<const Sample> samples, std::span<const std::size_t> subset = {});

// (H(x) - H(x|y)) / H(x) with x discretized into `bins` equal-width bins over
// [min, max]; 0 when H(x) = 0.
double rmi(std::span<const double> x, std::span<const int> labels, int bins = 256);

struct RankingOptions {
  int bins{256};
  double min_rmi{0.01};
  double max_abs_correlation{0.95};
};

struct RankedFeature {
  std::size_t feature{0};
  std::string name;
  double rmi{0.0};
};

// Features with RMI below min_rmi are dropped, then any feature whose |r| with
// an earlier kept feature exceeds max_abs_correlation; the rest sorted by RMI
// (descending, ties by index).
std::vector<RankedFeature> rank_features(std::span<const Sample> samples, std::span<const std::string> names,
                                         const RankingOptions& options = {});
std::vector<double> feature_rmi(std::span<const Sample> samples, int bins = 256);

struct StreamImportance {
  StreamId id;
  double importance{0.0};  // max RMI over the stream's surviving features
  Point tx;
  Point rx;
};

// One row per stream with at least one ranked feature, by importance.
std::vector<StreamImportance> stream_importance(std::span<const RankedFeature> ranking,
                                                std::span<const StreamId> streams, const FloorPlan& plan);

void write_correlations(std::ostream& out, const CorrelationMatrix& m, std::span<const std::string> names);
void write_ranking(std::ostream& out, std::span<const RankedFeature> ranking);
void write_importance(std::ostream& out, std::span<const StreamImportance> rows);

}  // namespace rfdeauth
