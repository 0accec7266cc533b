#include "rfdeauth/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <ostream>

#include "rfdeauth/error.hpp"
#include "rfdeauth/structured_text.hpp"

namespace rfdeauth {

namespace {

std::vector<double> column(std::span<const Sample> samples, std::size_t j) {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.features.at(j));
  return out;
}

bool constant(std::span<const double> x) {
  return std::all_of(x.begin(), x.end(), [&](double v) { return v == x.front(); });
}

double entropy(const std::map<long long, std::size_t>& counts, double n) {
  double h = 0.0;
  for (const auto& [k, c] : counts) {
    const double p = static_cast<double>(c) / n;
    h -= p * std::log(p);
  }
  return h;
}

}  // namespace

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw ValidationError("pearson needs two equal-length series of >= 2");
  const auto n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) throw ValidationError("pearson: zero-variance series");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

CorrelationMatrix correlation_matrix(std::span<const Sample> samples, std::span<const std::size_t> subset) {
  if (samples.size() < 2) throw ValidationError("correlation needs at least two samples");
  std::vector<std::size_t> wanted(subset.begin(), subset.end());
  if (wanted.empty()) {
    wanted.resize(samples.front().features.size());
    std::iota(wanted.begin(), wanted.end(), 0);
  }
  CorrelationMatrix m;
  std::vector<std::vector<double>> cols;
  for (auto j : wanted) {
    auto c = column(samples, j);
    if (constant(c)) {
      m.excluded.push_back(j);
    } else {
      m.features.push_back(j);
      cols.push_back(std::move(c));
    }
  }
  const std::size_t k = m.features.size();
  m.values.assign(k * k, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    m.values[i * k + i] = 1.0;
    for (std::size_t j = i + 1; j < k; ++j) {
      const double r = pearson(cols[i], cols[j]);
      m.values[i * k + j] = r;
      m.values[j * k + i] = r;
    }
  }
  return m;
}

double rmi(std::span<const double> x, std::span<const int> labels, int bins) {
  if (x.size() != labels.size()) throw ValidationError("rmi: feature and label lengths differ");
  if (x.size() < 2) throw ValidationError("rmi needs at least two samples");
  if (bins < 1) throw ValidationError("rmi needs at least one bin");
  const auto [lo_it, hi_it] = std::minmax_element(x.begin(), x.end());
  const double lo = *lo_it;
  const double width = (*hi_it - lo) / bins;
  const auto bin_of = [&](double v) -> long long {
    if (width == 0.0) return 0;
    return std::min<long long>(bins - 1, static_cast<long long>(std::floor((v - lo) / width)));
  };

  const auto n = static_cast<double>(x.size());
  std::map<long long, std::size_t> marginal;
  std::map<int, std::map<long long, std::size_t>> conditional;
  std::map<int, std::size_t> per_label;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto b = bin_of(x[i]);
    ++marginal[b];
    ++conditional[labels[i]][b];
    ++per_label[labels[i]];
  }
  const double hx = entropy(marginal, n);
  if (hx <= 0.0) return 0.0;
  double hxy = 0.0;
  for (const auto& [label, counts] : conditional) {
    const auto ny = static_cast<double>(per_label[label]);
    hxy += ny / n * entropy(counts, ny);
  }
  return std::clamp((hx - hxy) / hx, 0.0, 1.0);
}

std::vector<double> feature_rmi(std::span<const Sample> samples, int bins) {
  if (samples.empty()) return {};
  std::vector<int> labels;
  for (const auto& s : samples) {
    if (!s.label) throw ValidationError("rmi needs labeled samples");
    labels.push_back(s.label->index);
  }
  std::vector<double> out;
  for (std::size_t j = 0; j < samples.front().features.size(); ++j) out.push_back(rmi(column(samples, j), labels, bins));
  return out;
}

std::vector<RankedFeature> rank_features(std::span<const Sample> samples, std::span<const std::string> names,
                                         const RankingOptions& options) {
  const auto scores = feature_rmi(samples, options.bins);
  if (!names.empty() && names.size() != scores.size()) throw ValidationError("feature name count mismatch");
  std::vector<std::size_t> kept;
  std::vector<std::vector<double>> kept_cols;
  for (std::size_t j = 0; j < scores.size(); ++j) {
    if (scores[j] < options.min_rmi) continue;
    auto col = column(samples, j);
    if (constant(col)) continue;
    bool redundant = false;
    for (const auto& other : kept_cols) {
      if (std::abs(pearson(other, col)) > options.max_abs_correlation) {
        redundant = true;
        break;
      }
    }
    if (redundant) continue;
    kept.push_back(j);
    kept_cols.push_back(std::move(col));
  }
  std::vector<RankedFeature> out;
  for (auto j : kept) out.push_back({j, names.empty() ? "f_" + std::to_string(j) : names[j], scores[j]});
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.rmi > b.rmi; });
  return out;
}

std::vector<StreamImportance> stream_importance(std::span<const RankedFeature> ranking,
                                                std::span<const StreamId> streams, const FloorPlan& plan) {
  std::map<std::size_t, double> best;
  for (const auto& r : ranking) {
    const std::size_t s = r.feature / kFeaturesPerStream;
    if (s >= streams.size()) throw ValidationError("ranked feature outside the stream list");
    best[s] = std::max(best[s], r.rmi);
  }
  std::map<int, Point> where;
  for (const auto& s : plan.sensors) where[s.id] = s.pos;
  std::vector<StreamImportance> out;
  for (const auto& [s, v] : best) {
    const auto& id = streams[s];
    if (!where.contains(id.tx) || !where.contains(id.rx)) {
      throw ValidationError("stream " + std::to_string(id.tx) + "->" + std::to_string(id.rx) +
                            " has no sensor position in the floor plan");
    }
    out.push_back({id, v, where[id.tx], where[id.rx]});
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.importance > b.importance; });
  return out;
}

void write_correlations(std::ostream& out, const CorrelationMatrix& m, std::span<const std::string> names) {
  const auto name = [&](std::size_t j) { return j < names.size() ? names[j] : "f_" + std::to_string(j); };
  out << "feature";
  for (auto j : m.features) out << ',' << name(j);
  out << '\n';
  for (std::size_t i = 0; i < m.features.size(); ++i) {
    out << name(m.features[i]);
    for (std::size_t j = 0; j < m.features.size(); ++j) out << ',' << format_double(m.at(i, j));
    out << '\n';
  }
}

void write_ranking(std::ostream& out, std::span<const RankedFeature> ranking) {
  out << "rank,feature,rmi\n";
  for (std::size_t i = 0; i < ranking.size(); ++i) {
    out << i + 1 << ',' << ranking[i].name << ',' << format_double(ranking[i].rmi) << '\n';
  }
}

void write_importance(std::ostream& out, std::span<const StreamImportance> rows) {
  out << "tx,rx,importance,tx_x,tx_y,rx_x,rx_y\n";
  for (const auto& r : rows) {
    out << r.id.tx << ',' << r.id.rx << ',' << format_double(r.importance) << ',' << format_double(r.tx.x) << ','
        << format_double(r.tx.y) << ',' << format_double(r.rx.x) << ',' << format_double(r.rx.y) << '\n';
  }
}

}  // namespace rfdeauth
