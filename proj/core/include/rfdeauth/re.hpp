#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "rfdeauth/config.hpp"
#include "rfdeauth/kma.hpp"
#include "rfdeauth/md.hpp"
#include "rfdeauth/trace.hpp"

namespace rfdeauth {

// Feature vector of one variation window: [variance, entropy, autocorrelation]
// for each stream, stream-major.
struct Sample {
  std::vector<double> features;
  Tick t1{0};
  std::optional<Label> label;
};

inline constexpr std::size_t kFeaturesPerStream = 3;

double window_variance(std::span<const double> w);
// Natural-log entropy of the histogram with `bin_width` bins anchored at min(w).
double window_entropy(std::span<const double> w, double bin_width);
// 1/((n-k) var) * sum_{j<n-k} (w_j - mean)(w_{j+k} - mean), clamped to
// [-1, 1]; 0 for a constant window.
double window_autocorrelation(std::span<const double> w, int lag);

// Window [t1, t1 + round(t_delta * rate)) of every stream in `streams`.
Sample extract_features(const RssiTrace& trace, std::span<const std::size_t> streams, Tick t1, const Config& config);
Sample extract_features(const RssiTrace& trace, Tick t1, const Config& config);

// `d{tx}-d{rx}-{var|ent|ac}` in feature order.
std::vector<std::string> feature_names(const RssiTrace& trace, std::span<const std::size_t> streams);

// Exactly one idle workstation -> its label; none -> w_0; several -> discard.
std::optional<Label> label_from_idle(const std::set<int>& idle);
// Queries S^(t_delta) at t1 + t_delta.
std::optional<Label> auto_label(const VariationWindow& window, const InputTrace& inputs,
                                std::span<const int> workstations, const Config& config);
std::optional<Label> auto_label(const VariationWindow& window, const IdleTracker& tracker, const Config& config);

// One-vs-rest linear SVM on standardized features.
struct ClassifierModel {
  std::vector<Label> classes;  // ascending
  std::vector<double> mean;
  std::vector<double> scale;
  std::vector<std::vector<double>> weights;  // per class
  std::vector<double> bias;                  // per class
  double training_accuracy{0.0};

  std::size_t dimension() const { return mean.size(); }
  friend bool operator==(const ClassifierModel&, const ClassifierModel&) = default;
};

struct TrainOptions {
  double lambda{1e-3};
  int epochs{200};
};

// Throws ValidationError with fewer than two classes, fewer than two samples
// in some class, unlabeled samples, ragged features, or all-constant features.
ClassifierModel train(std::span<const Sample> samples, const TrainOptions& options = {});

std::vector<double> decision_scores(const ClassifierModel& model, std::span<const double> features);
// Argmax of the scores; ties go to the lowest class index.
Label classify(const ClassifierModel& model, std::span<const double> features);
double accuracy(const ClassifierModel& model, std::span<const Sample> samples);

void save_model(std::ostream& out, const ClassifierModel& model);
void save_model(const std::filesystem::path& path, const ClassifierModel& model);
// Any malformed content raises ValidationError; a missing file raises InputError.
ClassifierModel load_model(std::istream& in, const std::string& source = "<stream>");
ClassifierModel load_model(const std::filesystem::path& path);

// CSV `label,f_0,...,f_{N-1}`; unlabeled samples have an empty label field.
void write_samples(std::ostream& out, std::span<const Sample> samples);
std::vector<Sample> read_samples(std::istream& in, const std::string& source = "<stream>");

}  // namespace rfdeauth
