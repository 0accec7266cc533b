#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rfdeauth/config.hpp"
#include "rfdeauth/controller.hpp"
#include "rfdeauth/md.hpp"
#include "rfdeauth/re.hpp"
#include "rfdeauth/rfsim.hpp"

namespace rfdeauth {

// ---------------------------------------------------------------------------
// MD outcome taxonomy

struct MdCounts {
  std::size_t tp{0};
  std::size_t fp{0};
  std::size_t fn{0};

  double precision() const;
  double recall() const;
  double f() const;
  friend bool operator==(const MdCounts&, const MdCounts&) = default;
};

double f_measure(std::size_t tp, std::size_t fp, std::size_t fn);

// Closed tick intervals [a1, a2] and [b1, b2] intersect.
inline bool overlaps(Tick a1, Tick a2, Tick b1, Tick b2) { return a1 <= b2 && b1 <= a2; }

// Windows shorter than min_duration ticks are dropped, then each remaining
// window is TP if it overlaps some true window U_t and FP otherwise; every
// true window without an overlapping window is an FN.
MdCounts md_outcomes(std::span<const VariationWindow> windows, const GroundTruth& truth, double delta_s,
                     Tick min_duration);

struct SweepPoint {
  double t_delta{0.0};
  MdCounts counts;
  double f{0.0};
};

std::vector<SweepPoint> t_delta_sweep(std::span<const VariationWindow> windows, const GroundTruth& truth,
                                      const Config& config, double from = 1.0, double to = 8.0, double step = 0.5);
// First t_delta attaining the maximum F-measure.
double best_t_delta(std::span<const SweepPoint> sweep);

// Streams among the k lowest-numbered devices of the trace.
std::vector<std::size_t> sensor_subset(const RssiTrace& trace, int k);

struct SensorRow {
  int sensors{0};
  MdCounts counts;
};

// MD re-run on device subsets of increasing size, windows filtered at t_delta.
std::vector<SensorRow> md_by_sensor_count(const RssiTrace& trace, const GroundTruth& truth, const Config& config,
                                          int from, int to);

// For each truth event, the index of the first window overlapping its true window.
std::vector<std::optional<std::size_t>> match_events(std::span<const VariationWindow> windows,
                                                     const GroundTruth& truth, double delta_s);

// ---------------------------------------------------------------------------
// RE experiments

struct LabeledWindows {
  std::vector<VariationWindow> windows;  // every window with duration >= t_delta
  std::vector<Sample> samples;           // TP windows only, labeled by ground truth
  std::vector<std::size_t> sample_window;  // samples[i] came from windows[sample_window[i]]
};

LabeledWindows label_windows(const RssiTrace& trace, std::span<const std::size_t> streams,
                             std::span<const VariationWindow> all_windows, const GroundTruth& truth,
                             const Config& config);

struct CvResult {
  std::vector<std::vector<Label>> predictions;  // [repeat][sample]
  std::vector<double> accuracy;                 // per repeat
  double mean_accuracy() const;
};

CvResult cross_validate(std::span<const Sample> samples, int folds, int repeats, std::uint64_t seed,
                        const TrainOptions& options = {});

struct LearningPoint {
  std::size_t train_size{0};
  std::size_t repeats{0};  // repeats whose training split met the training preconditions
  double mean{0.0};
  double ci95{0.0};  // half width
};

// Per repeat: shuffle, hold out `holdout` of the samples, train on growing
// prefixes of the rest in steps of `step`.
std::vector<LearningPoint> learning_curve(std::span<const Sample> samples, std::size_t step, int repeats,
                                          std::uint64_t seed, double holdout = 0.2, const TrainOptions& options = {});

// ---------------------------------------------------------------------------
// Security

enum class DeauthCase { A, B, C };
const char* to_string(DeauthCase c);

struct DeauthOutcome {
  std::size_t event{0};  // index into GroundTruth::events
  int user{0};
  Tick departure{0};
  DeauthCase kind{DeauthCase::C};
  Tick deauth{0};
  Tick last_input{0};
  std::optional<Tick> t1;
};

// A: t1 + t_delta (correct and idle since t1); B: last_input + t_id + t_ss; C: departure + T.
DeauthOutcome make_outcome(std::size_t event, int user, Tick departure, Tick last_input, std::optional<Tick> t1,
                           std::optional<bool> correct, const Config& config);

struct CurvePoint {
  double seconds{0.0};
  double proportion{0.0};
};

// Proportion of departures deauthenticated within x seconds, x = 0, step, ... max.
std::vector<CurvePoint> deauth_curve(std::span<const DeauthOutcome> outcomes, double sample_rate_hz,
                                     double max_seconds, double step = 0.1);

struct SecurityOptions {
  int folds{5};
  int repeats{1};
  std::uint64_t seed{1};
  std::vector<std::size_t> streams;  // empty: all streams
  bool replay_check{true};
  TrainOptions train;
};

struct SecurityReport {
  LabeledWindows labeled;
  MdCounts md;
  CvResult cv;
  std::vector<DeauthOutcome> outcomes;  // repeats x departures, repeat-major
  std::size_t departures{0};
  std::size_t replay_checked{0};
  std::size_t replay_mismatches{0};
};

// Worst-case inputs for the replay check: seated users type on every tick,
// so the only idle workstation is the departed one (last input = departure).
InputTrace worst_case_inputs(const Occupancy& occupancy, Tick length);

SecurityReport security_run(const RssiTrace& trace, const GroundTruth& truth, const Occupancy& occupancy,
                            const Config& config, const SecurityOptions& options);

// Every departure deauthenticated by the time-out only.
std::vector<DeauthOutcome> timeout_outcomes(const GroundTruth& truth, const Config& config);

enum class Adversary { Insider, Coworker };
double adversary_delay(Adversary a);

// Exits where the target workstation is still authenticated at exit + delay.
std::size_t attack_opportunities(std::span<const DeauthOutcome> outcomes, std::span<const OfficeExit> exits,
                                 Adversary adversary, double sample_rate_hz);

// Sum over departures of max(0, deauth - departure), seconds.
double vulnerable_time(std::span<const DeauthOutcome> outcomes, double sample_rate_hz);

// ---------------------------------------------------------------------------
// Usability

struct UsabilityOptions {
  int runs{100};
  double p{0.78};
  double interval_s{5.0};
  double cost_ss{3.0};
  double cost_deauth{13.0};
  double dismiss_s{1.0};  // seated users clear a screen saver after this long
  double day_hours{8.0};
  std::uint64_t seed{1};
  std::vector<std::size_t> streams;  // empty: all streams
  int folds{5};
  TrainOptions train;
};

struct RunCost {
  std::size_t screen_savers{0};
  std::size_t deauths{0};
  double cost{0.0};
};

// Erroneous actions are ScreenSaverOn / Deauthenticate / TimeoutDeauth hitting
// a seated user.
RunCost count_costs(const ActionLog& log, const Occupancy& occupancy, double cost_ss, double cost_deauth);

struct CostReport {
  std::vector<RunCost> runs;
  std::size_t users{0};
  double day_scale{1.0};  // day length / trace duration
  double mean_ss_per_day{0.0}, sd_ss_per_day{0.0};
  double mean_deauth_per_day{0.0}, sd_deauth_per_day{0.0};
  double mean_cost_per_day{0.0}, sd_cost_per_day{0.0};
  double cost_per_user_day() const { return users ? mean_cost_per_day / static_cast<double>(users) : 0.0; }
};

// Window labels the controller sees: cross-validated predictions for TP
// windows and an all-sample model for the rest.
WindowClassifier evaluation_classifier(const RssiTrace& trace, std::span<const std::size_t> streams,
                                       const LabeledWindows& labeled, const CvResult& cv,
                                       const ClassifierModel& full_model, const Config& config);

// One replay with the given inputs; seated users dismiss screen savers after
// options.dismiss_s. The action log is returned through `log` when non-null.
RunCost usability_run(const Config& config, std::span<const int> users, std::span<const MdTick> md,
                      const InputTrace& inputs, const WindowClassifier& classifier, const Occupancy& occupancy,
                      const UsabilityOptions& options, ActionLog* log = nullptr);

CostReport usability_sim(const RssiTrace& trace, const GroundTruth& truth, const Occupancy& occupancy,
                         const Config& config, const UsabilityOptions& options);

CostReport summarize_costs(std::vector<RunCost> runs, std::size_t users, double day_scale);

// Sample mean and 95% t-interval half width.
std::pair<double, double> mean_ci95(std::span<const double> values);

}  // namespace rfdeauth
