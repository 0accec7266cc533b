#include "rfdeauth/eval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include <boost/math/distributions/students_t.hpp>

#include "rfdeauth/error.hpp"

namespace rfdeauth {

double MdCounts::precision() const { return tp + fp ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0; }
double MdCounts::recall() const { return tp + fn ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0; }
double MdCounts::f() const { return f_measure(tp, fp, fn); }

double f_measure(std::size_t tp, std::size_t fp, std::size_t fn) {
  if (tp == 0) return 0.0;
  const double p = static_cast<double>(tp) / static_cast<double>(tp + fp);
  const double r = static_cast<double>(tp) / static_cast<double>(tp + fn);
  return 2.0 * p * r / (p + r);
}

MdCounts md_outcomes(std::span<const VariationWindow> windows, const GroundTruth& truth, double delta_s,
                     Tick min_duration) {
  const auto kept = filter_windows(windows, min_duration);
  MdCounts c;
  std::vector<bool> found(truth.events.size(), false);
  for (const auto& w : kept) {
    bool tp = false;
    for (std::size_t e = 0; e < truth.events.size(); ++e) {
      const auto [u1, u2] = truth.true_window(truth.events[e], delta_s);
      if (overlaps(w.t1, w.t2, u1, u2)) {
        tp = true;
        found[e] = true;
      }
    }
    ++(tp ? c.tp : c.fp);
  }
  c.fn = static_cast<std::size_t>(std::count(found.begin(), found.end(), false));
  return c;
}

std::vector<SweepPoint> t_delta_sweep(std::span<const VariationWindow> windows, const GroundTruth& truth,
                                      const Config& config, double from, double to, double step) {
  std::vector<SweepPoint> out;
  const auto steps = static_cast<int>(std::floor((to - from) / step + 1e-9));
  for (int i = 0; i <= steps; ++i) {
    const double td = from + i * step;
    const auto counts = md_outcomes(windows, truth, config.delta, config.ticks(td));
    out.push_back({td, counts, counts.f()});
  }
  return out;
}

double best_t_delta(std::span<const SweepPoint> sweep) {
  if (sweep.empty()) throw ValidationError("empty t_delta sweep");
  const auto* best = &sweep.front();
  for (const auto& p : sweep) {
    if (p.f > best->f) best = &p;
  }
  return best->t_delta;
}

std::vector<std::size_t> sensor_subset(const RssiTrace& trace, int k) {
  auto devices = trace.devices();
  if (k < 2 || static_cast<std::size_t>(k) > devices.size()) {
    throw ValidationError("sensor subset size " + std::to_string(k) + " outside [2, " +
                          std::to_string(devices.size()) + "]");
  }
  devices.resize(static_cast<std::size_t>(k));
  return streams_among(trace, devices);
}

std::vector<SensorRow> md_by_sensor_count(const RssiTrace& trace, const GroundTruth& truth, const Config& config,
                                          int from, int to) {
  std::vector<SensorRow> rows;
  for (int k = from; k <= to; ++k) {
    const auto streams = sensor_subset(trace, k);
    const auto result = detect(trace, config, streams);
    rows.push_back({k, md_outcomes(result.windows, truth, config.delta, config.ticks(config.t_delta))});
  }
  return rows;
}

std::vector<std::optional<std::size_t>> match_events(std::span<const VariationWindow> windows,
                                                     const GroundTruth& truth, double delta_s) {
  std::vector<std::optional<std::size_t>> out(truth.events.size());
  for (std::size_t e = 0; e < truth.events.size(); ++e) {
    const auto [u1, u2] = truth.true_window(truth.events[e], delta_s);
    for (std::size_t i = 0; i < windows.size(); ++i) {
      if (overlaps(windows[i].t1, windows[i].t2, u1, u2)) {
        out[e] = i;
        break;
      }
    }
  }
  return out;
}

LabeledWindows label_windows(const RssiTrace& trace, std::span<const std::size_t> streams,
                             std::span<const VariationWindow> all_windows, const GroundTruth& truth,
                             const Config& config) {
  const Tick n = config.ticks(config.t_delta);
  LabeledWindows out;
  out.windows = filter_windows(all_windows, n);
  for (std::size_t i = 0; i < out.windows.size(); ++i) {
    const auto& w = out.windows[i];
    if (w.t1 + n > trace.length()) continue;
    for (const auto& e : truth.events) {
      const auto [u1, u2] = truth.true_window(e, config.delta);
      if (overlaps(w.t1, w.t2, u1, u2)) {
        auto s = extract_features(trace, streams, w.t1, config);
        s.label = e.label;
        out.samples.push_back(std::move(s));
        out.sample_window.push_back(i);
        break;
      }
    }
  }
  return out;
}

double CvResult::mean_accuracy() const {
  if (accuracy.empty()) return 0.0;
  return std::accumulate(accuracy.begin(), accuracy.end(), 0.0) / static_cast<double>(accuracy.size());
}

CvResult cross_validate(std::span<const Sample> samples, int folds, int repeats, std::uint64_t seed,
                        const TrainOptions& options) {
  if (folds < 2) throw ValidationError("cross-validation needs at least two folds");
  if (samples.size() < static_cast<std::size_t>(folds)) {
    throw ValidationError("insufficient samples: " + std::to_string(samples.size()) + " for " +
                          std::to_string(folds) + " folds");
  }
  CvResult out;
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> order(samples.size());
  for (int r = 0; r < repeats; ++r) {
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<Label> predicted(samples.size());
    std::size_t correct = 0;
    for (int f = 0; f < folds; ++f) {
      std::vector<Sample> train_set;
      std::vector<std::size_t> test;
      for (std::size_t pos = 0; pos < order.size(); ++pos) {
        if (static_cast<int>(pos % static_cast<std::size_t>(folds)) == f) {
          test.push_back(order[pos]);
        } else {
          train_set.push_back(samples[order[pos]]);
        }
      }
      const auto model = train(train_set, options);
      for (auto i : test) {
        predicted[i] = classify(model, samples[i].features);
        if (samples[i].label && predicted[i] == *samples[i].label) ++correct;
      }
    }
    out.accuracy.push_back(static_cast<double>(correct) / static_cast<double>(samples.size()));
    out.predictions.push_back(std::move(predicted));
  }
  return out;
}

std::pair<double, double> mean_ci95(std::span<const double> values) {
  if (values.empty()) return {0.0, 0.0};
  const auto k = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / k;
  if (values.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (k - 1.0));
  const boost::math::students_t dist(k - 1.0);
  const double q = boost::math::quantile(boost::math::complement(dist, 0.025));
  return {mean, q * sd / std::sqrt(k)};
}

std::vector<LearningPoint> learning_curve(std::span<const Sample> samples, std::size_t step, int repeats,
                                          std::uint64_t seed, double holdout, const TrainOptions& options) {
  if (step == 0) throw ValidationError("learning-curve step must be >= 1");
  if (!(holdout > 0.0 && holdout < 1.0)) throw ValidationError("holdout fraction must lie in (0, 1)");
  const auto n_test = static_cast<std::size_t>(std::ceil(holdout * static_cast<double>(samples.size())));
  if (n_test == 0 || n_test >= samples.size()) throw ValidationError("insufficient samples for a learning curve");
  const std::size_t pool = samples.size() - n_test;

  std::map<std::size_t, std::vector<double>> acc;
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> order(samples.size());
  for (int r = 0; r < repeats; ++r) {
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<Sample> test;
    for (std::size_t i = 0; i < n_test; ++i) test.push_back(samples[order[i]]);
    for (std::size_t size = step; size <= pool; size += step) {
      std::vector<Sample> train_set;
      for (std::size_t i = 0; i < size; ++i) train_set.push_back(samples[order[n_test + i]]);
      try {
        const auto model = train(train_set, options);
        acc[size].push_back(accuracy(model, test));
      } catch (const ValidationError&) {
        // Too few classes in this prefix; the point is reported with fewer repeats.
      }
    }
  }
  std::vector<LearningPoint> out;
  for (const auto& [size, values] : acc) {
    const auto [mean, ci] = mean_ci95(values);
    out.push_back({size, values.size(), mean, ci});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Security

const char* to_string(DeauthCase c) {
  switch (c) {
    case DeauthCase::A: return "A";
    case DeauthCase::B: return "B";
    case DeauthCase::C: return "C";
  }
  return "?";
}

DeauthOutcome make_outcome(std::size_t event, int user, Tick departure, Tick last_input, std::optional<Tick> t1,
                           std::optional<bool> correct, const Config& config) {
  DeauthOutcome o{event, user, departure, DeauthCase::C, departure + config.ticks(config.T), last_input, t1};
  if (t1 && correct) {
    // Rule 1 also needs the user idle over the whole decision window; an input
    // after t1 leaves the departure to the alert escalation.
    if (*correct && last_input <= *t1) {
      o.kind = DeauthCase::A;
      o.deauth = *t1 + config.ticks(config.t_delta);
    } else {
      o.kind = DeauthCase::B;
      o.deauth = last_input + config.ticks(config.t_id) + config.ticks(config.t_ss);
    }
  }
  return o;
}

std::vector<CurvePoint> deauth_curve(std::span<const DeauthOutcome> outcomes, double sample_rate_hz,
                                     double max_seconds, double step) {
  std::vector<double> delays;
  for (const auto& o : outcomes) delays.push_back(static_cast<double>(o.deauth - o.departure) / sample_rate_hz);
  std::sort(delays.begin(), delays.end());
  std::vector<CurvePoint> curve;
  const auto points = static_cast<int>(std::floor(max_seconds / step + 1e-9));
  for (int i = 0; i <= points; ++i) {
    const double x = i * step;
    const auto within = std::upper_bound(delays.begin(), delays.end(), x + 1e-9) - delays.begin();
    curve.push_back({x, delays.empty() ? 0.0 : static_cast<double>(within) / static_cast<double>(delays.size())});
  }
  return curve;
}

InputTrace worst_case_inputs(const Occupancy& occupancy, Tick length) {
  InputTrace inputs;
  for (std::size_t u = 0; u < occupancy.users.size(); ++u) {
    auto& ticks = inputs.inputs[occupancy.users[u]];
    const auto& away = occupancy.away[u];
    std::size_t next = 0;
    for (Tick t = 0; t < length; ++t) {
      while (next < away.size() && away[next].end <= t) ++next;
      if (next < away.size() && t >= away[next].begin) continue;
      ticks.push_back(t);
    }
  }
  return inputs;
}

namespace {

std::vector<std::size_t> resolve_streams(const RssiTrace& trace, const std::vector<std::size_t>& streams) {
  return streams.empty() ? all_streams(trace) : streams;
}

}  // namespace

WindowClassifier evaluation_classifier(const RssiTrace& trace, std::span<const std::size_t> streams,
                                       const LabeledWindows& labeled, const CvResult& cv,
                                       const ClassifierModel& full_model, const Config& config) {
  std::map<Tick, Label> known;
  if (!cv.predictions.empty()) {
    for (std::size_t i = 0; i < labeled.samples.size(); ++i) known[labeled.samples[i].t1] = cv.predictions[0][i];
  }
  std::vector<std::size_t> selected(streams.begin(), streams.end());
  return [&trace, known = std::move(known), model = full_model, selected, config](Tick t1) {
    if (const auto it = known.find(t1); it != known.end()) return it->second;
    return classify(model, extract_features(trace, selected, t1, config).features);
  };
}

SecurityReport security_run(const RssiTrace& trace, const GroundTruth& truth, const Occupancy& occupancy,
                            const Config& config, const SecurityOptions& options) {
  const auto streams = resolve_streams(trace, options.streams);
  const auto detection = detect(trace, config, streams);
  SecurityReport report;
  report.labeled = label_windows(trace, streams, detection.windows, truth, config);
  report.md = md_outcomes(detection.windows, truth, config.delta, config.ticks(config.t_delta));
  report.cv = cross_validate(report.labeled.samples, options.folds, options.repeats, options.seed, options.train);

  const auto matches = match_events(report.labeled.windows, truth, config.delta);
  std::map<std::size_t, std::size_t> window_sample;
  for (std::size_t i = 0; i < report.labeled.sample_window.size(); ++i) {
    window_sample[report.labeled.sample_window[i]] = i;
  }
  std::vector<std::size_t> departures;
  for (std::size_t e = 0; e < truth.events.size(); ++e) {
    if (!truth.events[e].label.is_entry()) departures.push_back(e);
  }
  report.departures = departures.size();

  for (int r = 0; r < options.repeats; ++r) {
    for (auto e : departures) {
      const auto& ev = truth.events[e];
      std::optional<Tick> t1;
      std::optional<bool> correct;
      if (matches[e]) {
        if (const auto it = window_sample.find(*matches[e]); it != window_sample.end()) {
          t1 = report.labeled.windows[*matches[e]].t1;
          correct = report.cv.predictions[static_cast<std::size_t>(r)][it->second] == ev.label;
        }
      }
      report.outcomes.push_back(make_outcome(e, ev.label.index, ev.tick, ev.tick, t1, correct, config));
    }
  }

  if (options.replay_check) {
    const auto full_model = train(report.labeled.samples, options.train);
    const auto classifier = evaluation_classifier(trace, streams, report.labeled, report.cv, full_model, config);
    const auto inputs = worst_case_inputs(occupancy, trace.length());
    const std::vector<int> users(occupancy.users.begin(), occupancy.users.end());
    const auto log = replay(config, users, detection.ticks, inputs, classifier);
    for (std::size_t i = 0; i < departures.size(); ++i) {
      const auto& o = report.outcomes[i];
      if (o.kind == DeauthCase::C) continue;  // the user may return before the time-out
      ++report.replay_checked;
      std::optional<Tick> seen;
      for (const auto& a : log) {
        if (a.workstation == o.user && a.t >= o.departure &&
            (a.action == Action::Deauthenticate || a.action == Action::TimeoutDeauth)) {
          seen = a.t;
          break;
        }
      }
      if (!seen || std::abs(*seen - o.deauth) > 1) ++report.replay_mismatches;
    }
  }
  return report;
}

std::vector<DeauthOutcome> timeout_outcomes(const GroundTruth& truth, const Config& config) {
  std::vector<DeauthOutcome> out;
  for (std::size_t e = 0; e < truth.events.size(); ++e) {
    const auto& ev = truth.events[e];
    if (ev.label.is_entry()) continue;
    out.push_back(make_outcome(e, ev.label.index, ev.tick, ev.tick, std::nullopt, std::nullopt, config));
  }
  return out;
}

double adversary_delay(Adversary a) { return a == Adversary::Insider ? 4.0 : 0.0; }

std::size_t attack_opportunities(std::span<const DeauthOutcome> outcomes, std::span<const OfficeExit> exits,
                                 Adversary adversary, double sample_rate_hz) {
  const auto delay = static_cast<Tick>(std::llround(adversary_delay(adversary) * sample_rate_hz));
  std::size_t count = 0;
  for (const auto& x : exits) {
    const auto it = std::find_if(outcomes.begin(), outcomes.end(),
                                 [&](const auto& o) { return o.user == x.user && o.departure == x.depart; });
    if (it == outcomes.end() || it->deauth > x.exit + delay) ++count;
  }
  return count;
}

double vulnerable_time(std::span<const DeauthOutcome> outcomes, double sample_rate_hz) {
  double total = 0.0;
  for (const auto& o : outcomes) total += static_cast<double>(std::max<Tick>(0, o.deauth - o.departure)) / sample_rate_hz;
  return total;
}

// ---------------------------------------------------------------------------
// Usability

RunCost count_costs(const ActionLog& log, const Occupancy& occupancy, double cost_ss, double cost_deauth) {
  RunCost c;
  for (const auto& a : log) {
    if (!occupancy.seated(a.workstation, a.t)) continue;
    if (a.action == Action::ScreenSaverOn) ++c.screen_savers;
    if (a.action == Action::Deauthenticate || a.action == Action::TimeoutDeauth) ++c.deauths;
  }
  c.cost = cost_ss * static_cast<double>(c.screen_savers) + cost_deauth * static_cast<double>(c.deauths);
  return c;
}

namespace {

std::pair<double, double> mean_sd(const std::vector<double>& v) {
  if (v.empty()) return {0.0, 0.0};
  const auto n = static_cast<double>(v.size());
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {mean, v.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0};
}

}  // namespace

CostReport summarize_costs(std::vector<RunCost> runs, std::size_t users, double day_scale) {
  CostReport r;
  r.runs = std::move(runs);
  r.users = users;
  r.day_scale = day_scale;
  std::vector<double> ss, de, cost;
  for (const auto& c : r.runs) {
    ss.push_back(static_cast<double>(c.screen_savers) * day_scale);
    de.push_back(static_cast<double>(c.deauths) * day_scale);
    cost.push_back(c.cost * day_scale);
  }
  std::tie(r.mean_ss_per_day, r.sd_ss_per_day) = mean_sd(ss);
  std::tie(r.mean_deauth_per_day, r.sd_deauth_per_day) = mean_sd(de);
  std::tie(r.mean_cost_per_day, r.sd_cost_per_day) = mean_sd(cost);
  return r;
}

RunCost usability_run(const Config& config, std::span<const int> users, std::span<const MdTick> md,
                      const InputTrace& inputs, const WindowClassifier& classifier, const Occupancy& occupancy,
                      const UsabilityOptions& options, ActionLog* log) {
  ReplayOptions replay_options;
  replay_options.dismiss_after = config.ticks(options.dismiss_s);
  replay_options.seated = [&occupancy](int w, Tick t) { return occupancy.seated(w, t); };
  auto actions = replay(config, users, md, inputs, classifier, replay_options);
  const auto cost = count_costs(actions, occupancy, options.cost_ss, options.cost_deauth);
  if (log) *log = std::move(actions);
  return cost;
}

CostReport usability_sim(const RssiTrace& trace, const GroundTruth& truth, const Occupancy& occupancy,
                         const Config& config, const UsabilityOptions& options) {
  if (options.runs < 1) throw ValidationError("usability simulation needs at least one run");
  const auto streams = resolve_streams(trace, options.streams);
  const auto detection = detect(trace, config, streams);
  const auto labeled = label_windows(trace, streams, detection.windows, truth, config);
  const auto cv = cross_validate(labeled.samples, options.folds, 1, options.seed, options.train);
  const auto full_model = train(labeled.samples, options.train);
  const auto classifier = evaluation_classifier(trace, streams, labeled, cv, full_model, config);

  const std::vector<int> users(occupancy.users.begin(), occupancy.users.end());
  const Tick interval = std::max<Tick>(1, config.ticks(options.interval_s));
  std::vector<RunCost> runs;
  for (int r = 0; r < options.runs; ++r) {
    const auto inputs = simulate_inputs(trace.length(), occupancy, options.p, interval,
                                        options.seed + 1 + static_cast<std::uint64_t>(r));
    runs.push_back(usability_run(config, users, detection.ticks, inputs, classifier, occupancy, options));
  }
  const double day_scale = trace.duration() > 0.0 ? options.day_hours * 3600.0 / trace.duration() : 0.0;
  return summarize_costs(std::move(runs), users.size(), day_scale);
}

}  // namespace rfdeauth
