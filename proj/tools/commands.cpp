#include "commands.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "manifest.hpp"
#include "rfdeauth/analysis.hpp"
#include "rfdeauth/error.hpp"
#include "rfdeauth/eval.hpp"
#include "rfdeauth/scenario.hpp"
#include "rfdeauth/structured_text.hpp"

namespace fs = std::filesystem;

namespace rfdeauth::cli {
namespace {

Config load_cli_config(const GlobalOptions& g) { return g.config.empty() ? reference_config() : load_config(g.config); }

// Collects output files and writes them under the output directory.
class Outputs {
 public:
  explicit Outputs(const GlobalOptions& g) : dir_(g.out_dir) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw InputError("cannot create output directory " + dir_.string() + ": " + ec.message());
  }

  // The body runs to completion before the file is touched, so a failing
  // computation leaves no truncated output behind.
  void write(const std::string& name, const std::function<void(std::ostream&)>& body) {
    std::ostringstream buffer;
    body(buffer);
    const auto path = dir_ / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path.string());
    out << buffer.view();
    if (!out) throw InputError("write failed: " + path.string());
    names_.push_back(name);
  }

  void manifest(RunManifest m, const GlobalOptions& g) {
    m.config = g.config.empty() ? "reference" : g.config;
    m.seed = g.seed;
    m.outputs = names_;
    write_manifest(dir_ / "manifest.json", m);
  }

 private:
  fs::path dir_;
  std::vector<std::string> names_;
};

std::string num(double v) { return format_double(v); }

std::string pct(std::size_t part, std::size_t whole) {
  if (whole == 0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", 100.0 * static_cast<double>(part) / static_cast<double>(whole));
  return buf;
}

// The trace's devices must be exactly the plan's sensors.
void check_schema(const RssiTrace& trace, const FloorPlan& plan) {
  if (trace.length() == 0) return;
  auto ids = plan.sensor_ids();
  std::sort(ids.begin(), ids.end());
  if (trace.devices() != ids) {
    throw ValidationError("trace has " + std::to_string(trace.devices().size()) + " devices / " +
                          std::to_string(trace.stream_count()) + " streams but the plan has " +
                          std::to_string(ids.size()) + " sensors");
  }
}

FloorPlan plan_or_reference(const std::string& path) { return path.empty() ? reference_plan() : load_plan(path); }

// ---------------------------------------------------------------------------

struct SimulateArgs {
  std::string plan, script;
  ScenarioOptions scenario;
  double noise{kReferenceNoiseSigma};
  bool inputs{false};
  double p{0.78};
};

void simulate(const GlobalOptions& g, const SimulateArgs& a) {
  const auto cfg = load_cli_config(g);
  const auto plan = plan_or_reference(a.plan);
  MovementScript script;
  if (a.script.empty()) {
    ScenarioOptions o = a.scenario;
    o.seed = g.seed;
    script = reference_script(plan, o, cfg.sample_rate_hz);
  } else {
    script = load_script(a.script);
  }
  const auto sim = generate_trace(plan, script, a.noise, g.seed + 1, cfg.sample_rate_hz);

  Outputs out(g);
  out.write("trace.csv", [&](std::ostream& os) { write_trace(os, sim.trace); });
  out.write("truth.csv", [&](std::ostream& os) { write_truth(os, sim.truth); });
  if (a.plan.empty()) out.write("plan.txt", [&](std::ostream& os) { os << serialize_plan(plan); });
  if (a.script.empty()) out.write("script.txt", [&](std::ostream& os) { os << serialize_script(script); });
  if (a.inputs) {
    const auto occ = occupancy(plan, script, cfg.sample_rate_hz);
    const auto inputs = simulate_inputs(sim.trace.length(), occ, a.p, std::max<Tick>(1, cfg.ticks(5.0)), g.seed + 2);
    out.write("inputs.csv", [&](std::ostream& os) { write_inputs(os, inputs, cfg.sample_rate_hz); });
  }
  RunManifest m{"simulate", {}, 0, {}, {}, {}};
  m.inputs = {{"plan", a.plan.empty() ? "reference" : a.plan}, {"script", a.script.empty() ? "reference" : a.script}};
  m.parameters = {{"noise_sigma_db", num(a.noise)}};
  if (a.script.empty()) {
    m.parameters.emplace_back("departures", std::to_string(a.scenario.departures));
    m.parameters.emplace_back("min_gap_s", num(a.scenario.min_gap));
    m.parameters.emplace_back("max_gap_s", num(a.scenario.max_gap));
    m.parameters.emplace_back("fidget_every_s", num(a.scenario.fidget_every));
  }
  if (a.inputs) m.parameters.emplace_back("input_probability", num(a.p));
  out.manifest(std::move(m), g);
}

// ---------------------------------------------------------------------------

struct DetectArgs {
  std::string trace;
};

void detect_cmd(const GlobalOptions& g, const DetectArgs& a) {
  const auto cfg = load_cli_config(g);
  const auto trace = read_trace(a.trace, cfg.sample_rate_hz);
  const auto result = detect(trace, cfg);
  Outputs out(g);
  out.write("windows.csv", [&](std::ostream& os) { write_windows(os, result.windows, cfg.sample_rate_hz); });
  out.write("md_debug.csv", [&](std::ostream& os) { write_md_debug(os, result, cfg.sample_rate_hz); });
  RunManifest m{"detect", {}, 0, {{"trace", a.trace}}, {}, {}};
  m.parameters = {{"windows", std::to_string(result.windows.size())},
                  {"profile_updates", std::to_string(result.committed_updates)}};
  out.manifest(std::move(m), g);
}

// ---------------------------------------------------------------------------

struct TrainArgs {
  std::string trace, truth, inputs;
  double lambda{1e-3};
  int epochs{200};
};

void train_cmd(const GlobalOptions& g, const TrainArgs& a) {
  if (a.truth.empty() == a.inputs.empty()) throw InputError("train needs exactly one of --truth or --inputs");
  const auto cfg = load_cli_config(g);
  const auto trace = read_trace(a.trace, cfg.sample_rate_hz);
  const auto streams = all_streams(trace);
  const auto detection = detect(trace, cfg, streams);
  std::vector<Sample> samples;
  if (!a.truth.empty()) {
    const auto truth = read_truth(fs::path(a.truth), cfg.sample_rate_hz, trace.length());
    samples = label_windows(trace, streams, detection.windows, truth, cfg).samples;
  } else {
    // Labels from keyboard/mouse idleness, as in unattended training.
    const auto inputs = read_inputs(fs::path(a.inputs), cfg.sample_rate_hz);
    std::vector<int> ws;
    for (const auto& [w, ticks] : inputs.inputs) ws.push_back(w);
    const Tick n = cfg.ticks(cfg.t_delta);
    for (const auto& w : filter_windows(detection.windows, n)) {
      if (w.t1 + n > trace.length()) continue;
      auto label = auto_label(w, inputs, ws, cfg);
      if (!label) continue;
      auto s = extract_features(trace, streams, w.t1, cfg);
      s.label = label;
      samples.push_back(std::move(s));
    }
  }
  const auto model = train(samples, TrainOptions{a.lambda, a.epochs});
  Outputs out(g);
  out.write("model.txt", [&](std::ostream& os) { save_model(os, model); });
  out.write("samples.csv", [&](std::ostream& os) { write_samples(os, samples); });
  RunManifest m{"train", {}, 0, {{"trace", a.trace}}, {}, {}};
  if (!a.truth.empty()) m.inputs.emplace_back("truth", a.truth);
  if (!a.inputs.empty()) m.inputs.emplace_back("inputs", a.inputs);
  m.parameters = {{"samples", std::to_string(samples.size())},
                  {"lambda", num(a.lambda)},
                  {"epochs", std::to_string(a.epochs)},
                  {"training_accuracy", num(model.training_accuracy)}};
  out.manifest(std::move(m), g);
}

// ---------------------------------------------------------------------------

struct RunArgs {
  std::string trace, model, inputs;
};

void run_cmd(const GlobalOptions& g, const RunArgs& a) {
  const auto cfg = load_cli_config(g);
  const auto trace = read_trace(a.trace, cfg.sample_rate_hz);
  const auto model = load_model(fs::path(a.model));
  const auto streams = all_streams(trace);
  if (trace.length() > 0 && model.dimension() != streams.size() * kFeaturesPerStream) {
    throw ValidationError("model expects " + std::to_string(model.dimension()) + " features but the trace yields " +
                          std::to_string(streams.size() * kFeaturesPerStream));
  }
  InputTrace inputs;
  if (!a.inputs.empty()) inputs = read_inputs(fs::path(a.inputs), cfg.sample_rate_hz);
  std::set<int> ws;
  for (const auto& c : model.classes) {
    if (!c.is_entry()) ws.insert(c.index);
  }
  for (const auto& [w, ticks] : inputs.inputs) ws.insert(w);
  const std::vector<int> workstations(ws.begin(), ws.end());

  ActionLog log;
  if (trace.length() > 0) {
    const auto detection = detect(trace, cfg, streams);
    log = replay(cfg, workstations, detection.ticks, inputs, model_classifier(trace, streams, model, cfg));
  }
  Outputs out(g);
  out.write("actions.csv", [&](std::ostream& os) { write_actions(os, log, cfg.sample_rate_hz); });
  RunManifest m{"run", {}, 0, {{"trace", a.trace}, {"model", a.model}}, {}, {}};
  if (!a.inputs.empty()) m.inputs.emplace_back("inputs", a.inputs);
  m.parameters = {{"actions", std::to_string(log.size())}};
  out.manifest(std::move(m), g);
}

// ---------------------------------------------------------------------------

struct EvaluateArgs {
  std::string trace, truth, plan, script, mode{"md"};
  std::optional<int> sensors_from;
  int runs{100};
  int repeats{1};
  int curve_repeats{10};
  double curve_max{60.0};
};

struct EvalInputs {
  Config cfg;
  RssiTrace trace;
  GroundTruth truth;
  FloorPlan plan;
  Occupancy occ;
};

EvalInputs load_eval(const GlobalOptions& g, const EvaluateArgs& a) {
  EvalInputs in;
  in.cfg = load_cli_config(g);
  in.trace = read_trace(a.trace, in.cfg.sample_rate_hz);
  in.truth = read_truth(fs::path(a.truth), in.cfg.sample_rate_hz, in.trace.length());
  in.plan = plan_or_reference(a.plan);
  check_schema(in.trace, in.plan);
  if (in.trace.length() == 0) throw ValidationError("trace is empty");
  in.occ = occupancy(in.plan, load_script(a.script), in.cfg.sample_rate_hz);
  return in;
}

int sensor_start(const EvaluateArgs& a, int devices, int fallback) {
  const int k = a.sensors_from.value_or(fallback);
  if (k < 2 || k > devices) {
    throw ValidationError("--sensors-from must lie in [2, " + std::to_string(devices) + "]");
  }
  return k;
}

void evaluate_md(const EvalInputs& in, const EvaluateArgs& a, Outputs& out) {
  const int devices = static_cast<int>(in.trace.devices().size());
  const auto rows = md_by_sensor_count(in.trace, in.truth, in.cfg, sensor_start(a, devices, std::min(3, devices)),
                                       devices);
  out.write("md_sensors.csv", [&](std::ostream& os) {
    os << "sensors,tp,fp,fn,tp_pct,fp_pct,fn_pct\n";
    for (const auto& r : rows) {
      const auto total = r.counts.tp + r.counts.fp + r.counts.fn;
      os << r.sensors << ',' << r.counts.tp << ',' << r.counts.fp << ',' << r.counts.fn << ','
         << pct(r.counts.tp, total) << ',' << pct(r.counts.fp, total) << ',' << pct(r.counts.fn, total) << '\n';
    }
  });
  const auto windows = detect_variation_windows(in.trace, in.cfg);
  const auto sweep = t_delta_sweep(windows, in.truth, in.cfg);
  out.write("t_delta_sweep.csv", [&](std::ostream& os) {
    os << "t_delta,tp,fp,fn,precision,recall,f\n";
    for (const auto& p : sweep) {
      os << num(p.t_delta) << ',' << p.counts.tp << ',' << p.counts.fp << ',' << p.counts.fn << ','
         << num(p.counts.precision()) << ',' << num(p.counts.recall()) << ',' << num(p.f) << '\n';
    }
  });
}

void evaluate_re(const EvalInputs& in, const EvaluateArgs& a, Outputs& out, std::uint64_t seed) {
  const auto streams = all_streams(in.trace);
  const auto detection = detect(in.trace, in.cfg, streams);
  const auto labeled = label_windows(in.trace, streams, detection.windows, in.truth, in.cfg);
  const auto cv = cross_validate(labeled.samples, 5, a.repeats, seed);
  out.write("cv.csv", [&](std::ostream& os) {
    os << "repeat,accuracy\n";
    for (std::size_t r = 0; r < cv.accuracy.size(); ++r) os << r << ',' << num(cv.accuracy[r]) << '\n';
  });
  const auto curve = learning_curve(labeled.samples, 5, a.curve_repeats, seed);
  out.write("learning_curve.csv", [&](std::ostream& os) {
    os << "train_size,repeats,mean_accuracy,ci95\n";
    for (const auto& p : curve) os << p.train_size << ',' << p.repeats << ',' << num(p.mean) << ',' << num(p.ci95) << '\n';
  });
}

void evaluate_security(const EvalInputs& in, const EvaluateArgs& a, Outputs& out, std::uint64_t seed) {
  SecurityOptions so;
  so.repeats = a.repeats;
  so.seed = seed;
  const auto report = security_run(in.trace, in.truth, in.occ, in.cfg, so);
  const double rate = in.cfg.sample_rate_hz;
  out.write("deauth_curve.csv", [&](std::ostream& os) {
    os << "seconds,proportion\n";
    for (const auto& p : deauth_curve(report.outcomes, rate, a.curve_max)) {
      os << num(p.seconds) << ',' << num(p.proportion) << '\n';
    }
  });
  out.write("outcomes.csv", [&](std::ostream& os) {
    os << "repeat,user,departure,case,deauth,delay\n";
    for (std::size_t i = 0; i < report.outcomes.size(); ++i) {
      const auto& o = report.outcomes[i];
      os << (report.departures ? i / report.departures : 0) << ",w" << o.user << ',' << format_time(o.departure, rate)
         << ',' << to_string(o.kind) << ',' << format_time(o.deauth, rate) << ','
         << format_time(o.deauth - o.departure, rate) << '\n';
    }
  });
  const auto baseline = timeout_outcomes(in.truth, in.cfg);
  out.write("attacks.csv", [&](std::ostream& os) {
    os << "adversary,timeout_only,pipeline\n";
    for (auto adv : {Adversary::Insider, Adversary::Coworker}) {
      os << (adv == Adversary::Insider ? "insider" : "coworker") << ','
         << attack_opportunities(baseline, in.occ.exits, adv, rate) << ','
         << attack_opportunities(std::span(report.outcomes).first(report.departures), in.occ.exits, adv, rate)
         << '\n';
    }
  });
  out.write("security_summary.csv", [&](std::ostream& os) {
    os << "departures,tp,fp,fn,cv_accuracy,replay_checked,replay_mismatches\n";
    os << report.departures << ',' << report.md.tp << ',' << report.md.fp << ',' << report.md.fn << ','
       << num(report.cv.mean_accuracy()) << ',' << report.replay_checked << ',' << report.replay_mismatches << '\n';
  });
}

void evaluate_usability(const EvalInputs& in, const EvaluateArgs& a, Outputs& out, std::uint64_t seed) {
  const int devices = static_cast<int>(in.trace.devices().size());
  out.write("usability.csv", [&](std::ostream& os) {
    os << "sensors,ss_per_day,ss_sd,deauth_per_day,deauth_sd,cost_per_day,cost_sd,cost_per_user_day\n";
    for (int k = sensor_start(a, devices, devices); k <= devices; ++k) {
      UsabilityOptions uo;
      uo.runs = a.runs;
      uo.seed = seed;
      uo.streams = sensor_subset(in.trace, k);
      const auto r = usability_sim(in.trace, in.truth, in.occ, in.cfg, uo);
      os << k << ',' << num(r.mean_ss_per_day) << ',' << num(r.sd_ss_per_day) << ',' << num(r.mean_deauth_per_day)
         << ',' << num(r.sd_deauth_per_day) << ',' << num(r.mean_cost_per_day) << ',' << num(r.sd_cost_per_day)
         << ',' << num(r.cost_per_user_day()) << '\n';
    }
  });
}

// Vulnerable time against daily cost, per sensor count, next to the
// time-out-only baseline.
void evaluate_compare(const EvalInputs& in, const EvaluateArgs& a, Outputs& out, std::uint64_t seed) {
  const int devices = static_cast<int>(in.trace.devices().size());
  const double rate = in.cfg.sample_rate_hz;
  out.write("compare.csv", [&](std::ostream& os) {
    os << "system,sensors,vulnerable_s,cost_per_day\n";
    os << "timeout,0," << num(vulnerable_time(timeout_outcomes(in.truth, in.cfg), rate)) << ",0\n";
    for (int k = sensor_start(a, devices, devices); k <= devices; ++k) {
      SecurityOptions so;
      so.repeats = a.repeats;
      so.seed = seed;
      so.streams = sensor_subset(in.trace, k);
      so.replay_check = false;
      const auto report = security_run(in.trace, in.truth, in.occ, in.cfg, so);
      const double vulnerable =
          vulnerable_time(report.outcomes, rate) / static_cast<double>(std::max(1, a.repeats));
      UsabilityOptions uo;
      uo.runs = a.runs;
      uo.seed = seed;
      uo.streams = so.streams;
      const auto cost = usability_sim(in.trace, in.truth, in.occ, in.cfg, uo);
      os << "pipeline," << k << ',' << num(vulnerable) << ',' << num(cost.mean_cost_per_day) << '\n';
    }
  });
}

void evaluate_cmd(const GlobalOptions& g, const EvaluateArgs& a) {
  const auto in = load_eval(g, a);
  Outputs out(g);
  if (a.mode == "md") {
    evaluate_md(in, a, out);
  } else if (a.mode == "re") {
    evaluate_re(in, a, out, g.seed);
  } else if (a.mode == "security") {
    evaluate_security(in, a, out, g.seed);
  } else if (a.mode == "usability") {
    evaluate_usability(in, a, out, g.seed);
  } else {
    evaluate_compare(in, a, out, g.seed);
  }
  RunManifest m{"evaluate", {}, 0, {{"trace", a.trace}, {"truth", a.truth}, {"script", a.script}}, {}, {}};
  m.inputs.emplace_back("plan", a.plan.empty() ? "reference" : a.plan);
  m.parameters = {{"mode", a.mode}, {"runs", std::to_string(a.runs)}, {"repeats", std::to_string(a.repeats)}};
  out.manifest(std::move(m), g);
}

// ---------------------------------------------------------------------------

struct AnalyzeArgs {
  std::string trace, truth, plan;
  RankingOptions ranking;
};

void analyze_cmd(const GlobalOptions& g, const AnalyzeArgs& a) {
  const auto cfg = load_cli_config(g);
  const auto trace = read_trace(a.trace, cfg.sample_rate_hz);
  const auto truth = read_truth(fs::path(a.truth), cfg.sample_rate_hz, trace.length());
  const auto plan = plan_or_reference(a.plan);
  check_schema(trace, plan);
  const auto streams = all_streams(trace);
  const auto detection = detect(trace, cfg, streams);
  const auto samples = label_windows(trace, streams, detection.windows, truth, cfg).samples;
  if (samples.empty()) throw ValidationError("no labeled windows to analyze");
  const auto names = feature_names(trace, streams);
  const auto matrix = correlation_matrix(samples);
  const auto ranking = rank_features(samples, names, a.ranking);
  const auto importance = stream_importance(ranking, trace.streams(), plan);
  Outputs out(g);
  out.write("correlations.csv", [&](std::ostream& os) { write_correlations(os, matrix, names); });
  out.write("ranking.csv", [&](std::ostream& os) { write_ranking(os, ranking); });
  out.write("importance.csv", [&](std::ostream& os) { write_importance(os, importance); });
  RunManifest m{"analyze", {}, 0, {{"trace", a.trace}, {"truth", a.truth}}, {}, {}};
  m.inputs.emplace_back("plan", a.plan.empty() ? "reference" : a.plan);
  m.parameters = {{"samples", std::to_string(samples.size())},
                  {"bins", std::to_string(a.ranking.bins)},
                  {"min_rmi", num(a.ranking.min_rmi)},
                  {"max_abs_correlation", num(a.ranking.max_abs_correlation)}};
  out.manifest(std::move(m), g);
}

}  // namespace

void register_commands(CLI::App& app, GlobalOptions& g) {
  {
    auto a = std::make_shared<SimulateArgs>();
    auto* sub = app.add_subcommand("simulate", "Generate an RSSI trace and ground truth from a floor plan and script");
    sub->add_option("--plan", a->plan, "Floor plan file (default: built-in 8 x 6 m office)")->check(CLI::ExistingFile);
    sub->add_option("--script", a->script, "Movement script file (default: generated reference script)")
        ->check(CLI::ExistingFile);
    sub->add_option("--departures", a->scenario.departures, "Departures in the generated script")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--min-gap", a->scenario.min_gap, "Generated script: shortest quiet gap between movements, s")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    sub->add_option("--max-gap", a->scenario.max_gap, "Generated script: longest quiet gap between movements, s")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    sub->add_option("--fidget-every", a->scenario.fidget_every,
                    "Generated script: mean spacing of seated fidgets, s (0 disables)")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--noise", a->noise, "Per-reading noise standard deviation, dB")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    sub->add_flag("--inputs", a->inputs, "Also write simulated keyboard/mouse inputs (inputs.csv)");
    sub->add_option("--input-probability", a->p, "Chance of input per 5-s seated interval")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 1.0));
    sub->callback([&g, a] { simulate(g, *a); });
  }
  {
    auto a = std::make_shared<DetectArgs>();
    auto* sub = app.add_subcommand("detect", "Run movement detection and write variation windows");
    sub->add_option("--trace", a->trace, "Trace CSV")->required()->check(CLI::ExistingFile);
    sub->callback([&g, a] { detect_cmd(g, *a); });
  }
  {
    auto a = std::make_shared<TrainArgs>();
    auto* sub = app.add_subcommand("train", "Train the workstation classifier on detected windows");
    sub->add_option("--trace", a->trace, "Trace CSV")->required()->check(CLI::ExistingFile);
    auto* truth = sub->add_option("--truth", a->truth, "Ground-truth CSV used as labels")->check(CLI::ExistingFile);
    auto* inputs = sub->add_option("--inputs", a->inputs, "Input CSV; labels come from workstation idleness")
                       ->check(CLI::ExistingFile);
    truth->excludes(inputs);
    sub->add_option("--lambda", a->lambda, "SVM regularization")->capture_default_str()->check(CLI::PositiveNumber);
    sub->add_option("--epochs", a->epochs, "Training epochs")->capture_default_str()->check(CLI::PositiveNumber);
    sub->callback([&g, a] { train_cmd(g, *a); });
  }
  {
    auto a = std::make_shared<RunArgs>();
    auto* sub = app.add_subcommand("run", "Replay the controller over a trace and write the action log");
    sub->add_option("--trace", a->trace, "Trace CSV")->required()->check(CLI::ExistingFile);
    sub->add_option("--model", a->model, "Model file from train")->required()->check(CLI::ExistingFile);
    sub->add_option("--inputs", a->inputs, "Input CSV (default: no input at all)")->check(CLI::ExistingFile);
    sub->callback([&g, a] { run_cmd(g, *a); });
  }
  {
    auto a = std::make_shared<EvaluateArgs>();
    auto* sub = app.add_subcommand("evaluate", "Reproduce the detection, classification, security and usability experiments");
    sub->add_option("--trace", a->trace, "Trace CSV")->required()->check(CLI::ExistingFile);
    sub->add_option("--truth", a->truth, "Ground-truth CSV")->required()->check(CLI::ExistingFile);
    sub->add_option("--script", a->script, "Movement script the trace was generated from")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--plan", a->plan, "Floor plan file (default: built-in office)")->check(CLI::ExistingFile);
    sub->add_option("--mode", a->mode, "md | re | security | usability | compare")
        ->capture_default_str()
        ->check(CLI::IsMember({"md", "re", "security", "usability", "compare"}));
    sub->add_option("--sensors-from", a->sensors_from,
                    "Smallest sensor count of the ablation (default: 3 for md, all sensors otherwise)");
    sub->add_option("--runs", a->runs, "Input draws per usability simulation")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    sub->add_option("--repeats", a->repeats, "Cross-validation repeats")->capture_default_str()->check(CLI::PositiveNumber);
    sub->add_option("--curve-repeats", a->curve_repeats, "Learning-curve repeats")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    sub->add_option("--curve-max", a->curve_max, "Deauthentication curve horizon, seconds")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    sub->callback([&g, a] { evaluate_cmd(g, *a); });
  }
  {
    auto a = std::make_shared<AnalyzeArgs>();
    auto* sub = app.add_subcommand("analyze", "Feature correlations, RMI ranking and per-stream importance");
    sub->add_option("--trace", a->trace, "Trace CSV")->required()->check(CLI::ExistingFile);
    sub->add_option("--truth", a->truth, "Ground-truth CSV")->required()->check(CLI::ExistingFile);
    sub->add_option("--plan", a->plan, "Floor plan file (default: built-in office)")->check(CLI::ExistingFile);
    sub->add_option("--bins", a->ranking.bins, "RMI histogram bins")->capture_default_str()->check(CLI::PositiveNumber);
    sub->add_option("--min-rmi", a->ranking.min_rmi, "Drop features with lower RMI")->capture_default_str();
    sub->add_option("--max-correlation", a->ranking.max_abs_correlation,
                    "Drop features more correlated than this with a kept one")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 1.0));
    sub->callback([&g, a] { analyze_cmd(g, *a); });
  }
}

}  // namespace rfdeauth::cli
