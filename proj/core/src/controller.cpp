#include "rfdeauth/controller.hpp"

#include <algorithm>
#include <istream>
#include <ostream>

#include "rfdeauth/error.hpp"
#include "rfdeauth/structured_text.hpp"

namespace rfdeauth {

const char* to_string(Action a) {
  switch (a) {
    case Action::AlertOn: return "AlertOn";
    case Action::ScreenSaverOn: return "ScreenSaverOn";
    case Action::Deauthenticate: return "Deauthenticate";
    case Action::Cancel: return "Cancel";
    case Action::TimeoutDeauth: return "TimeoutDeauth";
  }
  return "?";
}

Action parse_action(const std::string& text) {
  for (auto a : {Action::AlertOn, Action::ScreenSaverOn, Action::Deauthenticate, Action::Cancel,
                 Action::TimeoutDeauth}) {
    if (text == to_string(a)) return a;
  }
  throw InputError("unknown action '" + text + "'");
}

std::optional<int> apply_rule1(Label c, const std::set<int>& idle) {
  if (c.is_entry()) return std::nullopt;
  if (idle.contains(c.index)) return c.index;
  return std::nullopt;
}

std::vector<int> apply_rule2(const std::set<int>& idle_1s, const std::map<int, Status>& status) {
  std::vector<int> out;
  for (int w : idle_1s) {
    const auto it = status.find(w);
    if (it != status.end() && it->second == Status::Authenticated) out.push_back(w);
  }
  return out;
}

Controller::Controller(const Config& config, std::vector<int> workstations, WindowClassifier classifier)
    : config_(config),
      n_delta_(config.ticks(config.t_delta)),
      n_id_(config.ticks(config.t_id)),
      n_ss_(config.ticks(config.t_ss)),
      n_timeout_(config.ticks(config.T)),
      n_rule2_(config.ticks(1.0)),
      classifier_(std::move(classifier)),
      tracker_(workstations),
      windows_(config.coalesce_gap) {
  for (int w : tracker_.workstations()) status_[w] = Status::Authenticated;
}

void Controller::emit(Tick t, int w, Action a) { log_.push_back({t, w, a}); }

void Controller::input(int w, Tick t) {
  tracker_.record(w, t);
  auto& s = status_.at(w);
  if (s == Status::Alert || s == Status::ScreenSaver) {
    emit(t, w, Action::Cancel);
    s = Status::Authenticated;
  } else if (s == Status::Deauthenticated) {
    // The user logged back in; re-authentication itself is not modelled.
    s = Status::Authenticated;
  }
}

void Controller::step(Tick t, Decision decision) {
  windows_.push(t, decision);
  const auto& open = windows_.current();

  if (mode_ == Mode::Quiet) {
    if (open && decision == Decision::Anomalous && t - open->t1 >= n_delta_) {
      const Label c = classifier_(open->t1);
      if (const auto w = apply_rule1(c, tracker_.idle_set(t, n_delta_))) {
        auto& s = status_.at(*w);
        if (s != Status::Deauthenticated) {
          emit(t, *w, Action::Deauthenticate);
          s = Status::Deauthenticated;
        }
      }
      mode_ = Mode::Noisy;
    }
  } else if (open) {
    for (int w : apply_rule2(tracker_.idle_set(t, n_rule2_), status_)) {
      emit(t, w, Action::AlertOn);
      status_[w] = Status::Alert;
    }
  } else {
    mode_ = Mode::Quiet;
  }

  for (auto& [w, s] : status_) {
    const Tick idle = t - tracker_.last_input(w);
    if (s == Status::Alert && idle >= n_id_) {
      emit(t, w, Action::ScreenSaverOn);
      s = Status::ScreenSaver;
      ss_since_[w] = t;
    }
    if (s == Status::ScreenSaver && idle >= n_id_ + n_ss_ && t - ss_since_[w] >= n_ss_) {
      emit(t, w, Action::Deauthenticate);
      s = Status::Deauthenticated;
    }
    if (s != Status::Deauthenticated && idle >= n_timeout_) {
      emit(t, w, Action::TimeoutDeauth);
      s = Status::Deauthenticated;
    }
  }
}

ActionLog replay(const Config& config, std::span<const int> workstations, std::span<const MdTick> decisions,
                 const InputTrace& inputs, const WindowClassifier& classifier, const ReplayOptions& options) {
  Controller ctl(config, {workstations.begin(), workstations.end()}, classifier);
  // Merge every workstation's input ticks into one time-ordered list.
  std::vector<std::pair<Tick, int>> events;
  for (const auto& [w, ticks] : inputs.inputs) {
    if (std::find(workstations.begin(), workstations.end(), w) == workstations.end()) {
      throw ValidationError("input trace mentions unknown workstation w" + std::to_string(w));
    }
    for (Tick t : ticks) events.emplace_back(t, w);
  }
  std::sort(events.begin(), events.end());
  std::map<int, Tick> dismiss_at;
  std::size_t next = 0;
  std::size_t seen_actions = 0;
  const auto length = static_cast<Tick>(decisions.size());
  for (Tick t = 0; t < length; ++t) {
    std::set<int> typed;
    while (next < events.size() && events[next].first == t) typed.insert(events[next++].second);
    for (auto it = dismiss_at.begin(); it != dismiss_at.end();) {
      if (it->second == t) {
        if (ctl.status(it->first) == Status::ScreenSaver && options.seated && options.seated(it->first, t)) {
          typed.insert(it->first);
        }
        it = dismiss_at.erase(it);
      } else {
        ++it;
      }
    }
    for (int w : typed) ctl.input(w, t);
    ctl.step(t, decisions[static_cast<std::size_t>(t)].decision);
    if (options.dismiss_after) {
      const auto& log = ctl.log();
      for (; seen_actions < log.size(); ++seen_actions) {
        if (log[seen_actions].action == Action::ScreenSaverOn) {
          dismiss_at[log[seen_actions].workstation] = t + std::max<Tick>(1, *options.dismiss_after);
        }
      }
    }
  }
  return ctl.log();
}

WindowClassifier model_classifier(const RssiTrace& trace, std::span<const std::size_t> streams,
                                  const ClassifierModel& model, const Config& config) {
  std::vector<std::size_t> selected(streams.begin(), streams.end());
  if (selected.size() * kFeaturesPerStream != model.dimension()) {
    throw ValidationError("model expects " + std::to_string(model.dimension()) + " features but the trace provides " +
                          std::to_string(selected.size() * kFeaturesPerStream));
  }
  return [&trace, &model, config, selected](Tick t1) {
    return classify(model, extract_features(trace, selected, t1, config).features);
  };
}

void write_actions(std::ostream& out, const ActionLog& log, double sample_rate_hz) {
  out << "t,workstation,action\n";
  for (const auto& r : log) {
    out << format_time(r.t, sample_rate_hz) << ",w" << r.workstation << ',' << to_string(r.action) << '\n';
  }
}

ActionLog read_actions(std::istream& in, double sample_rate_hz, const std::string& source) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != "t,workstation,action") {
    throw InputError(source + ":1: expected header 't,workstation,action'");
  }
  ActionLog log;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto f = split_list(line);
    const auto where = source + ":" + std::to_string(line_no);
    if (f.size() != 3) throw InputError(where + ": expected 3 fields");
    try {
      log.push_back({parse_time(f[0], sample_rate_hz), parse_label(f[1]).index, parse_action(f[2])});
    } catch (const InputError& e) {
      throw InputError(where + ": " + e.what());
    }
  }
  return log;
}

}  // namespace rfdeauth
