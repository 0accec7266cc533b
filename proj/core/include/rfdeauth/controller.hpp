#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "rfdeauth/config.hpp"
#include "rfdeauth/kma.hpp"
#include "rfdeauth/md.hpp"
#include "rfdeauth/re.hpp"

namespace rfdeauth {

enum class Mode { Quiet, Noisy };
enum class Status { Authenticated, Alert, ScreenSaver, Deauthenticated };
enum class Action { AlertOn, ScreenSaverOn, Deauthenticate, Cancel, TimeoutDeauth };

const char* to_string(Action a);
Action parse_action(const std::string& text);

struct ActionRecord {
  Tick t{0};
  int workstation{0};
  Action action{Action::AlertOn};

  friend bool operator==(const ActionRecord&, const ActionRecord&) = default;
};

using ActionLog = std::vector<ActionRecord>;

// Classifies the variation window starting at t1 (features over [t1, t1 + t_delta)).
using WindowClassifier = std::function<Label(Tick t1)>;

// Rule 1: w_0 -> nothing; c idle over the last t_delta -> deauthenticate c;
// otherwise the classification is contradicted by input and ignored.
std::optional<int> apply_rule1(Label c, const std::set<int>& idle);
// Rule 2: every workstation idle over the last second that is still
// Authenticated enters Alert.
std::vector<int> apply_rule2(const std::set<int>& idle_1s, const std::map<int, Status>& status);

class Controller {
 public:
  Controller(const Config& config, std::vector<int> workstations, WindowClassifier classifier);

  // Keyboard/mouse input on `workstation` at tick t. Must precede step(t).
  void input(int workstation, Tick t);
  // Advances to tick t with the MD decision for that tick.
  void step(Tick t, Decision decision);

  Mode mode() const { return mode_; }
  Status status(int workstation) const { return status_.at(workstation); }
  const std::map<int, Status>& statuses() const { return status_; }
  const IdleTracker& tracker() const { return tracker_; }
  const ActionLog& log() const { return log_; }
  std::size_t actions_emitted() const { return log_.size(); }

 private:
  void emit(Tick t, int w, Action a);

  Config config_;
  Tick n_delta_, n_id_, n_ss_, n_timeout_, n_rule2_;
  WindowClassifier classifier_;
  IdleTracker tracker_;
  WindowTracker windows_;
  Mode mode_{Mode::Quiet};
  std::map<int, Status> status_;
  std::map<int, Tick> ss_since_;
  ActionLog log_;
};

struct ReplayOptions {
  // When set, a seated user dismisses a screen saver with an input this many
  // ticks after it appears.
  std::optional<Tick> dismiss_after;
  std::function<bool(int workstation, Tick t)> seated;
};

// Replays a full run: inputs and MD decisions for ticks [0, decisions.size()).
ActionLog replay(const Config& config, std::span<const int> workstations, std::span<const MdTick> decisions,
                 const InputTrace& inputs, const WindowClassifier& classifier, const ReplayOptions& options = {});

// Classifier backed by a trained model over the given streams of `trace`.
WindowClassifier model_classifier(const RssiTrace& trace, std::span<const std::size_t> streams,
                                  const ClassifierModel& model, const Config& config);

// CSV `t,workstation,action`.
void write_actions(std::ostream& out, const ActionLog& log, double sample_rate_hz);
ActionLog read_actions(std::istream& in, double sample_rate_hz, const std::string& source = "<stream>");

}  // namespace rfdeauth
