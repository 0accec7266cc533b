#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "rfdeauth/config.hpp"
#include "rfdeauth/trace.hpp"
#include "rfdeauth/types.hpp"

namespace rfdeauth {

struct Sensor {
  int id{0};
  Point pos;
};

struct Workstation {
  int label{1};  // w_i, i >= 1; user i is seated at w_i
  Point pos;
};

// Channel model. Baseline follows log-distance path loss; a person obstructs a
// link with a Gaussian-of-distance mask around the link's line of sight.
struct ChannelParams {
  double ref_rssi_dbm{-40.0};  // at 1 m
  double path_loss_exponent{2.0};
  double max_atten_db{10.0};
  double body_radius_m{0.4};     // lambda of the LoS mask
  double seated_fraction{0.5};   // static obstruction of a seated person, relative to max_atten
  double fidget_amplitude_m{0.3};
  // Optional body-scattered path: a moving person perturbs every link by
  // 20 log10|1 + a exp(j 2 pi excess / wavelength)| with
  // a = scatter_gain * |tx-rx| / (|tx-p| |p-rx|). 0 disables it.
  double scatter_gain{0.0};
  double wavelength_m{0.125};
};

struct FloorPlan {
  double width{0.0};
  double depth{0.0};
  std::vector<Sensor> sensors;
  std::vector<Workstation> workstations;
  Point door;
  double walk_speed{1.4};
  double stand_up_s{0.0};        // departure: standing up before walking
  double stand_up_offset_m{0.3};  // distance covered towards the door while standing up
  double door_pause_s{0.0};      // entry: closing the door before walking in
  ChannelParams channel;

  const Workstation& workstation(int label) const;
  std::vector<int> sensor_ids() const;
  std::vector<int> workstation_labels() const;
  // Depart-to-door time (stand-up plus walk), seconds.
  double walk_duration(int label) const;
  // Door-to-seat time after Enter (door pause plus walk), seconds.
  double entry_duration(int label) const;
};

// Ticks from Depart until the person reaches the door, and from Enter until
// the person is seated again, on a grid of `sample_rate_hz`.
Tick departure_ticks(const FloorPlan& plan, int label, double sample_rate_hz);
Tick entry_ticks(const FloorPlan& plan, int label, double sample_rate_hz);

// Throws ValidationError on positions outside the room, duplicate ids/labels,
// w_0 used as a workstation, or non-positive speed.
void validate(const FloorPlan& plan);
FloorPlan parse_plan(const std::string& text, const std::string& source = "<string>");
FloorPlan load_plan(const std::filesystem::path& path);
std::string serialize_plan(const FloorPlan& plan);

enum class EventKind { Depart, Enter, Exit, Fidget };

const char* to_string(EventKind kind);

// `user` identifies the person by the workstation they occupy (user i <-> w_i).
struct ScriptEvent {
  double time{0.0};
  EventKind kind{EventKind::Depart};
  int user{1};
  double duration{0.0};  // Fidget only: seated micro-movement length, seconds

  friend bool operator==(const ScriptEvent&, const ScriptEvent&) = default;
};

// A user whose first event is Enter starts outside the office; everyone else
// starts seated.
struct MovementScript {
  double duration{0.0};  // trace length, seconds
  std::vector<ScriptEvent> events;
};

MovementScript parse_script(const std::string& text, const std::string& source = "<string>");
MovementScript load_script(const std::filesystem::path& path);
std::string serialize_script(const MovementScript& script);

struct TruthEvent {
  Tick tick{0};
  Label label;

  friend bool operator==(const TruthEvent&, const TruthEvent&) = default;
};

struct GroundTruth {
  double sample_rate_hz{4.0};
  Tick length{0};  // trace length, used to clip true windows
  std::vector<TruthEvent> events;

  // U_t = [t - delta, t + delta] clipped to the trace, in ticks (inclusive).
  std::pair<Tick, Tick> true_window(const TruthEvent& e, double delta_seconds) const;
};

void write_truth(std::ostream& out, const GroundTruth& truth);
void write_truth(const std::filesystem::path& path, const GroundTruth& truth);
GroundTruth read_truth(std::istream& in, double sample_rate_hz, Tick length, const std::string& source = "<stream>");
GroundTruth read_truth(const std::filesystem::path& path, double sample_rate_hz, Tick length);

// max_atten * exp(-(dist / lambda)^2), dist = person-to-segment distance.
double attenuation(Point tx, Point rx, Point person, double max_atten_db, double body_radius_m);
// Gain change in dB (may be positive) from the body-scattered path.
double scattering(Point tx, Point rx, Point person, double scatter_gain, double wavelength_m);
double point_segment_distance(Point p, Point a, Point b);
double baseline_rssi(Point tx, Point rx, const ChannelParams& channel);

struct SimulationResult {
  RssiTrace trace;
  GroundTruth truth;
};

// Deterministic in (plan, script, noise_sigma, seed). Throws ValidationError
// on inconsistent scripts (unknown workstation, Depart while away, ...).
SimulationResult generate_trace(const FloorPlan& plan, const MovementScript& script, double noise_sigma,
                                std::uint64_t seed, double sample_rate_hz = 4.0);

// Per-user movement timeline derived from a validated script.
struct AwayInterval {
  Tick begin{0};  // first tick the user is not at the seat
  Tick end{0};    // first tick the user is seated again (or trace end)
};

struct OfficeExit {
  int user{1};
  Tick depart{0};
  Tick exit{0};
};

struct Occupancy {
  std::vector<int> users;                         // workstation labels, ascending
  std::vector<std::vector<AwayInterval>> away;    // parallel to users
  std::vector<OfficeExit> exits;                  // one per Exit event, in time order

  bool seated(int user, Tick t) const;
};

Occupancy occupancy(const FloorPlan& plan, const MovementScript& script, double sample_rate_hz);

}  // namespace rfdeauth
