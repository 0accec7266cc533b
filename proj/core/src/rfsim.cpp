#include "rfdeauth/rfsim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "rfdeauth/error.hpp"
#include "rfdeauth/structured_text.hpp"

namespace rfdeauth {

// ---------------------------------------------------------------------------
// Floor plan

const Workstation& FloorPlan::workstation(int label) const {
  for (const auto& w : workstations) {
    if (w.label == label) return w;
  }
  throw ValidationError("unknown workstation w" + std::to_string(label));
}

std::vector<int> FloorPlan::sensor_ids() const {
  std::vector<int> ids;
  for (const auto& s : sensors) ids.push_back(s.id);
  return ids;
}

std::vector<int> FloorPlan::workstation_labels() const {
  std::vector<int> labels;
  for (const auto& w : workstations) labels.push_back(w.label);
  std::sort(labels.begin(), labels.end());
  return labels;
}

double FloorPlan::walk_duration(int label) const {
  const Point seat = workstation(label).pos;
  if (!(stand_up_s > 0.0)) return distance(seat, door) / walk_speed;
  const double dist = distance(seat, door);
  return stand_up_s + (dist - std::min(stand_up_offset_m, 0.5 * dist)) / walk_speed;
}

double FloorPlan::entry_duration(int label) const {
  return std::max(door_pause_s, 0.0) + distance(workstation(label).pos, door) / walk_speed;
}

Tick departure_ticks(const FloorPlan& plan, int label, double sample_rate_hz) {
  const auto up = [&](double s) { return static_cast<Tick>(std::ceil(s * sample_rate_hz - 1e-9)); };
  const Point seat = plan.workstation(label).pos;
  if (!(plan.stand_up_s > 0.0)) return up(distance(seat, plan.door) / plan.walk_speed);
  const double dist = distance(seat, plan.door);
  return up(plan.stand_up_s) + up((dist - std::min(plan.stand_up_offset_m, 0.5 * dist)) / plan.walk_speed);
}

Tick entry_ticks(const FloorPlan& plan, int label, double sample_rate_hz) {
  const auto up = [&](double s) { return static_cast<Tick>(std::ceil(s * sample_rate_hz - 1e-9)); };
  const Tick pause = plan.door_pause_s > 0.0 ? up(plan.door_pause_s) : 0;
  return pause + up(distance(plan.workstation(label).pos, plan.door) / plan.walk_speed);
}

namespace {

bool inside(const FloorPlan& plan, Point p) {
  return p.x >= 0.0 && p.x <= plan.width && p.y >= 0.0 && p.y <= plan.depth;
}

std::string fmt_point(Point p) { return "(" + format_double(p.x) + ", " + format_double(p.y) + ")"; }

}  // namespace

void validate(const FloorPlan& plan) {
  if (!(plan.width > 0.0) || !(plan.depth > 0.0)) throw ValidationError("room width and depth must be > 0");
  if (!(plan.walk_speed > 0.0)) throw ValidationError("walk_speed must be > 0");
  if (plan.sensors.size() < 2) throw ValidationError("at least two sensors are required");
  if (plan.workstations.empty()) throw ValidationError("at least one workstation is required");
  if (!inside(plan, plan.door)) throw ValidationError("door " + fmt_point(plan.door) + " is outside the room");

  std::set<int> ids;
  for (const auto& s : plan.sensors) {
    if (s.id < 1) throw ValidationError("sensor ids must be >= 1");
    if (!ids.insert(s.id).second) throw ValidationError("duplicate sensor id d" + std::to_string(s.id));
    if (!inside(plan, s.pos)) {
      throw ValidationError("sensor d" + std::to_string(s.id) + " " + fmt_point(s.pos) + " is outside the room");
    }
  }
  std::set<int> labels;
  for (const auto& w : plan.workstations) {
    if (w.label < 1) throw ValidationError("workstation label w0 is reserved for office entries");
    if (!labels.insert(w.label).second) throw ValidationError("duplicate workstation w" + std::to_string(w.label));
    if (!inside(plan, w.pos)) {
      throw ValidationError("workstation w" + std::to_string(w.label) + " " + fmt_point(w.pos) +
                            " is outside the room");
    }
    if (distance(w.pos, plan.door) <= 0.0) {
      throw ValidationError("workstation w" + std::to_string(w.label) + " coincides with the door");
    }
  }
  const auto& ch = plan.channel;
  if (!(ch.max_atten_db >= 0.0)) throw ValidationError("max_atten_db must be >= 0");
  if (!(ch.body_radius_m > 0.0)) throw ValidationError("body_radius_m must be > 0");
  if (!(ch.seated_fraction >= 0.0 && ch.seated_fraction <= 1.0)) {
    throw ValidationError("seated_fraction must lie in [0, 1]");
  }
  if (!(ch.fidget_amplitude_m >= 0.0)) throw ValidationError("fidget_amplitude_m must be >= 0");
  if (!(ch.scatter_gain >= 0.0)) throw ValidationError("scatter_gain must be >= 0");
  if (!(ch.wavelength_m > 0.0)) throw ValidationError("wavelength_m must be > 0");
  if (!(plan.stand_up_s >= 0.0) || !(plan.door_pause_s >= 0.0) || !(plan.stand_up_offset_m >= 0.0)) {
    throw ValidationError("stand_up_s, stand_up_offset_m and door_pause_s must be >= 0");
  }
}

namespace {

Point parse_point(const TextDocument& doc, const TextEntry& e) {
  const auto parts = split_list(e.value);
  if (parts.size() != 2) {
    throw InputError(doc.source + ":" + std::to_string(e.line) + ": key '" + e.key + "': expected 'x, y'");
  }
  return {parse_double(doc, TextEntry{e.key, parts[0], e.line}), parse_double(doc, TextEntry{e.key, parts[1], e.line})};
}

[[noreturn]] void unknown_key(const TextDocument& doc, const TextEntry& e) {
  throw InputError(doc.source + ":" + std::to_string(e.line) + ": unknown key '" + e.key + "'");
}

}  // namespace

FloorPlan parse_plan(const std::string& text, const std::string& source) {
  const auto doc = parse_structured_text(text, source);
  FloorPlan plan;
  bool has_door = false;
  for (const auto& e : doc.root().entries) {
    if (e.key == "width") {
      plan.width = parse_double(doc, e);
    } else if (e.key == "depth") {
      plan.depth = parse_double(doc, e);
    } else if (e.key == "walk_speed") {
      plan.walk_speed = parse_double(doc, e);
    } else if (e.key == "stand_up_s") {
      plan.stand_up_s = parse_double(doc, e);
    } else if (e.key == "stand_up_offset_m") {
      plan.stand_up_offset_m = parse_double(doc, e);
    } else if (e.key == "door_pause_s") {
      plan.door_pause_s = parse_double(doc, e);
    } else if (e.key == "door") {
      plan.door = parse_point(doc, e);
      has_door = true;
    } else {
      unknown_key(doc, e);
    }
  }
  if (!has_door) throw InputError(source + ": missing key 'door'");

  for (std::size_t i = 1; i < doc.sections.size(); ++i) {
    const auto& sec = doc.sections[i];
    if (sec.name == "sensors") {
      for (const auto& e : sec.entries) {
        try {
          plan.sensors.push_back({parse_device_id(e.key), parse_point(doc, e)});
        } catch (const InputError& err) {
          throw InputError(source + ":" + std::to_string(e.line) + ": " + err.what());
        }
      }
    } else if (sec.name == "workstations") {
      for (const auto& e : sec.entries) {
        Label label;
        try {
          label = parse_label(e.key);
        } catch (const InputError& err) {
          throw InputError(source + ":" + std::to_string(e.line) + ": " + err.what());
        }
        plan.workstations.push_back({label.index, parse_point(doc, e)});
      }
    } else if (sec.name == "channel") {
      auto& ch = plan.channel;
      for (const auto& e : sec.entries) {
        const double v = parse_double(doc, e);
        if (e.key == "ref_rssi_dbm") ch.ref_rssi_dbm = v;
        else if (e.key == "path_loss_exponent") ch.path_loss_exponent = v;
        else if (e.key == "max_atten_db") ch.max_atten_db = v;
        else if (e.key == "body_radius_m") ch.body_radius_m = v;
        else if (e.key == "seated_fraction") ch.seated_fraction = v;
        else if (e.key == "fidget_amplitude_m") ch.fidget_amplitude_m = v;
        else if (e.key == "scatter_gain") ch.scatter_gain = v;
        else if (e.key == "wavelength_m") ch.wavelength_m = v;
        else unknown_key(doc, e);
      }
    } else {
      throw InputError(source + ":" + std::to_string(sec.line) + ": unknown section [" + sec.name + "]");
    }
  }
  validate(plan);
  return plan;
}

FloorPlan load_plan(const std::filesystem::path& path) { return parse_plan(read_file(path), path.string()); }

std::string serialize_plan(const FloorPlan& plan) {
  std::ostringstream out;
  auto pt = [](Point p) { return format_double(p.x) + ", " + format_double(p.y); };
  out << "width = " << format_double(plan.width) << '\n'
      << "depth = " << format_double(plan.depth) << '\n'
      << "walk_speed = " << format_double(plan.walk_speed) << '\n'
      << "stand_up_s = " << format_double(plan.stand_up_s) << '\n'
      << "stand_up_offset_m = " << format_double(plan.stand_up_offset_m) << '\n'
      << "door_pause_s = " << format_double(plan.door_pause_s) << '\n'
      << "door = " << pt(plan.door) << "\n\n[sensors]\n";
  for (const auto& s : plan.sensors) out << 'd' << s.id << " = " << pt(s.pos) << '\n';
  out << "\n[workstations]\n";
  for (const auto& w : plan.workstations) out << 'w' << w.label << " = " << pt(w.pos) << '\n';
  const auto& ch = plan.channel;
  out << "\n[channel]\n"
      << "ref_rssi_dbm = " << format_double(ch.ref_rssi_dbm) << '\n'
      << "path_loss_exponent = " << format_double(ch.path_loss_exponent) << '\n'
      << "max_atten_db = " << format_double(ch.max_atten_db) << '\n'
      << "body_radius_m = " << format_double(ch.body_radius_m) << '\n'
      << "seated_fraction = " << format_double(ch.seated_fraction) << '\n'
      << "fidget_amplitude_m = " << format_double(ch.fidget_amplitude_m) << '\n'
      << "scatter_gain = " << format_double(ch.scatter_gain) << '\n'
      << "wavelength_m = " << format_double(ch.wavelength_m) << '\n';
  return out.str();
}

// ---------------------------------------------------------------------------
// Movement script

const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::Depart: return "depart";
    case EventKind::Enter: return "enter";
    case EventKind::Exit: return "exit";
    case EventKind::Fidget: return "fidget";
  }
  return "?";
}

MovementScript parse_script(const std::string& text, const std::string& source) {
  const auto doc = parse_structured_text(text, source);
  MovementScript script;
  bool has_duration = false;
  for (const auto& e : doc.root().entries) {
    if (e.key == "duration") {
      script.duration = parse_double(doc, e);
      has_duration = true;
    } else {
      unknown_key(doc, e);
    }
  }
  if (!has_duration) throw InputError(source + ": missing key 'duration'");

  for (std::size_t i = 1; i < doc.sections.size(); ++i) {
    const auto& sec = doc.sections[i];
    if (sec.name != "events") {
      throw InputError(source + ":" + std::to_string(sec.line) + ": unknown section [" + sec.name + "]");
    }
    for (const auto& e : sec.entries) {
      const auto where = source + ":" + std::to_string(e.line);
      if (e.key != "event") unknown_key(doc, e);
      const auto parts = split_list(e.value);
      if (parts.size() < 3) throw InputError(where + ": expected 'time, kind, w<i>[, duration]'");
      ScriptEvent ev;
      ev.time = parse_double(doc, TextEntry{e.key, parts[0], e.line});
      const auto& kind = parts[1];
      if (kind == "depart") ev.kind = EventKind::Depart;
      else if (kind == "enter") ev.kind = EventKind::Enter;
      else if (kind == "exit") ev.kind = EventKind::Exit;
      else if (kind == "fidget") ev.kind = EventKind::Fidget;
      else throw InputError(where + ": unknown event kind '" + kind + "'");
      try {
        ev.user = parse_label(parts[2]).index;
      } catch (const InputError& err) {
        throw InputError(where + ": " + err.what());
      }
      const std::size_t expected = ev.kind == EventKind::Fidget ? 4 : 3;
      if (parts.size() != expected) {
        throw InputError(where + ": '" + kind + "' takes " + std::to_string(expected) + " fields");
      }
      if (ev.kind == EventKind::Fidget) ev.duration = parse_double(doc, TextEntry{e.key, parts[3], e.line});
      script.events.push_back(ev);
    }
  }
  return script;
}

MovementScript load_script(const std::filesystem::path& path) { return parse_script(read_file(path), path.string()); }

std::string serialize_script(const MovementScript& script) {
  std::ostringstream out;
  out << "duration = " << format_double(script.duration) << "\n\n[events]\n";
  for (const auto& e : script.events) {
    out << "event = " << format_double(e.time) << ", " << to_string(e.kind) << ", w" << e.user;
    if (e.kind == EventKind::Fidget) out << ", " << format_double(e.duration);
    out << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Ground truth

std::pair<Tick, Tick> GroundTruth::true_window(const TruthEvent& e, double delta_seconds) const {
  const auto half = static_cast<Tick>(std::llround(delta_seconds * sample_rate_hz));
  const Tick last = std::max<Tick>(length - 1, 0);
  return {std::clamp<Tick>(e.tick - half, 0, last), std::clamp<Tick>(e.tick + half, 0, last)};
}

void write_truth(std::ostream& out, const GroundTruth& truth) {
  out << "t,label\n";
  for (const auto& e : truth.events) out << format_time(e.tick, truth.sample_rate_hz) << ',' << e.label.str() << '\n';
}

void write_truth(const std::filesystem::path& path, const GroundTruth& truth) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  write_truth(out, truth);
}

GroundTruth read_truth(std::istream& in, double sample_rate_hz, Tick length, const std::string& source) {
  GroundTruth truth;
  truth.sample_rate_hz = sample_rate_hz;
  truth.length = length;
  std::string line;
  if (!std::getline(in, line) || trim(line) != "t,label") throw InputError(source + ":1: expected header 't,label'");
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_list(line);
    const auto where = source + ":" + std::to_string(line_no);
    if (fields.size() != 2) throw InputError(where + ": expected 2 fields");
    try {
      truth.events.push_back({parse_time(fields[0], sample_rate_hz), parse_label(fields[1])});
    } catch (const InputError& e) {
      throw InputError(where + ": " + e.what());
    }
  }
  return truth;
}

GroundTruth read_truth(const std::filesystem::path& path, double sample_rate_hz, Tick length) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  return read_truth(in, sample_rate_hz, length, path.string());
}

// ---------------------------------------------------------------------------
// Channel

double point_segment_distance(Point p, Point a, Point b) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  if (len2 == 0.0) return distance(p, a);
  const double u = std::clamp(((p.x - a.x) * dx + (p.y - a.y) * dy) / len2, 0.0, 1.0);
  return distance(p, Point{a.x + u * dx, a.y + u * dy});
}

double attenuation(Point tx, Point rx, Point person, double max_atten_db, double body_radius_m) {
  const double r = point_segment_distance(person, tx, rx) / body_radius_m;
  return max_atten_db * std::exp(-r * r);
}

double scattering(Point tx, Point rx, Point person, double scatter_gain, double wavelength_m) {
  if (scatter_gain <= 0.0) return 0.0;
  const double d1 = std::max(distance(tx, person), 0.3);
  const double d2 = std::max(distance(person, rx), 0.3);
  const double d0 = distance(tx, rx);
  const double a = std::min(0.5, scatter_gain * d0 / (d1 * d2));
  const double phi = 2.0 * std::numbers::pi * (d1 + d2 - d0) / wavelength_m;
  const double re = 1.0 + a * std::cos(phi);
  const double im = a * std::sin(phi);
  return 10.0 * std::log10(re * re + im * im);
}

double baseline_rssi(Point tx, Point rx, const ChannelParams& channel) {
  const double d = std::max(distance(tx, rx), 0.1);
  return channel.ref_rssi_dbm - 10.0 * channel.path_loss_exponent * std::log10(d);
}

// ---------------------------------------------------------------------------
// Per-user timeline

namespace {

enum class Phase { Seated, Fidget, Move, Stand, Away };

struct Segment {
  Tick begin{0};
  Tick end{0};  // exclusive
  Phase phase{Phase::Seated};
  Point from;
  Point to;
  double length_s{0.0};  // movement or fidget duration, seconds
};

struct UserTimeline {
  int user{1};
  std::vector<Segment> segments;
  std::vector<AwayInterval> away;
};

Tick to_tick(double seconds, double rate) { return static_cast<Tick>(std::llround(seconds * rate)); }
Tick ceil_ticks(double seconds, double rate) { return static_cast<Tick>(std::ceil(seconds * rate - 1e-9)); }

// Where the stand-up motion ends: a short step from the seat towards the door.
Point stand_up_point(const FloorPlan& plan, Point seat) {
  if (!(plan.stand_up_s > 0.0)) return seat;
  const double dist = distance(seat, plan.door);
  const double step = std::min(plan.stand_up_offset_m, 0.5 * dist);
  return {seat.x + step * (plan.door.x - seat.x) / dist, seat.y + step * (plan.door.y - seat.y) / dist};
}

enum class Where { Seated, Leaving, AtDoor, Away, Entering };

// Builds contiguous segments over [0, length) and validates the script.
std::vector<UserTimeline> build_timelines(const FloorPlan& plan, const MovementScript& script, double rate,
                                          Tick length) {
  std::map<int, std::vector<ScriptEvent>> per_user;
  for (const auto& w : plan.workstations) per_user[w.label];
  for (const auto& e : script.events) {
    if (!per_user.contains(e.user)) {
      throw ValidationError("script references unknown workstation w" + std::to_string(e.user));
    }
    if (!(e.time >= 0.0) || !(e.time < script.duration)) {
      throw ValidationError("event at t=" + format_double(e.time) + " lies outside the trace duration");
    }
    per_user[e.user].push_back(e);
  }

  std::vector<UserTimeline> out;
  for (auto& [user, events] : per_user) {
    std::stable_sort(events.begin(), events.end(), [](const auto& a, const auto& b) { return a.time < b.time; });
    const Point seat = plan.workstation(user).pos;
    const Point up = stand_up_point(plan, seat);
    const Tick stand_ticks = plan.stand_up_s > 0.0 ? ceil_ticks(plan.stand_up_s, rate) : 0;
    const double out_walk_s = distance(up, plan.door) / plan.walk_speed;
    const double in_walk_s = distance(seat, plan.door) / plan.walk_speed;
    const Tick pause_ticks = plan.door_pause_s > 0.0 ? ceil_ticks(plan.door_pause_s, rate) : 0;

    UserTimeline tl{user, {}, {}};
    Where state = (!events.empty() && events.front().kind == EventKind::Enter) ? Where::Away : Where::Seated;
    if (state == Where::Away) tl.away.push_back({0, length});
    Tick cursor = 0;
    Tick busy_until = 0;  // end of the current movement or fidget
    const auto who = "w" + std::to_string(user);
    auto push = [&](Tick begin, Tick end, Phase phase, Point from, Point to, double len) {
      begin = std::min(begin, length);
      end = std::min(end, length);
      if (end > begin) tl.segments.push_back({begin, end, phase, from, to, len});
    };
    auto settle = [](Where w) { return w == Where::Leaving ? Where::AtDoor : w == Where::Entering ? Where::Seated : w; };
    auto rest = [&](Tick from, Tick to) {
      switch (state) {
        case Where::Seated: push(from, to, Phase::Seated, seat, seat, 0.0); break;
        case Where::AtDoor: push(from, to, Phase::Stand, plan.door, plan.door, 0.0); break;
        default: push(from, to, Phase::Away, {}, {}, 0.0); break;
      }
    };

    for (std::size_t i = 0; i < events.size(); ++i) {
      const auto& e = events[i];
      const Tick t = to_tick(e.time, rate);
      if (i > 0 && !(e.time > events[i - 1].time)) {
        throw ValidationError(who + ": event times must be strictly increasing (t=" + format_double(e.time) + ")");
      }
      if (t < busy_until) {
        throw ValidationError(who + ": event '" + to_string(e.kind) + "' at t=" + format_double(e.time) +
                              " starts before the previous movement ends");
      }
      state = settle(state);
      rest(cursor, t);
      cursor = t;

      switch (e.kind) {
        case EventKind::Depart: {
          if (state != Where::Seated) throw ValidationError(who + ": Depart while not seated at t=" + format_double(e.time));
          const Tick walk_ticks = ceil_ticks(out_walk_s, rate);
          push(t, t + stand_ticks, Phase::Move, seat, up, plan.stand_up_s);
          push(t + stand_ticks, t + stand_ticks + walk_ticks, Phase::Move, up, plan.door, out_walk_s);
          busy_until = cursor = t + stand_ticks + walk_ticks;
          // The departure tick itself still counts as seated: the last input may land on it.
          tl.away.push_back({t + 1, length});
          state = Where::Leaving;
          break;
        }
        case EventKind::Exit:
          if (state != Where::AtDoor) {
            throw ValidationError(who + ": Exit at t=" + format_double(e.time) + " without a completed Depart");
          }
          state = Where::Away;
          break;
        case EventKind::Enter: {
          if (state != Where::Away) throw ValidationError(who + ": Enter while inside at t=" + format_double(e.time));
          const Tick walk_ticks = ceil_ticks(in_walk_s, rate);
          push(t, t + pause_ticks, Phase::Stand, plan.door, plan.door, 0.0);
          push(t + pause_ticks, t + pause_ticks + walk_ticks, Phase::Move, plan.door, seat, in_walk_s);
          busy_until = cursor = t + pause_ticks + walk_ticks;
          if (!tl.away.empty()) tl.away.back().end = std::min(busy_until, length);
          state = Where::Entering;
          break;
        }
        case EventKind::Fidget: {
          if (state != Where::Seated) throw ValidationError(who + ": Fidget while not seated at t=" + format_double(e.time));
          if (!(e.duration > 0.0)) throw ValidationError(who + ": fidget duration must be > 0");
          const double a = plan.channel.fidget_amplitude_m;
          if (seat.x - a < 0.0 || seat.x + a > plan.width || seat.y - a < 0.0 || seat.y + a > plan.depth) {
            throw ValidationError(who + ": fidget moves the person outside the room bounds");
          }
          busy_until = t + std::max<Tick>(1, to_tick(e.duration, rate));
          push(t, busy_until, Phase::Fidget, seat, seat, e.duration);
          cursor = busy_until;
          break;
        }
      }
    }
    state = settle(state);
    rest(std::min(cursor, length), length);
    std::erase_if(tl.away, [](const AwayInterval& a) { return a.end <= a.begin; });
    out.push_back(std::move(tl));
  }
  return out;
}

struct BodyState {
  bool present{false};
  Point pos;
  double weight{1.0};  // fraction of max_atten
};

BodyState body_at(const Segment& seg, Tick t, double rate, const ChannelParams& ch) {
  const double tau = static_cast<double>(t - seg.begin) / rate;
  switch (seg.phase) {
    case Phase::Seated: return {true, seg.from, ch.seated_fraction};
    case Phase::Away: return {false, {}, 0.0};
    case Phase::Stand: return {true, seg.from, 1.0};
    case Phase::Move: {
      const double f = seg.length_s > 0.0 ? std::min(1.0, tau / seg.length_s) : 1.0;
      return {true, {seg.from.x + f * (seg.to.x - seg.from.x), seg.from.y + f * (seg.to.y - seg.from.y)}, 1.0};
    }
    case Phase::Fidget: {
      const double phase = tau / seg.length_s;
      const double r = ch.fidget_amplitude_m * std::sin(std::numbers::pi * phase);
      const double ang = 2.0 * std::numbers::pi * phase;
      return {true, {seg.from.x + r * std::cos(ang), seg.from.y + r * std::sin(ang)}, ch.seated_fraction};
    }
  }
  return {};
}

}  // namespace

SimulationResult generate_trace(const FloorPlan& plan, const MovementScript& script, double noise_sigma,
                                std::uint64_t seed, double sample_rate_hz) {
  validate(plan);
  if (!(noise_sigma >= 0.0)) throw ValidationError("noise_sigma must be >= 0");
  if (!(script.duration > 0.0)) throw ValidationError("script duration must be > 0");
  const double rate = sample_rate_hz;
  const Tick length = to_tick(script.duration, rate);
  const auto timelines = build_timelines(plan, script, rate, length);

  std::map<int, Point> where;
  for (const auto& s : plan.sensors) where[s.id] = s.pos;
  std::vector<StreamId> ids;
  for (const auto& [tx, ptx] : where) {
    for (const auto& [rx, prx] : where) {
      if (tx != rx) ids.push_back({tx, rx});
    }
  }
  RssiTrace trace(rate, ids, length);
  const auto& ch = plan.channel;

  std::vector<double> baseline(ids.size());
  for (std::size_t s = 0; s < ids.size(); ++s) baseline[s] = baseline_rssi(where[ids[s].tx], where[ids[s].rx], ch);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, noise_sigma > 0.0 ? noise_sigma : 1.0);

  std::vector<std::size_t> seg_cursor(timelines.size(), 0);
  std::vector<BodyState> bodies(timelines.size());
  for (Tick t = 0; t < length; ++t) {
    for (std::size_t u = 0; u < timelines.size(); ++u) {
      const auto& segs = timelines[u].segments;
      auto& c = seg_cursor[u];
      while (c < segs.size() && segs[c].end <= t) ++c;
      bodies[u] = c < segs.size() ? body_at(segs[c], t, rate, ch) : BodyState{};
    }
    for (std::size_t s = 0; s < ids.size(); ++s) {
      double v = baseline[s];
      for (const auto& body : bodies) {
        if (body.present && body.weight > 0.0) {
          const Point tx = where[ids[s].tx];
          const Point rx = where[ids[s].rx];
          v -= body.weight * attenuation(tx, rx, body.pos, ch.max_atten_db, ch.body_radius_m);
          v += body.weight * scattering(tx, rx, body.pos, ch.scatter_gain, ch.wavelength_m);
        }
      }
      if (noise_sigma > 0.0) v += noise(rng);
      trace.stream(s)[static_cast<std::size_t>(t)] = v;
    }
  }

  GroundTruth truth;
  truth.sample_rate_hz = rate;
  truth.length = length;
  for (const auto& e : script.events) {
    if (e.kind == EventKind::Depart) truth.events.push_back({to_tick(e.time, rate), Label{e.user}});
    if (e.kind == EventKind::Enter) truth.events.push_back({to_tick(e.time, rate), Label::entry()});
  }
  std::stable_sort(truth.events.begin(), truth.events.end(),
                   [](const auto& a, const auto& b) { return a.tick < b.tick; });
  return {std::move(trace), std::move(truth)};
}

// ---------------------------------------------------------------------------
// Occupancy

bool Occupancy::seated(int user, Tick t) const {
  const auto it = std::find(users.begin(), users.end(), user);
  if (it == users.end()) return false;
  for (const auto& a : away[static_cast<std::size_t>(it - users.begin())]) {
    if (t >= a.begin && t < a.end) return false;
  }
  return true;
}

Occupancy occupancy(const FloorPlan& plan, const MovementScript& script, double sample_rate_hz) {
  const Tick length = to_tick(script.duration, sample_rate_hz);
  const auto timelines = build_timelines(plan, script, sample_rate_hz, length);
  Occupancy occ;
  for (const auto& tl : timelines) {
    occ.users.push_back(tl.user);
    occ.away.push_back(tl.away);
  }

  std::map<int, Tick> last_depart;
  std::vector<ScriptEvent> sorted = script.events;
  std::stable_sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.time < b.time; });
  for (const auto& e : sorted) {
    const Tick t = to_tick(e.time, sample_rate_hz);
    if (e.kind == EventKind::Depart) last_depart[e.user] = t;
    if (e.kind == EventKind::Exit) occ.exits.push_back({e.user, last_depart[e.user], t});
  }
  return occ;
}

}  // namespace rfdeauth
