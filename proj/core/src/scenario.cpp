#include "rfdeauth/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "rfdeauth/error.hpp"

namespace rfdeauth {

FloorPlan reference_plan() {
  FloorPlan plan;
  plan.width = 8.0;
  plan.depth = 6.0;
  plan.door = {7.5, 0.0};
  plan.walk_speed = 1.4;
  plan.stand_up_s = 1.0;
  plan.door_pause_s = 1.0;
  plan.channel.scatter_gain = 0.3;
  plan.sensors = {{1, {0.0, 1.0}}, {2, {0.0, 3.0}}, {3, {0.0, 5.0}}, {4, {2.5, 6.0}}, {5, {5.5, 6.0}},
                  {6, {8.0, 5.0}}, {7, {8.0, 2.5}}, {8, {5.0, 0.0}}, {9, {2.5, 0.0}}};
  plan.workstations = {{1, {4.0, 1.5}}, {2, {3.0, 4.0}}, {3, {6.0, 4.5}}};
  return plan;
}

Config reference_config() {
  Config c;
  c.d = 1.5;
  return c;
}

MovementScript reference_script(const FloorPlan& plan, const ScenarioOptions& o, double rate) {
  validate(plan);
  if (o.departures < 0) throw ValidationError("departures must be >= 0");
  if (!(o.min_gap > 0.0 && o.max_gap >= o.min_gap)) throw ValidationError("invalid gap range");
  std::mt19937_64 rng(o.seed);
  std::uniform_real_distribution<double> gap(o.min_gap, o.max_gap);
  std::uniform_real_distribution<double> fidget_len(o.fidget_min, o.fidget_max);
  const auto users = plan.workstation_labels();
  std::uniform_int_distribution<std::size_t> pick(0, users.size() - 1);

  const auto on_grid = [rate](double s) { return std::round(s * rate) / rate; };
  const auto leave = [&](int user) { return static_cast<double>(departure_ticks(plan, user, rate)) / rate; };
  const auto arrive = [&](int user) { return static_cast<double>(entry_ticks(plan, user, rate)) / rate; };

  MovementScript script;
  // Sprinkles fidgets of seated users (all but `away`) over [from, to).
  const auto fidgets = [&](double from, double to, int away) {
    if (o.fidget_every <= 0.0 || (away != 0 && users.size() < 2)) return;
    std::exponential_distribution<double> spacing(1.0 / o.fidget_every);
    double t = from + spacing(rng);
    while (true) {
      const double len = on_grid(fidget_len(rng));
      const double start = on_grid(t);
      if (start + len + o.margin > to) break;
      int user = users[pick(rng)];
      while (user == away) user = users[pick(rng)];
      if (len > 0.0) script.events.push_back({start, EventKind::Fidget, user, len});
      t = start + len + o.margin + spacing(rng);
    }
  };

  double t = on_grid(o.first_event);
  double quiet_from = std::min(t, 120.0 + o.margin);
  for (int i = 0; i < o.departures; ++i) {
    const int user = users[pick(rng)];
    fidgets(quiet_from, t - o.margin, 0);
    const double exit = t + leave(user) + on_grid(o.door_time);
    script.events.push_back({t, EventKind::Depart, user, 0.0});
    script.events.push_back({exit, EventKind::Exit, user, 0.0});
    const double enter = on_grid(exit + gap(rng));
    fidgets(exit + o.margin, enter - o.margin, user);
    script.events.push_back({enter, EventKind::Enter, user, 0.0});
    const double seated = enter + arrive(user);
    quiet_from = seated + o.margin;
    t = on_grid(seated + gap(rng));
  }
  script.duration = o.departures > 0 ? quiet_from - o.margin + o.tail : o.first_event + o.tail;
  std::stable_sort(script.events.begin(), script.events.end(),
                   [](const auto& a, const auto& b) { return a.time < b.time; });
  return script;
}

}  // namespace rfdeauth
