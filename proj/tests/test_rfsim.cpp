#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rfdeauth/error.hpp"
#include "rfdeauth/rfsim.hpp"
#include "rfdeauth/scenario.hpp"

using namespace rfdeauth;

namespace {

// Two sensors on the line y = 1; w1 sits above it and walks straight down
// through it to the door at (4, 0).
FloorPlan line_plan() {
  return parse_plan(
      "width = 8\ndepth = 6\ndoor = 4, 0\nwalk_speed = 1.4\n"
      "[sensors]\nd1 = 0, 1\nd2 = 8, 1\n"
      "[workstations]\nw1 = 4, 3\n");
}

const double kRate = 4.0;

}  // namespace

TEST(Attenuation, OnSegmentIsMaximal) {
  EXPECT_DOUBLE_EQ(attenuation({0, 0}, {4, 0}, {2, 0}, 10.0, 0.4), 10.0);
}

TEST(Attenuation, VanishesFarAway) {
  EXPECT_NEAR(attenuation({0, 0}, {4, 0}, {2, 100}, 10.0, 0.4), 0.0, 1e-12);
}

TEST(Attenuation, OneLambdaAway) {
  EXPECT_NEAR(attenuation({0, 0}, {4, 0}, {2, 0.4}, 10.0, 0.4), 10.0 * std::exp(-1.0), 1e-12);
}

TEST(Attenuation, DistanceIsToTheSegmentNotTheLine) {
  EXPECT_DOUBLE_EQ(point_segment_distance({-3, 4}, {0, 0}, {4, 0}), 5.0);
  EXPECT_DOUBLE_EQ(point_segment_distance({2, -1.5}, {0, 0}, {4, 0}), 1.5);
}

TEST(Scattering, DisabledAtZeroGain) {
  EXPECT_EQ(scattering({0, 0}, {4, 0}, {2, 1}, 0.0, 0.125), 0.0);
}

TEST(Scattering, BoundedByReflectionAmplitude) {
  // a is capped at 0.5, so the term stays within 20 log10(1 +- 0.5).
  for (double y = 0.05; y < 3.0; y += 0.01) {
    const double v = scattering({0, 0}, {4, 0}, {2, y}, 5.0, 0.125);
    EXPECT_LE(v, 20.0 * std::log10(1.5) + 1e-9);
    EXPECT_GE(v, 20.0 * std::log10(0.5) - 1e-9);
  }
}

TEST(Simulator, EmptyScriptIsConstantBaseline) {
  auto plan = line_plan();
  plan.channel.seated_fraction = 0.0;  // the seated user is invisible to the links
  plan.channel.scatter_gain = 0.0;
  MovementScript script;
  script.duration = 10.0;
  const auto sim = generate_trace(plan, script, 0.0, 1, kRate);
  ASSERT_EQ(sim.trace.stream_count(), 2u);
  ASSERT_EQ(sim.trace.length(), 40);
  const double base = baseline_rssi({0, 1}, {8, 1}, plan.channel);
  EXPECT_DOUBLE_EQ(base, -40.0 - 20.0 * std::log10(8.0));
  for (std::size_t s = 0; s < 2; ++s) {
    for (double v : sim.trace.stream(s)) EXPECT_DOUBLE_EQ(v, base);
  }
  EXPECT_TRUE(sim.truth.events.empty());
}

TEST(Simulator, CrossingDepartureAttenuatesTheLink) {
  const auto plan = line_plan();
  const auto script = parse_script("duration = 120\n[events]\nevent = 100, depart, w1\nevent = 105, exit, w1\n");
  const auto sim = generate_trace(plan, script, 0.0, 1, kRate);
  const double base = baseline_rssi({0, 1}, {8, 1}, plan.channel);
  const auto s = sim.trace.stream(*sim.trace.index_of({1, 2}));
  // The walk covers 0.35 m per tick, so some tick lies within 0.175 m of the line.
  const double lowest = *std::min_element(s.begin() + 400, s.begin() + 420);
  EXPECT_LT(lowest, base - 10.0 * std::exp(-std::pow(0.175 / 0.4, 2)) + 1e-9);
  for (Tick t = 400; t < 420; ++t) EXPECT_LE(s[static_cast<std::size_t>(t)], base);
  // Out of the office: nothing left on the link.
  EXPECT_DOUBLE_EQ(s[440], base);
  ASSERT_EQ(sim.truth.events.size(), 1u);
  EXPECT_EQ(sim.truth.events[0].tick, 400);
  EXPECT_EQ(sim.truth.events[0].label, Label{1});
}

TEST(Simulator, SameSeedSameTrace) {
  const auto plan = reference_plan();
  ScenarioOptions o;
  o.departures = 2;
  o.min_gap = 30;
  o.max_gap = 40;
  const auto script = reference_script(plan, o, kRate);
  const auto a = generate_trace(plan, script, 0.5, 9, kRate);
  const auto b = generate_trace(plan, script, 0.5, 9, kRate);
  EXPECT_EQ(a.trace, b.trace);
  EXPECT_EQ(a.truth.events, b.truth.events);
  const auto c = generate_trace(plan, script, 0.5, 10, kRate);
  EXPECT_FALSE(a.trace == c.trace);
}

TEST(Simulator, RejectsInconsistentScripts) {
  const auto plan = line_plan();
  EXPECT_THROW(generate_trace(plan,
                              parse_script("duration = 50\n[events]\nevent = 10, depart, w1\nevent = 20, exit, w1\n"
                                           "event = 30, depart, w1\n"),
                              0.0, 1, kRate),
               ValidationError);
  EXPECT_THROW(generate_trace(plan, parse_script("duration = 50\n[events]\nevent = 10, depart, w4\n"), 0.0, 1, kRate),
               ValidationError);
  // Leaving through the door before reaching it.
  EXPECT_THROW(generate_trace(plan,
                              parse_script("duration = 50\n[events]\nevent = 10, depart, w1\nevent = 10.5, exit, w1\n"),
                              0.0, 1, kRate),
               ValidationError);
}

TEST(Simulator, PlanValidation) {
  auto plan = line_plan();
  plan.workstations.push_back({1, {1, 1}});
  EXPECT_THROW(validate(plan), ValidationError);
  plan = line_plan();
  plan.sensors.push_back({3, {9, 1}});
  EXPECT_THROW(validate(plan), ValidationError);
}

TEST(PlanFile, RoundTrip) {
  const auto plan = reference_plan();
  const auto again = parse_plan(serialize_plan(plan));
  EXPECT_EQ(serialize_plan(again), serialize_plan(plan));
  EXPECT_EQ(again.sensor_ids(), plan.sensor_ids());
  EXPECT_EQ(again.workstation_labels(), plan.workstation_labels());
}

TEST(ScriptFile, RoundTrip) {
  const auto plan = reference_plan();
  ScenarioOptions o;
  o.departures = 3;
  const auto script = reference_script(plan, o, kRate);
  const auto again = parse_script(serialize_script(script));
  EXPECT_EQ(again.events, script.events);
  EXPECT_DOUBLE_EQ(again.duration, script.duration);
}

TEST(Truth, CsvRoundTripAndTrueWindow) {
  GroundTruth truth;
  truth.sample_rate_hz = kRate;
  truth.length = 1000;
  truth.events = {{4, Label{1}}, {600, Label::entry()}};
  std::stringstream io;
  write_truth(io, truth);
  const auto back = read_truth(io, kRate, 1000);
  EXPECT_EQ(back.events, truth.events);
  EXPECT_EQ(truth.true_window(truth.events[0], 3.0), std::make_pair(Tick{0}, Tick{16}));
  EXPECT_EQ(truth.true_window(truth.events[1], 3.0), std::make_pair(Tick{588}, Tick{612}));
}

TEST(Occupancy, AwayBetweenDepartureAndReturn) {
  const auto plan = line_plan();
  const auto script = parse_script(
      "duration = 200\n[events]\nevent = 100, depart, w1\nevent = 105, exit, w1\nevent = 150, enter, w1\n");
  const auto occ = occupancy(plan, script, kRate);
  ASSERT_EQ(occ.users, std::vector<int>{1});
  EXPECT_TRUE(occ.seated(1, 400));
  EXPECT_FALSE(occ.seated(1, 401));
  EXPECT_FALSE(occ.seated(1, 600));
  // 3 m at 1.4 m/s back to the seat.
  EXPECT_TRUE(occ.seated(1, 600 + entry_ticks(plan, 1, kRate)));
  ASSERT_EQ(occ.exits.size(), 1u);
  EXPECT_EQ(occ.exits[0].depart, 400);
  EXPECT_EQ(occ.exits[0].exit, 420);
}

TEST(ReferenceScenario, DepartureToExitCoversTDelta) {
  const auto plan = reference_plan();
  const ScenarioOptions o;
  for (int w : plan.workstation_labels()) {
    EXPECT_GE(plan.walk_duration(w) + o.door_time, reference_config().t_delta) << "w" << w;
  }
}
