#include <gtest/gtest.h>

#include <sstream>

#include "rfdeauth/error.hpp"
#include "rfdeauth/kma.hpp"

using namespace rfdeauth;

namespace {

Occupancy always_seated(std::vector<int> users) {
  Occupancy occ;
  occ.users = std::move(users);
  occ.away.assign(occ.users.size(), {});
  return occ;
}

}  // namespace

TEST(IdleSet, InputInsideIntervalMeansBusy) {
  InputTrace in;
  in.inputs[1] = {10, 20};
  const int ws[] = {1};
  EXPECT_FALSE(idle_set(in, ws, 24, 5).contains(1));
}

TEST(IdleSet, InputExactlyAtIntervalStartIsOutside) {
  InputTrace in;
  in.inputs[1] = {19};
  const int ws[] = {1};
  EXPECT_TRUE(idle_set(in, ws, 24, 5).contains(1));
  EXPECT_FALSE(idle_set(in, ws, 24, 6).contains(1));
}

TEST(IdleSet, ZeroLengthIntervalIsEveryone) {
  InputTrace in;
  in.inputs[1] = {24};
  in.inputs[2] = {24};
  const int ws[] = {1, 2};
  EXPECT_EQ(idle_set(in, ws, 24, 0), (std::set<int>{1, 2}));
}

TEST(IdleSet, MonotoneInLength) {
  InputTrace in;
  in.inputs[1] = {3, 40, 77};
  in.inputs[2] = {50};
  in.inputs[3] = {};
  const int ws[] = {1, 2, 3};
  for (Tick t = 0; t < 100; t += 7) {
    for (Tick s1 = 0; s1 < 60; s1 += 3) {
      const auto a = idle_set(in, ws, t, s1);
      const auto b = idle_set(in, ws, t, s1 + 3);
      for (int w : b) EXPECT_TRUE(a.contains(w));
    }
  }
}

TEST(IdleTracker, AgreesWithTraceQuery) {
  InputTrace in;
  in.inputs[1] = {5, 17, 30};
  in.inputs[2] = {12};
  const int ws[] = {1, 2};
  IdleTracker tracker({1, 2}, -1000);  // origin counts as an input
  std::size_t i1 = 0, i2 = 0;
  for (Tick t = 0; t < 60; ++t) {
    if (i1 < in.inputs[1].size() && in.inputs[1][i1] == t) tracker.record(1, t), ++i1;
    if (i2 < in.inputs[2].size() && in.inputs[2][i2] == t) tracker.record(2, t), ++i2;
    for (Tick s : {1, 4, 18}) EXPECT_EQ(tracker.idle_set(t, s), idle_set(in, ws, t, s)) << t << ' ' << s;
  }
}

TEST(SimulateInputs, CertainInputFillsEveryInterval) {
  const auto in = simulate_inputs(200, always_seated({1, 2}), 1.0, 20, 3);
  for (int w : {1, 2}) {
    const auto& ticks = in.inputs.at(w);
    ASSERT_EQ(ticks.size(), 10u);
    for (std::size_t i = 0; i < ticks.size(); ++i) EXPECT_EQ(ticks[i] / 20, static_cast<Tick>(i));
  }
}

TEST(SimulateInputs, ZeroProbabilityIsEmpty) {
  EXPECT_EQ(simulate_inputs(1000, always_seated({1, 2, 3}), 0.0, 20, 3).size(), 0u);
}

TEST(SimulateInputs, ActiveFractionMatchesProbability) {
  const auto in = simulate_inputs(10000 * 20, always_seated({1}), 0.78, 20, 12);
  EXPECT_NEAR(static_cast<double>(in.size()) / 10000.0, 0.78, 0.01);
}

TEST(SimulateInputs, NoInputWhileAway) {
  auto occ = always_seated({1});
  occ.away[0] = {{100, 300}};
  const auto in = simulate_inputs(400, occ, 1.0, 20, 1);
  for (Tick t : in.inputs.at(1)) EXPECT_TRUE(t < 100 || t >= 300) << t;
  EXPECT_EQ(in.size(), 10u);
}

TEST(SimulateInputs, DeterministicInSeed) {
  const auto occ = always_seated({1, 2, 3});
  EXPECT_EQ(simulate_inputs(5000, occ, 0.78, 20, 4), simulate_inputs(5000, occ, 0.78, 20, 4));
  EXPECT_FALSE(simulate_inputs(5000, occ, 0.78, 20, 4) == simulate_inputs(5000, occ, 0.78, 20, 5));
  EXPECT_THROW(simulate_inputs(10, occ, 1.5, 20, 4), ValidationError);
}

TEST(InputsCsv, RoundTrip) {
  const auto in = simulate_inputs(2000, always_seated({1, 3}), 0.78, 20, 9);
  std::stringstream io;
  write_inputs(io, in, 4.0);
  EXPECT_EQ(read_inputs(io, 4.0), in);
}
