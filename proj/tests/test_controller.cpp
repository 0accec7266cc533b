#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "rfdeauth/controller.hpp"

using namespace rfdeauth;

namespace {

// MD output with anomalous ticks in each [a, b].
std::vector<MdTick> decisions(Tick length, const std::vector<std::pair<Tick, Tick>>& windows) {
  std::vector<MdTick> out(static_cast<std::size_t>(length));
  for (auto& m : out) m.ready = true;
  for (const auto& [a, b] : windows) {
    for (Tick t = a; t <= b; ++t) out[static_cast<std::size_t>(t)].decision = Decision::Anomalous;
  }
  return out;
}

std::vector<Tick> every_tick(Tick from, Tick to) {
  std::vector<Tick> v;
  for (Tick t = from; t < to; ++t) v.push_back(t);
  return v;
}

WindowClassifier always(int w) {
  return [w](Tick) { return Label{w}; };
}

std::vector<ActionRecord> for_ws(const ActionLog& log, int w) {
  std::vector<ActionRecord> out;
  for (const auto& r : log) {
    if (r.workstation == w) out.push_back(r);
  }
  return out;
}

const std::vector<int> kWs{1, 2, 3};

}  // namespace

TEST(Rule1, DeauthenticatesIdlePredictedWorkstation) {
  EXPECT_EQ(apply_rule1(Label{2}, {2, 3}), std::optional<int>(2));
  EXPECT_EQ(apply_rule1(Label{0}, {1, 2, 3}), std::nullopt);
  EXPECT_EQ(apply_rule1(Label{2}, {1, 3}), std::nullopt);
}

TEST(Rule2, AlertsOnlyAuthenticatedIdleWorkstations) {
  std::map<int, Status> st{{1, Status::Authenticated}, {2, Status::Authenticated}, {3, Status::Deauthenticated}};
  EXPECT_EQ(apply_rule2({1, 2, 3}, st), (std::vector<int>{1, 2}));
  EXPECT_TRUE(apply_rule2({}, st).empty());
}

TEST(Controller, CaseACorrectClassification) {
  Config c;
  InputTrace in;
  in.inputs[1] = {95};
  in.inputs[2] = every_tick(0, 400);
  in.inputs[3] = every_tick(0, 400);
  const auto log = replay(c, kWs, decisions(400, {{100, 130}}), in, always(1));
  const auto w1 = for_ws(log, 1);
  ASSERT_FALSE(w1.empty());
  EXPECT_EQ(w1[0], (ActionRecord{100 + 18, 1, Action::Deauthenticate}));
  EXPECT_TRUE(for_ws(log, 2).empty());
  EXPECT_TRUE(for_ws(log, 3).empty());
}

TEST(Controller, CaseBMisclassificationEscalates) {
  Config c;
  InputTrace in;
  in.inputs[1] = {100};
  in.inputs[2] = every_tick(0, 400);
  in.inputs[3] = every_tick(0, 400);
  const auto log = replay(c, kWs, decisions(400, {{100, 130}}), in, always(2));
  const auto w1 = for_ws(log, 1);
  ASSERT_EQ(w1.size(), 3u);
  EXPECT_EQ(w1[0].action, Action::AlertOn);
  EXPECT_EQ(w1[1], (ActionRecord{100 + 20, 1, Action::ScreenSaverOn}));
  EXPECT_EQ(w1[2], (ActionRecord{100 + 32, 1, Action::Deauthenticate}));
}

TEST(Controller, CaseCTimeout) {
  Config c;
  InputTrace in;
  in.inputs[1] = {100};
  in.inputs[2] = every_tick(0, 1500);
  in.inputs[3] = every_tick(0, 1500);
  const auto log = replay(c, kWs, decisions(1500, {}), in, always(1));
  ASSERT_EQ(log.size(), 1u);
  EXPECT_EQ(log[0], (ActionRecord{100 + 1200, 1, Action::TimeoutDeauth}));
}

TEST(Controller, TypingCancelsAlert) {
  Config c;
  Controller ctl(c, kWs, always(0));
  for (Tick t = 0; t < 100; ++t) {
    for (int w : kWs) ctl.input(w, t);
    ctl.step(t, Decision::Normal);
  }
  for (Tick t = 100; t < 130; ++t) {
    ctl.input(1, t);
    if (t < 112) ctl.input(2, t);  // idle 18 ticks at 129: alerted, no screen saver yet
    ctl.input(3, t);
    ctl.step(t, Decision::Anomalous);
  }
  EXPECT_EQ(ctl.mode(), Mode::Noisy);
  EXPECT_EQ(ctl.status(2), Status::Alert);
  ctl.input(2, 130);
  EXPECT_EQ(ctl.status(2), Status::Authenticated);
  EXPECT_EQ(ctl.log().back(), (ActionRecord{130, 2, Action::Cancel}));
}

TEST(Controller, NoisyStartsAtTDeltaAndEndsWithWindow) {
  Config c;
  Controller ctl(c, kWs, always(0));
  for (Tick t = 0; t < 50; ++t) ctl.step(t, Decision::Normal);
  for (Tick t = 50; t < 68; ++t) {
    ctl.step(t, Decision::Anomalous);
    EXPECT_EQ(ctl.mode(), Mode::Quiet) << t;
  }
  ctl.step(68, Decision::Anomalous);
  EXPECT_EQ(ctl.mode(), Mode::Noisy);
  ctl.step(69, Decision::Anomalous);
  ctl.step(70, Decision::Normal);  // coalesced
  EXPECT_EQ(ctl.mode(), Mode::Noisy);
  ctl.step(71, Decision::Normal);
  EXPECT_EQ(ctl.mode(), Mode::Quiet);
}

TEST(Controller, ShortWindowsNeverQueryTheClassifier) {
  Config c;
  int calls = 0;
  Controller ctl(c, kWs, [&](Tick) {
    ++calls;
    return Label{1};
  });
  for (Tick t = 0; t < 500; ++t) ctl.step(t, (t % 30) < 10 ? Decision::Anomalous : Decision::Normal);
  EXPECT_EQ(calls, 0);
}

TEST(Controller, TypingEverySecondIsNeverDeauthenticated) {
  Config c;
  std::mt19937_64 rng(2);
  std::bernoulli_distribution coin(0.3);
  std::vector<MdTick> md(6000);
  for (auto& m : md) m.decision = coin(rng) ? Decision::Anomalous : Decision::Normal;
  InputTrace in;
  for (int w : kWs) {
    for (Tick t = w; t < 6000; t += 4) in.inputs[w].push_back(t);
  }
  const auto log = replay(c, kWs, md, in, always(1));
  for (const auto& r : log) {
    EXPECT_NE(r.action, Action::Deauthenticate);
    EXPECT_NE(r.action, Action::TimeoutDeauth);
    EXPECT_NE(r.action, Action::ScreenSaverOn);
  }
}

TEST(Controller, DeauthenticatesOncePerEpisode) {
  Config c;
  InputTrace in;
  in.inputs[1] = {10};
  const auto log = replay(c, kWs, decisions(3000, {{100, 130}, {300, 330}, {900, 960}}), in, always(1));
  int deauths = 0;
  for (const auto& r : for_ws(log, 1)) deauths += r.action == Action::Deauthenticate || r.action == Action::TimeoutDeauth;
  EXPECT_EQ(deauths, 1);
}

TEST(Controller, ReplayIsDeterministic) {
  Config c;
  std::mt19937_64 rng(7);
  std::bernoulli_distribution coin(0.2);
  std::vector<MdTick> md(4000);
  for (auto& m : md) m.decision = coin(rng) ? Decision::Anomalous : Decision::Normal;
  InputTrace in;
  in.inputs[1] = {5, 400, 1200};
  in.inputs[2] = {50, 800};
  const std::vector<int> ws{1, 2};
  auto cls = [](Tick t1) { return Label{static_cast<int>(t1 % 3)}; };
  EXPECT_EQ(replay(c, ws, md, in, cls), replay(c, ws, md, in, cls));
}

TEST(Controller, DismissalInputClearsScreenSaver) {
  Config c;
  InputTrace in;
  in.inputs[1] = {100};
  ReplayOptions opt;
  opt.dismiss_after = 4;
  opt.seated = [](int, Tick) { return true; };
  const auto log = replay(c, std::vector<int>{1}, decisions(400, {{100, 130}}), in, always(0), opt);
  const auto w1 = for_ws(log, 1);
  ASSERT_GE(w1.size(), 3u);
  EXPECT_EQ(w1[1].action, Action::ScreenSaverOn);
  EXPECT_EQ(w1[2], (ActionRecord{w1[1].t + 4, 1, Action::Cancel}));
}

TEST(ActionsCsv, RoundTrip) {
  const ActionLog log{{118, 1, Action::Deauthenticate}, {120, 2, Action::AlertOn}, {121, 2, Action::Cancel}};
  std::stringstream io;
  write_actions(io, log, 4.0);
  EXPECT_EQ(io.str(), "t,workstation,action\n29.500000,w1,Deauthenticate\n30.000000,w2,AlertOn\n30.250000,w2,Cancel\n");
  EXPECT_EQ(read_actions(io, 4.0), log);
}
