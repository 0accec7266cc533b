#include <gtest/gtest.h>

#include <sstream>

#include "oracles.hpp"
#include "rfdeauth/error.hpp"
#include "rfdeauth/md.hpp"
#include "rfdeauth/rfsim.hpp"

using namespace rfdeauth;

namespace {

RssiTrace from_columns(const std::vector<std::vector<double>>& cols) {
  std::vector<StreamId> ids;
  for (std::size_t i = 0; i < cols.size(); ++i) ids.push_back({1, static_cast<int>(i) + 2});
  RssiTrace t(4.0, ids, static_cast<Tick>(cols.front().size()));
  for (std::size_t i = 0; i < cols.size(); ++i) std::copy(cols[i].begin(), cols[i].end(), t.stream(i).begin());
  return t;
}

Config short_config() {
  Config c;
  c.d = 1.5;
  c.b = 50;
  c.tau = 0.1;
  return c;
}

}  // namespace

TEST(SumStd, ConstantStreamsGiveZero) {
  const auto t = from_columns({std::vector<double>(20, -50.0), std::vector<double>(20, -61.5)});
  const std::size_t s[] = {0, 1};
  EXPECT_EQ(sum_std(t, s, 10, 6), 0.0);
}

TEST(SumStd, AlternatingStreamsAddUp) {
  std::vector<double> alt;
  for (int i = 0; i < 12; ++i) alt.push_back(i % 2 ? 2.0 : 0.0);
  const auto t = from_columns({alt, alt});
  const std::size_t s[] = {0, 1};
  // Window of 8 samples {0,2,...}: population std 1 each.
  EXPECT_DOUBLE_EQ(sum_std(t, s, 10, 7), 2.0);
}

TEST(SumStd, ScalesLinearly) {
  const auto base = oracle::bursty_trace(3, 60, 2, {});
  auto scaled = base;
  for (std::size_t i = 0; i < 3; ++i) {
    for (auto& v : scaled.stream(i)) v *= 2.5;
  }
  const std::size_t s[] = {0, 1, 2};
  EXPECT_NEAR(sum_std(scaled, s, 40, 6), 2.5 * sum_std(base, s, 40, 6), 1e-12);
  EXPECT_THROW(sum_std(base, s, 5, 6), ValidationError);
}

TEST(SumStdTracker, MatchesBatch) {
  const auto t = oracle::bursty_trace(4, 10000, 8, {{3000, 3100}});
  const std::size_t s[] = {0, 1, 2, 3};
  SumStdTracker tracker(4, 6);
  std::vector<double> row(4);
  for (Tick k = 0; k < t.length(); ++k) {
    for (std::size_t i = 0; i < 4; ++i) row[i] = t.at(i, k);
    tracker.push(row);
    EXPECT_EQ(tracker.ready(), k >= 6);
    if (k >= 6) {
      ASSERT_NEAR(tracker.value(), sum_std(t, s, k, 6), 1e-9) << k;
    }
  }
}

TEST(SumStdTracker, ConstantStreamIsExactlyZero) {
  SumStdTracker tracker(1, 4);
  for (int i = 0; i < 10000; ++i) {
    const double v = -67.3;
    tracker.push(std::span(&v, 1));
  }
  EXPECT_EQ(tracker.value(), 0.0);
}

TEST(MdStep, BoundaryIsAnomalous) {
  Config c;
  NormalProfile profile({1.0, 1.2, 0.9, 1.1, 1.05, 0.95}, c);
  const double ub = profile.threshold();
  UpdateQueue q;
  q.capacity = 100;
  EXPECT_EQ(md_step(profile, q, std::nextafter(ub, 0.0), 0.1), Decision::Normal);
  EXPECT_EQ(md_step(profile, q, ub, 0.1), Decision::Anomalous);
}

TEST(MdStep, AnomalousBatchIsDiscarded) {
  Config c;
  NormalProfile profile({1.0, 1.2, 0.9, 1.1, 1.05, 0.95}, c);
  const auto before = profile.values();
  UpdateQueue q;
  q.capacity = 3;
  bool committed = true;
  md_step(profile, q, 1.0, 0.1, &committed);
  md_step(profile, q, 1.0, 0.1, &committed);
  EXPECT_EQ(md_step(profile, q, 1e6, 0.1, &committed), Decision::Anomalous);
  EXPECT_FALSE(committed);
  EXPECT_EQ(profile.values(), before);
  EXPECT_TRUE(q.pending.empty());
  EXPECT_EQ(q.anomalous, 0u);
}

TEST(MdStep, NormalBatchReplacesOldest) {
  Config c;
  NormalProfile profile({1.0, 1.2, 0.9, 1.1, 1.05, 0.95}, c);
  UpdateQueue q;
  q.capacity = 2;
  bool committed = false;
  md_step(profile, q, 1.01, 0.1, &committed);
  EXPECT_FALSE(committed);
  md_step(profile, q, 1.02, 0.1, &committed);
  EXPECT_TRUE(committed);
  EXPECT_EQ(profile.values(), (std::deque<double>{0.9, 1.1, 1.05, 0.95, 1.01, 1.02}));
}

TEST(WindowTracker, CoalescesSingleNormalTick) {
  WindowTracker w(1);
  const char* pattern = "..***.**..*..";
  std::vector<VariationWindow> closed;
  Tick t = 0;
  for (const char* p = pattern; *p; ++p, ++t) {
    if (auto c = w.push(t, *p == '*' ? Decision::Anomalous : Decision::Normal)) closed.push_back(*c);
  }
  if (auto c = w.finish()) closed.push_back(*c);
  ASSERT_EQ(closed.size(), 2u);
  EXPECT_EQ(closed[0], (VariationWindow{2, 7}));
  EXPECT_EQ(closed[0].duration(), 5);
  EXPECT_EQ(closed[1], (VariationWindow{10, 10}));
}

TEST(WindowTracker, ZeroGapSplits) {
  WindowTracker w(0);
  std::vector<VariationWindow> closed;
  const char* pattern = "**.**.";
  Tick t = 0;
  for (const char* p = pattern; *p; ++p, ++t) {
    if (auto c = w.push(t, *p == '*' ? Decision::Anomalous : Decision::Normal)) closed.push_back(*c);
  }
  ASSERT_EQ(closed.size(), 2u);
  EXPECT_EQ(closed[1], (VariationWindow{3, 4}));
}

TEST(Detect, FlatTraceHasNoWindows) {
  const auto t = from_columns({std::vector<double>(2000, -50.0), std::vector<double>(2000, -55.0)});
  const auto r = detect(t, short_config());
  EXPECT_TRUE(r.windows.empty());
}

TEST(Detect, SingleDepartureGivesOneWindow) {
  const auto plan = parse_plan(
      "width = 8\ndepth = 6\ndoor = 4, 0\n"
      "[sensors]\nd1 = 0, 1\nd2 = 8, 1\nd3 = 0, 2\nd4 = 8, 2\n"
      "[workstations]\nw1 = 4, 5\n");
  const auto script = parse_script("duration = 260\n[events]\nevent = 200, depart, w1\nevent = 204, exit, w1\n");
  const auto sim = generate_trace(plan, script, 0.3, 4, 4.0);
  const auto r = detect(sim.trace, short_config());
  std::size_t overlapping = 0;
  const auto [u1, u2] = sim.truth.true_window(sim.truth.events[0], 3.0);
  for (const auto& w : filter_windows(r.windows, 4)) overlapping += w.t1 <= u2 && u1 <= w.t2;
  EXPECT_EQ(overlapping, 1u);
}

TEST(Detect, StreamingMatchesBatchRecomputation) {
  const auto trace = oracle::bursty_trace(6, 2000, 11, {{700, 720}, {1300, 1330}, {1800, 1810}});
  const auto cfg = short_config();
  const auto streaming = detect(trace, cfg);
  const auto batch = oracle::batch_md(trace, cfg);
  ASSERT_EQ(streaming.ticks.size(), batch.decisions.size());
  std::size_t mismatches = 0;
  for (std::size_t t = 0; t < batch.decisions.size(); ++t) mismatches += streaming.ticks[t].decision != batch.decisions[t];
  EXPECT_EQ(mismatches, 0u);
  EXPECT_GE(streaming.committed_updates, 3u);
  EXPECT_EQ(streaming.committed_updates, batch.commits);
}

TEST(Detect, BootstrapMustExceedWindow) {
  auto cfg = short_config();
  cfg.profile_bootstrap = 1.5;
  EXPECT_THROW(MovementDetector(cfg, 2), ValidationError);
}

TEST(WindowsCsv, RoundTrip) {
  const std::vector<VariationWindow> w{{4, 30}, {100, 118}};
  std::stringstream io;
  write_windows(io, w, 4.0);
  EXPECT_EQ(io.str().substr(0, 15), "t1,t2,duration\n");
  EXPECT_EQ(read_windows(io, 4.0, "w.csv"), w);
}
