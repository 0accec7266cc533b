#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "rfdeauth/error.hpp"
#include "rfdeauth/eval.hpp"

using namespace rfdeauth;

namespace {

GroundTruth truth_at(std::vector<Tick> ticks, Tick length) {
  GroundTruth g;
  g.length = length;
  for (Tick t : ticks) g.events.push_back({t, Label{1}});
  return g;
}

std::vector<Sample> random_samples(std::size_t n, int classes, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> x(0.0, 1.0);
  std::vector<Sample> out;
  for (std::size_t i = 0; i < n; ++i) {
    Sample s;
    s.features = {x(rng), x(rng), x(rng), x(rng)};
    s.label = Label{static_cast<int>(i % static_cast<std::size_t>(classes)) + 1};
    out.push_back(s);
  }
  return out;
}

}  // namespace

TEST(FMeasure, Examples) {
  EXPECT_DOUBLE_EQ(f_measure(10, 0, 0), 1.0);
  EXPECT_EQ(f_measure(0, 5, 5), 0.0);
  EXPECT_DOUBLE_EQ(f_measure(130, 7, 0), 260.0 / 267.0);  // 0.97378
  const MdCounts c{6, 2, 3};
  EXPECT_DOUBLE_EQ(c.precision(), 0.75);
  EXPECT_DOUBLE_EQ(c.recall(), 6.0 / 9.0);
}

TEST(MdOutcomes, TaxonomyOnHandWindows) {
  // Events at 100 and 400, delta 1 s = 4 ticks: U = [96, 104] and [396, 404].
  const auto truth = truth_at({100, 400}, 1000);
  const std::vector<VariationWindow> w{{90, 97}, {104, 130}, {200, 230}, {300, 302}};
  const auto c = md_outcomes(w, truth, 1.0, 4);
  EXPECT_EQ(c, (MdCounts{2, 1, 1}));  // {300,302} is filtered out
  EXPECT_EQ(md_outcomes(w, truth, 1.0, 100), (MdCounts{0, 0, 2}));
}

TEST(MdOutcomes, TrueWindowIsClipped) {
  const auto truth = truth_at({2}, 50);
  const std::vector<VariationWindow> w{{0, 1}};
  EXPECT_EQ(md_outcomes(w, truth, 3.0, 0), (MdCounts{1, 0, 0}));
}

TEST(Sweep, BestIsFirstMaximum) {
  const auto truth = truth_at({100, 400}, 1000);
  const std::vector<VariationWindow> w{{95, 120}, {396, 420}, {700, 708}};
  Config c;
  const auto sweep = t_delta_sweep(w, truth, c, 1.0, 8.0, 0.5);
  ASSERT_EQ(sweep.size(), 15u);
  EXPECT_DOUBLE_EQ(sweep.front().t_delta, 1.0);
  EXPECT_DOUBLE_EQ(sweep.back().t_delta, 8.0);
  // Duration 8 ticks: kept through 2.0 s, dropped from 2.5 s.
  EXPECT_DOUBLE_EQ(best_t_delta(sweep), 2.5);
  EXPECT_DOUBLE_EQ(sweep[3].f, 1.0);
}

TEST(Outcome, Cases) {
  Config c;  // t_delta 4.5 s, t_id 5 s, t_ss 3 s, T 300 s at 4 Hz
  const auto a = make_outcome(0, 1, 100, 100, Tick{104}, true, c);
  EXPECT_EQ(a.kind, DeauthCase::A);
  EXPECT_EQ(a.deauth, 104 + 18);
  const auto b = make_outcome(0, 1, 100, 100, Tick{104}, false, c);
  EXPECT_EQ(b.kind, DeauthCase::B);
  EXPECT_EQ(b.deauth, 100 + 32);
  const auto late_input = make_outcome(0, 1, 100, 110, Tick{104}, true, c);
  EXPECT_EQ(late_input.kind, DeauthCase::B);
  EXPECT_EQ(late_input.deauth, 110 + 32);
  const auto missed = make_outcome(0, 1, 100, 100, std::nullopt, std::nullopt, c);
  EXPECT_EQ(missed.kind, DeauthCase::C);
  EXPECT_EQ(missed.deauth, 100 + 1200);
}

TEST(Outcome, CurveIsMonotoneAndReachesOne) {
  Config c;
  std::vector<DeauthOutcome> o{make_outcome(0, 1, 0, 0, Tick{4}, true, c), make_outcome(1, 2, 0, 0, Tick{4}, false, c),
                               make_outcome(2, 3, 0, 0, std::nullopt, std::nullopt, c)};
  const auto curve = deauth_curve(o, 4.0, 400.0, 0.5);
  EXPECT_DOUBLE_EQ(curve.front().proportion, 0.0);
  for (std::size_t i = 1; i < curve.size(); ++i) EXPECT_GE(curve[i].proportion, curve[i - 1].proportion);
  EXPECT_DOUBLE_EQ(curve[11].proportion, 1.0 / 3.0);  // 5.5 s
  EXPECT_DOUBLE_EQ(curve[16].proportion, 2.0 / 3.0);  // 8 s
  EXPECT_DOUBLE_EQ(curve.back().proportion, 1.0);
}

TEST(Attacks, TimeoutBaselineLosesEveryExit) {
  Config c;
  GroundTruth g;
  g.length = 10000;
  g.events = {{100, Label{1}}, {2000, Label{2}}, {2100, Label::entry()}};
  const auto out = timeout_outcomes(g, c);
  ASSERT_EQ(out.size(), 2u);
  const std::vector<OfficeExit> exits{{1, 100, 120}, {2, 2000, 2022}};
  EXPECT_EQ(attack_opportunities(out, exits, Adversary::Insider, 4.0), 2u);
  EXPECT_EQ(attack_opportunities(out, exits, Adversary::Coworker, 4.0), 2u);
  EXPECT_DOUBLE_EQ(vulnerable_time(out, 4.0), 600.0);
}

TEST(Attacks, CoworkerHasAtLeastInsiderOpportunities) {
  Config c;
  std::vector<DeauthOutcome> out;
  std::vector<OfficeExit> exits;
  for (int i = 0; i < 40; ++i) {
    const Tick dep = 1000 * i;
    const Tick exit = dep + 14 + (i % 10);
    exits.push_back({1 + i % 3, dep, exit});
    out.push_back(make_outcome(static_cast<std::size_t>(i), 1 + i % 3, dep, dep, Tick{dep + (i % 7)}, i % 4 != 0, c));
  }
  const auto insider = attack_opportunities(out, exits, Adversary::Insider, 4.0);
  const auto coworker = attack_opportunities(out, exits, Adversary::Coworker, 4.0);
  EXPECT_GE(coworker, insider);
  EXPECT_GT(coworker, 0u);
}

TEST(Costs, OnlySeatedUsersAreCharged) {
  Occupancy occ;
  occ.users = {1, 2};
  occ.away = {{{100, 200}}, {}};
  const ActionLog log{{50, 1, Action::AlertOn},          {60, 1, Action::ScreenSaverOn},
                      {150, 1, Action::Deauthenticate},  {300, 2, Action::TimeoutDeauth},
                      {310, 2, Action::ScreenSaverOn},   {320, 2, Action::Cancel}};
  const auto c = count_costs(log, occ, 3.0, 13.0);
  EXPECT_EQ(c.screen_savers, 2u);
  EXPECT_EQ(c.deauths, 1u);
  EXPECT_DOUBLE_EQ(c.cost, 19.0);
}

TEST(Costs, SummaryScalesToDay) {
  const auto r = summarize_costs({{2, 1, 19.0}, {4, 1, 25.0}}, 2, 2.0);
  EXPECT_DOUBLE_EQ(r.mean_ss_per_day, 6.0);
  EXPECT_DOUBLE_EQ(r.mean_deauth_per_day, 2.0);
  EXPECT_DOUBLE_EQ(r.mean_cost_per_day, 44.0);
  EXPECT_DOUBLE_EQ(r.cost_per_user_day(), 22.0);
  EXPECT_NEAR(r.sd_cost_per_day, std::sqrt(72.0), 1e-12);
}

TEST(Stats, MeanCi95) {
  const std::vector<double> v{1, 2, 3, 4, 5};
  const auto [mean, half] = mean_ci95(v);
  EXPECT_DOUBLE_EQ(mean, 3.0);
  // t(0.975, 4) = 2.776445...
  EXPECT_NEAR(half, 2.7764451 * std::sqrt(2.5) / std::sqrt(5.0), 1e-6);
  const std::vector<double> one{7};
  EXPECT_EQ(mean_ci95(one), (std::pair<double, double>{7.0, 0.0}));
}

TEST(CrossValidation, ShuffledLabelsAreAtChance) {
  const auto data = random_samples(300, 3, 4);
  const auto cv = cross_validate(data, 5, 3, 9);
  ASSERT_EQ(cv.accuracy.size(), 3u);
  EXPECT_NEAR(cv.mean_accuracy(), 1.0 / 3.0, 0.15);
}

TEST(CrossValidation, DeterministicAndChecked) {
  const auto data = random_samples(60, 2, 5);
  EXPECT_EQ(cross_validate(data, 5, 2, 3).predictions, cross_validate(data, 5, 2, 3).predictions);
  EXPECT_THROW(cross_validate(data, 1, 1, 3), ValidationError);
  const std::vector<Sample> few(data.begin(), data.begin() + 3);
  EXPECT_THROW(cross_validate(few, 5, 1, 3), ValidationError);
}

TEST(LearningCurve, PointsGrowByStep) {
  const auto data = random_samples(50, 2, 6);
  const auto curve = learning_curve(data, 10, 4, 1);
  ASSERT_FALSE(curve.empty());
  for (std::size_t i = 0; i < curve.size(); ++i) {
    EXPECT_EQ(curve[i].train_size % 10, 0u);
    EXPECT_LE(curve[i].repeats, 4u);
    EXPECT_GE(curve[i].mean, 0.0);
    EXPECT_LE(curve[i].mean, 1.0);
  }
  EXPECT_EQ(curve.back().train_size, 40u);
}
