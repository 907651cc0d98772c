// Copyright 2026 The qrac Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qrac/analysis.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

namespace qrac {
namespace {

constexpr double kTwoSqrt2 = 2.0 * std::numbers::sqrt2;

std::vector<CoincidenceRecord> counts_from_table(const ProbabilityTable &t, std::uint64_t n,
                                                 std::mt19937_64 &rng) {
  std::vector<CoincidenceRecord> out;
  for (int a0 = 0; a0 < 2; ++a0) {
    for (int a1 = 0; a1 < 2; ++a1) {
      for (int y = 0; y < 2; ++y) {
        std::binomial_distribution<std::uint64_t> bin(n, t.at(a0, a1, y));
        CoincidenceRecord r;
        r.a0 = a0;
        r.a1 = a1;
        r.y = y;
        r.cc0 = bin(rng);
        r.cc1 = n - r.cc0;
        out.push_back(r);
      }
    }
  }
  return out;
}

std::vector<CoincidenceRecord> uniform_counts(std::uint64_t cc0, std::uint64_t cc1) {
  std::vector<CoincidenceRecord> out;
  for (int i = 0; i < 8; ++i) out.push_back({i >> 2, (i >> 1) & 1, i & 1, cc0, cc1});
  return out;
}

TEST(ClosedForm, Values) {
  EXPECT_NEAR(witness_closed_form(0.0), 2.8284271, 1e-7);
  EXPECT_EQ(witness_closed_form(1.0), 0.0);
  EXPECT_NEAR(witness_closed_form(0.75), 1.0606602, 1e-7);
  EXPECT_THROW(witness_closed_form(1.1), DomainError);
}

TEST(Sweep, QuarterGrid) {
  const std::vector<double> g = {0.0, 0.25, 0.5, 0.75, 1.0};
  const auto recs = sweep(g, 0.0, 0.0);
  // sqrt2 (1 + sqrt(1 - g) - g) evaluated by hand.
  const double expect[] = {2.8284271, 2.2854050, 1.7071068, 1.0606602, 0.0};
  ASSERT_EQ(recs.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_TRUE(recs[i].ok());
    EXPECT_NEAR(recs[i].witness, expect[i], 1e-7);
    EXPECT_NEAR(recs[i].asp, (recs[i].witness + 4.0) / 8.0, 1e-12);
    EXPECT_NEAR(recs[i].acceptance_min, 1.0, 1e-15);
  }
  EXPECT_NEAR(recs[2].asp, 0.7133883, 1e-7);
}

TEST(Sweep, MatchesClosedFormOnFineGrid) {
  const auto g = linear_grid(0.0, 1.0, 101);
  for (const auto &r : sweep(g, 0.0, 0.0)) {
    ASSERT_NEAR(r.witness, witness_closed_form(r.gamma), 1e-9);
  }
}

TEST(Sweep, SymmetricFiltersInertWithoutNoise) {
  const std::vector<double> g = {0.0};
  const auto r = sweep(g, 0.9, 0.9).front();
  EXPECT_NEAR(r.witness, 2.8284271, 1e-7);
  EXPECT_NEAR(r.acceptance_min, 0.1, 1e-12);  // N(x) = 1 - f for every input
}

TEST(Sweep, RecordsFailuresWithoutAborting) {
  // F_B(1) removes |H>, and x=00 is |H> at every gamma.
  const std::vector<double> g = {0.0, 0.5, 1.0};
  const auto recs = sweep(g, 0.2, 1.0);
  ASSERT_EQ(recs.size(), 3u);
  for (const auto &r : recs) {
    EXPECT_FALSE(r.ok());
    EXPECT_TRUE(std::isnan(r.witness));
    EXPECT_NE(r.error.find("FilterAnnihilatesState"), std::string::npos);
  }
  // F_A(1) removes |V> = x=11 before the noise acts.
  for (const auto &r : sweep(g, 1.0, 0.2)) EXPECT_NE(r.error.find("x=11"), std::string::npos);
}

TEST(LinearGrid, FiveSteps) {
  const auto g = linear_grid(0.0, 1.0, 5);
  const std::vector<double> expect = {0.0, 0.25, 0.5, 0.75, 1.0};
  EXPECT_EQ(g, expect);
  EXPECT_EQ(linear_grid(0.3, 0.9, 1), std::vector<double>{0.3});
  EXPECT_THROW(linear_grid(0, 1, 0), DomainError);
}

TEST(Bisect, SquareRootOfTwo) {
  const double r = bisect([](double x) { return x * x - 2.0; }, 0.0, 2.0, 1e-12);
  EXPECT_NEAR(r, std::numbers::sqrt2, 1e-12);
  EXPECT_THROW(bisect([](double x) { return x * x + 1.0; }, 0.0, 2.0, 1e-6), NoSignChange);
}

TEST(CriticalGamma, UnfilteredAnalyticRoot) {
  // W = 2 with s = sqrt(1 - gamma) reduces to s^2 + s = sqrt2.
  EXPECT_NEAR(critical_gamma_unfiltered_exact(), 0.375830453299663, 1e-14);
  EXPECT_NEAR(witness_closed_form(critical_gamma_unfiltered_exact()), 2.0, 1e-14);
  const double gc = critical_gamma(0.0, 0.0);
  EXPECT_NEAR(gc, critical_gamma_unfiltered_exact(), 1e-5);
  EXPECT_NEAR(gc, 0.375830, 1e-5);
}

TEST(CriticalGamma, FilteredThresholds) {
  // Frozen from a brentq solve of the independent numpy pipeline (xtol 1e-15).
  EXPECT_NEAR(critical_gamma(0.45, 0.45), 0.5180930256, 1e-5);
  EXPECT_NEAR(critical_gamma(0.45, 0.45), 0.518, 0.005);
  EXPECT_NEAR(critical_gamma(0.90, 0.90), 0.7995424532, 1e-5);
  EXPECT_NEAR(critical_gamma(0.88, 0.91), 0.8294793283, 1e-5);
}

TEST(CriticalGamma, ResidualPostcondition) {
  for (double f : {0.0, 0.2, 0.45, 0.7, 0.9, 0.95}) {
    const double gc = critical_gamma(f, f);
    EXPECT_LE(std::abs(simulated_witness(gc, f, f) - 2.0), 1e-4) << "f=" << f;
  }
}

TEST(CriticalGamma, ToleranceControlsAccuracy) {
  const double exact = critical_gamma_unfiltered_exact();
  EXPECT_NEAR(critical_gamma(0.0, 0.0, 1e-5), exact, 1e-5);
  EXPECT_NEAR(critical_gamma(0.0, 0.0, 1e-10), exact, 1e-10);
  // A bracket this loose cannot meet the |W - 2| <= 1e-4 residual check.
  EXPECT_THROW(critical_gamma(0.0, 0.0, 1e-2), ConvergenceError);
}

TEST(CriticalGamma, NoSignChange) {
  EXPECT_THROW(critical_gamma(1.0, 1.0), NoSignChange);
  EXPECT_THROW(critical_gamma(0.3, 1.0), NoSignChange);
  EXPECT_THROW(critical_gamma(1.2, 0.0), DomainError);
  EXPECT_THROW(critical_gamma(0.0, 0.0, 0.0), DomainError);
}

TEST(WitnessCurve, NonIncreasingInGamma) {
  for (double f : {0.0, 0.45, 0.9}) {
    double prev = simulated_witness(0.0, f, f);
    for (int i = 1; i <= 100; ++i) {
      const double w = simulated_witness(i / 100.0, f, f);
      ASSERT_LE(w, prev + 1e-12) << "f=" << f << " gamma=" << i / 100.0;
      prev = w;
    }
  }
}

TEST(OptimalFilter, NoNoisePicksSmallestFilter) {
  const auto o = optimal_filter(0.0);
  EXPECT_EQ(o.f_star, 0.0);
  EXPECT_NEAR(o.witness, kTwoSqrt2, 1e-12);
}

TEST(OptimalFilter, NeverWorseThanUnfiltered) {
  for (double g : {0.1, 0.5, 0.9}) {
    EXPECT_GE(optimal_filter(g).witness, witness_closed_form(g) - 1e-12);
  }
}

TEST(OptimalFilter, StrongNoiseWantsFiltering) {
  const auto o = optimal_filter(0.75);
  EXPECT_GT(o.f_star, 0.0);
  EXPECT_GT(o.witness, 1.0606602);
  // Witness increases monotonically in f here, so the search ends on the boundary.
  EXPECT_NEAR(o.f_star, 0.999, 1e-9);
  EXPECT_NEAR(o.witness, 2.5406760460, 1e-8);
  EXPECT_THROW(optimal_filter(-0.5), DomainError);
}

TEST(Percentile, LinearInterpolation) {
  const std::vector<double> v = {1, 2, 3, 4, 5};
  EXPECT_EQ(percentile(v, 50), 3.0);
  EXPECT_NEAR(percentile(v, 5), 1.2, 1e-15);
  EXPECT_EQ(percentile(v, 100), 5.0);
  EXPECT_EQ(percentile(v, 0), 1.0);
}

TEST(SampleStream, DeterministicAndInRange) {
  SampleStream a(42, 3, 17), b(42, 3, 17), c(42, 3, 18);
  bool differs = false;
  for (int i = 0; i < 1000; ++i) {
    const double u = a.uniform();
    ASSERT_EQ(u, b.uniform());
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    differs |= (u != c.uniform());
  }
  EXPECT_TRUE(differs);
}

TEST(MonteCarlo, ZeroHalfwidthsCollapseBand) {
  ErrorModelConfig em;
  em.hwp_prep_halfwidth = em.hwp_meas_halfwidth = em.filter_rel_halfwidth = 0.0;
  em.samples = 200;
  const std::vector<double> g = {0.0, 0.3, 0.6};
  for (const auto &b : monte_carlo_band(g, 0.45, 0.45, em)) {
    EXPECT_EQ(b.lo, b.nominal);
    EXPECT_EQ(b.hi, b.nominal);
    EXPECT_EQ(b.min, b.nominal);
    EXPECT_EQ(b.max, b.nominal);
    EXPECT_EQ(b.discards, 0);
  }
}

TEST(MonteCarlo, DeterministicAcrossRunsAndThreads) {
  ErrorModelConfig em;
  em.samples = 500;
  em.seed = 7;
  const std::vector<double> g = {0.0, 0.25, 0.5, 0.75, 1.0};
  const auto a = monte_carlo_run(g, 0.45, 0.45, em, 1);
  const auto b = monte_carlo_run(g, 0.45, 0.45, em, 4);
  const auto c = monte_carlo_run(g, 0.45, 0.45, em, 3);
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t s = 0; s < 500; ++s) {
      ASSERT_EQ(a.samples[i][s], b.samples[i][s]);
      ASSERT_EQ(a.samples[i][s], c.samples[i][s]);
    }
    EXPECT_EQ(a.bands[i].lo, b.bands[i].lo);
    EXPECT_EQ(a.bands[i].hi, b.bands[i].hi);
  }
  em.seed = 8;
  const auto d = monte_carlo_run(g, 0.45, 0.45, em, 1);
  EXPECT_NE(a.samples[2][0], d.samples[2][0]);
}

TEST(MonteCarlo, IdealPointIsBandMaximum) {
  ErrorModelConfig em;
  em.samples = 2000;
  const std::vector<double> g = {0.0};
  const auto run = monte_carlo_run(g, 0.0, 0.0, em);
  const auto &b = run.bands[0];
  EXPECT_NEAR(b.nominal, kTwoSqrt2, 1e-12);
  EXPECT_LE(b.hi, kTwoSqrt2 + 1e-9);
  EXPECT_EQ(b.max, b.nominal);
  EXPECT_LT(b.min, b.lo);
  EXPECT_LE(b.lo, b.hi);
  // Every sampled witness stays below the qubit maximum.
  for (double w : run.samples[0]) ASSERT_LE(w, kTwoSqrt2 + 1e-12);
}

TEST(MonteCarlo, BandOrdering) {
  ErrorModelConfig em;
  em.samples = 1000;
  const std::vector<double> g = {0.0, 0.25, 0.5, 0.75, 1.0};
  for (double f : {0.0, 0.45, 0.9}) {
    for (const auto &b : monte_carlo_band(g, f, f, em)) {
      EXPECT_LE(b.min, b.lo + 1e-12);
      EXPECT_LE(b.lo, b.hi + 1e-12);
      EXPECT_LE(b.hi, b.max + 1e-12);
      EXPECT_LE(b.min, b.nominal + 1e-12);
      EXPECT_LE(b.nominal, b.max + 1e-12);
    }
  }
}

TEST(MonteCarlo, WidthsShrinkWithHalfwidths) {
  const std::vector<double> g = {0.25, 0.5, 0.75};
  std::vector<double> prev_width(g.size(), std::numeric_limits<double>::infinity());
  std::vector<double> prev_range(g.size(), std::numeric_limits<double>::infinity());
  for (double scale : {1.0, 0.5, 0.1, 0.0}) {
    ErrorModelConfig em;
    em.samples = 1000;
    em.hwp_prep_halfwidth *= scale;
    em.hwp_meas_halfwidth *= scale;
    em.filter_rel_halfwidth *= scale;
    const auto bands = monte_carlo_band(g, 0.45, 0.45, em);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double width = bands[i].hi - bands[i].lo;
      const double range = bands[i].max - bands[i].min;
      EXPECT_LT(width, prev_width[i] + 1e-15) << "scale " << scale;
      EXPECT_LT(range, prev_range[i] + 1e-15) << "scale " << scale;
      prev_width[i] = width;
      prev_range[i] = range;
    }
  }
  EXPECT_EQ(prev_width[0], 0.0);
}

TEST(MonteCarlo, DiscardAccounting) {
  ErrorModelConfig em;
  em.samples = 200;
  std::vector<double> draws(200, 1.0);
  draws[5] = std::numeric_limits<double>::quiet_NaN();
  draws[6] = std::numeric_limits<double>::quiet_NaN();
  const auto b = summarize_band(0.1, 1.0, draws, em);
  EXPECT_EQ(b.discards, 2);
  draws[7] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(summarize_band(0.1, 1.0, draws, em), TooManyDiscards);
}

TEST(MonteCarlo, TotalFilteringDiscardsEverything) {
  ErrorModelConfig em;
  em.samples = 50;
  em.filter_rel_halfwidth = 0.0;
  const std::vector<double> g = {0.5};
  EXPECT_THROW(monte_carlo_band(g, 1.0, 0.0, em), FilterAnnihilatesState);
}

TEST(MonteCarlo, RejectsBadConfig) {
  ErrorModelConfig em;
  em.samples = 0;
  const std::vector<double> g = {0.5};
  EXPECT_THROW(monte_carlo_band(g, 0.0, 0.0, em), DomainError);
  em.samples = 10;
  em.hwp_prep_halfwidth = -1.0;
  EXPECT_THROW(monte_carlo_band(g, 0.0, 0.0, em), DomainError);
}

TEST(Ingest, CellEstimates) {
  auto recs = uniform_counts(500, 500);
  recs[0].cc0 = 853;
  recs[0].cc1 = 147;
  const auto res = ingest_counts(recs);
  EXPECT_NEAR(res.table.at(0, 0, 0), 0.853, 1e-15);
  EXPECT_NEAR(res.table.at(0, 0, 1), 0.5, 1e-15);
  EXPECT_NEAR(*res.table.sigma(0, 0, 1), 0.0158114, 1e-7);
  EXPECT_NEAR(*res.table.sigma(0, 0, 0), std::sqrt(0.853 * 0.147 / 1000.0), 1e-15);
  double var = 0.0;
  for (int i = 0; i < 8; ++i) var += std::pow(*res.table.sigma(i >> 2, (i >> 1) & 1, i & 1), 2);
  EXPECT_NEAR(res.witness_sigma, std::sqrt(var), 1e-15);
  EXPECT_NEAR(res.witness, 0.353, 1e-12);
  EXPECT_NEAR(res.asp, (res.witness + 4.0) / 8.0, 1e-15);
}

TEST(Ingest, Errors) {
  auto recs = uniform_counts(10, 10);
  recs[3].cc0 = recs[3].cc1 = 0;
  EXPECT_THROW(ingest_counts(recs), EmptyCell);

  recs = uniform_counts(10, 10);
  recs.pop_back();
  try {
    ingest_counts(recs);
    FAIL();
  } catch (const MissingCell &e) {
    EXPECT_NE(std::string(e.what()).find("(11,1)"), std::string::npos) << e.what();
  }

  recs = uniform_counts(10, 10);
  recs.push_back(recs[2]);
  EXPECT_THROW(ingest_counts(recs), DuplicateCell);

  recs = uniform_counts(10, 10);
  recs[0].y = 2;
  EXPECT_THROW(ingest_counts(recs), DomainError);
}

TEST(Ingest, LargeCountsConvergeToTableWitness) {
  std::mt19937_64 rng(31);
  ScenarioConfig cfg;
  cfg.gamma = 0.4;
  cfg.f_a = cfg.f_b = 0.45;
  const auto table = evaluate_scenario(cfg);
  const auto res = ingest_counts(counts_from_table(table, 1'000'000, rng));
  EXPECT_NEAR(res.witness, witness(table), 0.01);
  EXPECT_LT(res.witness_sigma, 0.002);
}

}  // namespace
}  // namespace qrac
