#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "fzk/errors.hpp"
#include "fzk/experiment.hpp"
#include "test_support.hpp"

namespace fzk {
namespace {

using testing::max_abs_diff;

RunConfig soliton_config(int n, double t_final) {
  RunConfig cfg;
  cfg.n = n;
  cfg.l = 20.0;
  cfg.alpha = 2.0;
  cfg.t_final = t_final;
  cfg.ic = {SolitonSpec{1.0, 0.0, 0.0, 0.0}};
  return cfg;
}

RunConfig two_soliton_config(int n, double t_final) {
  RunConfig cfg;
  cfg.n = n;
  cfg.l = 20.0;
  cfg.t_final = t_final;
  cfg.ic = {SolitonSpec{0.5, 0.0, -15.0, 0.0}, SolitonSpec{0.2, 0.0, 0.0, 0.0}};
  return cfg;
}

TEST(RandomField, HermitianDeterministicAndDecaying) {
  const Discretization d = build_discretization(8, 1.0, 2.0);
  const SpectralField a = random_hermitian_field(d, 42, 2.0);
  const SpectralField b = random_hermitian_field(d, 42, 2.0);
  EXPECT_EQ(max_abs_diff(a, b), 0.0);
  EXPECT_GT(max_abs_diff(a, random_hermitian_field(d, 43, 2.0)), 0.0);
  EXPECT_LE(a.hermitian_defect(), 1e-15);
  for (int k1 = -8; k1 <= 8; ++k1) {
    for (int k2 = -8; k2 <= 8; ++k2) {
      if (k1 == 0 && k2 == 0) continue;
      EXPECT_NEAR(std::abs(a.at(k1, k2)), 2.0 / std::pow(1.0 + k1 * k1 + k2 * k2, 2), 1e-15);
    }
  }
}

TEST(RunSimulation, ZeroInitialData) {
  RunConfig cfg;
  cfg.n = 8;
  cfg.dt = 0.01;
  cfg.t_final = 0.1;
  const RunResult r = run_simulation(cfg);
  for (const Complex& c : r.final_state.u.coeffs()) EXPECT_EQ(c, Complex(0.0));
  ASSERT_FALSE(r.invariants.empty());
  for (const InvariantRecord& rec : r.invariants) {
    EXPECT_EQ(rec.mass, 0.0);
    EXPECT_EQ(rec.momentum, 0.0);
    EXPECT_EQ(rec.hamiltonian, 0.0);
  }
}

TEST(RunSimulation, ZeroInitialDataNeedsExplicitStep) {
  RunConfig cfg;
  cfg.n = 8;
  cfg.t_final = 0.1;
  EXPECT_THROW(run_simulation(cfg), ZeroFieldError);
}

TEST(RunSimulation, ConstantInitialData) {
  RunConfig cfg;
  cfg.n = 8;
  cfg.t_final = 1.0;
  cfg.ic = {ConstantField{0.7}};
  const RunResult r = run_simulation(cfg);
  EXPECT_DOUBLE_EQ(r.dt, 1.0 / (8 * 0.7));
  const RealField f = inverse_transform(r.final_state.u, r.disc.m_phys);
  for (double v : f.values()) EXPECT_NEAR(v, 0.7, 1e-15);
  EXPECT_EQ(r.final_state.t, 1.0);
}

TEST(RunSimulation, AutomaticStepUsesSolitonAmplitude) {
  const RunConfig cfg = soliton_config(16, 0.0);
  const RunResult r = run_simulation(cfg);
  // M_phys = 36 is even, so the crest sits on a grid point.
  EXPECT_EQ(r.disc.m_phys, 36);
  EXPECT_DOUBLE_EQ(r.dt, 1.0 / (16 * 3.0));
}

TEST(RunSimulation, SnapshotsAtRequestedTimes) {
  RunOptions opts;
  opts.snapshot_times = {0.0, 0.25, 0.5};
  RunConfig cfg = soliton_config(16, 0.5);
  cfg.dt = 0.1;
  const RunResult r = run_simulation(cfg, opts);
  ASSERT_EQ(r.snapshots.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(r.snapshots[i].t, opts.snapshot_times[i]);
    EXPECT_EQ(r.snapshots[i].field.m(), r.disc.m_phys);
  }
  EXPECT_EQ(max_abs_diff(r.snapshots[2].u, r.final_state.u), 0.0);
  EXPECT_EQ(r.invariants.front().t, 0.0);
  EXPECT_EQ(r.invariants.back().t, 0.5);
  EXPECT_TRUE(r.timings.count("setup"));
  EXPECT_TRUE(r.timings.count("integrate"));
}

TEST(RunSimulation, SolitonTravelsAtItsSpeed) {
  RunConfig cfg = soliton_config(64, 1.0);
  const RunResult r = run_simulation(cfg);
  const std::vector<Peak> peaks = find_peaks(LineSeries(r.final_state.u, 0.0), r.disc.m_phys, 1.0);
  ASSERT_FALSE(peaks.empty());
  EXPECT_NEAR(peaks[0].x1, 1.0, 0.02);
  EXPECT_NEAR(peaks[0].value, 3.0, 0.02);
}

TEST(ConvergenceStudy, SpectralDecayAgainstExactSolution) {
  const std::vector<int> ns{16, 32, 64};
  const ConvergenceReport report = convergence_study(soliton_config(16, 0.5), ns);
  EXPECT_EQ(report.reference, ReferenceKind::exact_soliton);
  ASSERT_EQ(report.table.rows.size(), 3u);
  for (std::size_t i = 1; i < 3; ++i) {
    EXPECT_LT(report.table.rows[i].l2_error, report.table.rows[i - 1].l2_error);
    EXPECT_TRUE(report.table.rows[i].l2_order.has_value());
  }
}

TEST(ConvergenceStudy, SelfConvergenceForFractionalOrder) {
  RunConfig cfg = soliton_config(16, 0.25);
  cfg.alpha = 1.5;
  const std::vector<int> ns{16, 32, 64};
  const ConvergenceReport report = convergence_study(cfg, ns);
  EXPECT_EQ(report.reference, ReferenceKind::finest_resolution);
  ASSERT_EQ(report.table.rows.size(), 2u);
  EXPECT_LT(report.table.rows[1].l2_error, report.table.rows[0].l2_error);
}

TEST(ConvergenceStudy, RejectsNonDoubling) {
  const std::vector<int> same{32, 32};
  EXPECT_THROW(convergence_study(soliton_config(16, 0.1), same), NonDoublingSequence);
  const std::vector<int> skip{16, 64};
  EXPECT_THROW(convergence_study(soliton_config(16, 0.1), skip), NonDoublingSequence);
}

TEST(ConvergenceStudy, DeterministicTables) {
  const std::vector<int> ns{8, 16};
  RunConfig cfg = soliton_config(8, 0.2);
  cfg.ic.push_back(RandomField{0.1});
  cfg.seed = 9;
  const ConvergenceReport a = convergence_study(cfg, ns);
  const ConvergenceReport b = convergence_study(cfg, ns);
  ASSERT_EQ(a.table.rows.size(), b.table.rows.size());
  for (std::size_t i = 0; i < a.table.rows.size(); ++i) {
    EXPECT_EQ(a.table.rows[i].l2_error, b.table.rows[i].l2_error);
    EXPECT_EQ(a.table.rows[i].linf_error, b.table.rows[i].linf_error);
  }
}

TEST(TemporalOrderStudy, EdgeCases) {
  RunConfig cfg;
  cfg.n = 8;
  cfg.t_final = 0.1;
  cfg.ic = {CosineMode{}};
  EXPECT_TRUE(temporal_order_study(cfg, std::vector<double>{0.01}).empty());
  EXPECT_THROW(temporal_order_study(cfg, std::vector<double>{0.01, 0.004}), NonDoublingSequence);
}

TEST(SolitonInteraction, RequiresTwoSolitons) {
  const std::vector<double> alphas{2.0};
  const std::vector<double> times{0.0};
  EXPECT_THROW(soliton_interaction_study(soliton_config(16, 0.1), alphas, times), PreconditionError);
}

TEST(SolitonInteraction, InitialSnapshotPeaks) {
  const std::vector<double> alphas{1.5, 2.0};
  const std::vector<double> times{0.0};
  const std::vector<InteractionRun> runs = soliton_interaction_study(two_soliton_config(64, 0.05), alphas, times);
  ASSERT_EQ(runs.size(), 2u);
  EXPECT_EQ(runs[0].alpha, 1.5);
  EXPECT_EQ(runs[1].result.disc.alpha, 2.0);
  for (const InteractionRun& run : runs) {
    ASSERT_EQ(run.result.snapshots.size(), 1u);
    // The odd 135-point grid misses both crests, so max|u0| is a little below 1.5.
    const double sampled_max = sample_initial_condition(run.result.config, run.result.disc).max_abs();
    EXPECT_DOUBLE_EQ(run.result.dt, 1.0 / (64 * sampled_max));
    EXPECT_NEAR(sampled_max, 1.5, 0.03);
    const std::vector<Peak> peaks =
        find_peaks(LineSeries(run.result.snapshots[0].u, 0.0), run.result.disc.m_phys, 0.1);
    ASSERT_EQ(peaks.size(), 2u);
    EXPECT_NEAR(peaks[0].x1, -15.0, 0.05);
    EXPECT_NEAR(peaks[0].value, 1.5, 0.015);
    EXPECT_NEAR(peaks[1].x1, 0.0, 0.05);
    EXPECT_NEAR(peaks[1].value, 0.6, 0.006);
  }
}

TEST(CrossSection, MatchesLineSeries) {
  const Discretization d = build_discretization(6, 1.0, 2.0);
  const SpectralField u = random_hermitian_field(d, 1);
  EXPECT_EQ(cross_section(u, 20), LineSeries(u, 0.0).sample(20));
}

TEST(OracleCheck, Examples) {
  EXPECT_LE(oracle_check(8, 100, 1), 1e-12);
  EXPECT_EQ(oracle_check(8, 0, 1), 0.0);
  EXPECT_THROW(oracle_check(32, 1, 1), OracleSizeExceeded);
}

}  // namespace
}  // namespace fzk
