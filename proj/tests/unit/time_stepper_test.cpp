#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "fzk/errors.hpp"
#include "fzk/experiment.hpp"
#include "fzk/time_stepper.hpp"
#include "test_support.hpp"

namespace fzk {
namespace {

using testing::cosine_field;
using testing::kPi;
using testing::max_abs_diff;

const double kSqrt8 = 2.0 * std::numbers::sqrt2;

/// One classical RK4 step on V(t) = exp(-Lambda t) U(t) with the absolute
/// time t_n in the exponent.
SpectralField global_v_step(const SpectralField& u, double t_n, double h, const DiagonalOperator& lam,
                            NonlinearWorkspace& w) {
  const std::size_t size = u.coeffs().size();
  auto to_u = [&](const SpectralField& v, double t) {
    SpectralField out = v;
    for (std::size_t i = 0; i < size; ++i) out.coeffs()[i] *= std::exp(lam.entries[i] * t);
    return out;
  };
  auto g = [&](const SpectralField& v, double t) {
    SpectralField out = nonlinear_term(to_u(v, t), w);
    for (std::size_t i = 0; i < size; ++i) out.coeffs()[i] *= h * std::exp(-lam.entries[i] * t);
    return out;
  };
  auto shifted = [&](const SpectralField& v, double a, const SpectralField& k) {
    SpectralField out = v;
    for (std::size_t i = 0; i < size; ++i) out.coeffs()[i] += a * k.coeffs()[i];
    return out;
  };
  const SpectralField v = to_u(u, -t_n);
  const SpectralField k1 = g(v, t_n);
  const SpectralField k2 = g(shifted(v, 0.5, k1), t_n + h / 2);
  const SpectralField k3 = g(shifted(v, 0.5, k2), t_n + h / 2);
  const SpectralField k4 = g(shifted(v, 1.0, k3), t_n + h);
  SpectralField next = v;
  for (std::size_t i = 0; i < size; ++i) {
    next.coeffs()[i] += (k1.coeffs()[i] + 2.0 * k2.coeffs()[i] + 2.0 * k3.coeffs()[i] + k4.coeffs()[i]) / 6.0;
  }
  return to_u(next, t_n + h);
}

TEST(PhaseFactor, Examples) {
  const Discretization d = build_discretization(8, 1.0, 2.0);
  const DiagonalOperator lam = linear_symbol(d);
  for (const Complex& e : phase_factor(lam, 0.0).entries) EXPECT_EQ(e, Complex(1.0));

  // Lambda(1,0) = i, so exp(i pi) = -1.
  EXPECT_NEAR(std::abs(phase_factor(lam, kPi).at(1, 0) - Complex(-1.0)), 0.0, 1e-15);

  for (double h : {1e-3, 0.37, 12.0}) {
    for (const Complex& e : phase_factor(linear_symbol(build_discretization(16, 0.5, 1.3)), h).entries) {
      EXPECT_NEAR(std::abs(e), 1.0, 1e-14);
    }
  }
}

TEST(Step, LinearOnlyIsExactPhaseRotation) {
  const Discretization d = build_discretization(8, 1.0, 2.0);
  const DiagonalOperator lam = linear_symbol(d);
  NonlinearWorkspace w(d);
  const SpectralField u = random_hermitian_field(d, 3);
  const StepperState next = step({0.0, u}, 0.05, lam, w, Nonlinearity::disabled);
  const DiagonalOperator e2 = phase_factor(lam, 0.05);
  SpectralField expected = u;
  for (std::size_t i = 0; i < u.coeffs().size(); ++i) expected.coeffs()[i] *= e2.entries[i];
  EXPECT_LE(max_abs_diff(next.u, expected), 1e-15);
  EXPECT_DOUBLE_EQ(next.t, 0.05);
}

TEST(Step, ConstantFieldIsSteady) {
  const Discretization d = build_discretization(8, 1.0, 2.0);
  NonlinearWorkspace w(d);
  SpectralField u(d);
  u.at(0, 0) = -2.5;
  const StepperState next = step({0.0, u}, 0.1, linear_symbol(d), w);
  EXPECT_EQ(max_abs_diff(next.u, u), 0.0);
}

TEST(Step, MatchesFineClassicalRk4) {
  const Discretization d = build_discretization(4, 1.0, 2.0);
  const DiagonalOperator lam = linear_symbol(d);
  NonlinearWorkspace w(d);
  const SpectralField u0 = cosine_field(d, 1);
  const StepperState next = step({0.0, u0}, 1e-3, lam, w);
  const SpectralField reference = testing::classical_rk4(u0, 1e-3, 100, lam, w);
  EXPECT_LE(max_abs_diff(next.u, reference), 1e-12);
}

TEST(Step, RebasedEqualsGlobalTimeFormulation) {
  const Discretization d = build_discretization(4, 1.0, 2.0);
  const DiagonalOperator lam = linear_symbol(d);
  NonlinearWorkspace w(d);
  const SpectralField u = random_hermitian_field(d, 8, 0.5);
  for (double t_n : {0.0, 1.0, 5.0, 10.0}) {
    const StepperState rebased = step({t_n, u}, 0.01, lam, w);
    EXPECT_LE(max_abs_diff(rebased.u, global_v_step(u, t_n, 0.01, lam, w)), 1e-13) << t_n;
  }
}

TEST(Step, ZeroModeIsBitIdentical) {
  const Discretization d = build_discretization(8, 1.0, 1.5);
  NonlinearWorkspace w(d);
  IfRk4Stepper stepper(linear_symbol(d), w);
  SpectralField u = random_hermitian_field(d, 1);
  u.at(0, 0) = 0.123456789;
  StepperState s{0.0, u};
  for (std::size_t i = 0; i < 200; ++i) {
    stepper.step(s, 0.01, i);
    ASSERT_EQ(s.u.at(0, 0), Complex(0.123456789));
  }
  EXPECT_LE(s.u.hermitian_defect(), 1e-15);
}

TEST(Step, NanDetectedCarriesStepIndex) {
  const Discretization d = build_discretization(8, 1.0, 2.0);
  NonlinearWorkspace w(d);
  const SpectralField u = random_hermitian_field(d, 2, 1e3);
  try {
    integrate(u, {1.0, 1e4}, linear_symbol(d), w);
    FAIL() << "expected blow-up";
  } catch (const NanDetected& e) {
    EXPECT_GT(e.step_index(), 0u);
    EXPECT_EQ(e.time(), static_cast<double>(e.step_index()));
  }
}

TEST(StabilityFunction, Examples) {
  EXPECT_EQ(stability_function(0.0), Complex(1.0));
  EXPECT_NEAR(std::norm(stability_function(Complex(0.0, kSqrt8))), 1.0, 1e-13);
  EXPECT_GT(std::abs(stability_function(Complex(0.0, 3.0))), 1.0);
  for (double y : {0.1, 0.9, 1.7, 2.5, 3.1}) {
    const double expected = 1.0 - std::pow(y, 6) / 72.0 + std::pow(y, 8) / 576.0;
    EXPECT_NEAR(std::norm(stability_function(Complex(0.0, y))), expected, 1e-13);
  }
  const Complex z(-0.3, 0.7);
  EXPECT_NEAR(std::abs(stability_function(z) - (1.0 + z + z * z / 2.0 + z * z * z / 6.0 + z * z * z * z / 24.0)),
              0.0, 1e-15);
}

TEST(StabilityFunction, ImaginaryAxisBoundary) {
  // The last stable and first unstable scan points straddle 2*sqrt(2).
  double last_stable = -1.0;
  double first_unstable = INFINITY;
  for (int i = 0; i <= 3200; ++i) {
    const double y = i * 1e-3;
    if (std::abs(stability_function(Complex(0.0, y))) <= 1.0) {
      last_stable = y;
    } else if (first_unstable == INFINITY) {
      first_unstable = y;
    }
  }
  EXPECT_LE(last_stable, kSqrt8);
  EXPECT_GT(first_unstable, kSqrt8 - 1e-3);
  EXPECT_LE(first_unstable - last_stable, 1e-3 + 1e-12);
}

TEST(MaxStableDt, Examples) {
  EXPECT_NEAR(max_stable_dt(1, 1.0), 2.8284271247, 1e-9);
  EXPECT_NEAR(max_stable_dt(4, 2.0), 0.3535533906, 1e-9);
  EXPECT_NEAR(max_stable_dt(256, 1.0, 20.0), 0.2209708691, 1e-9);
  EXPECT_NEAR(max_stable_dt(4, -2.0), max_stable_dt(4, 2.0), 0.0);
  EXPECT_EQ(max_stable_dt(4, 0.0), INFINITY);
  EXPECT_THROW(max_stable_dt(0, 1.0), InvalidParameter);
}

TEST(DefaultDt, Examples) {
  EXPECT_DOUBLE_EQ(default_dt(256, RealField(4, 1.0, std::vector<double>(16, 3.0))), 1.0 / 768.0);
  std::vector<double> values(16, 0.0);
  values[5] = -1.0;
  EXPECT_DOUBLE_EQ(default_dt(16, RealField(4, 1.0, values)), 1.0 / 16.0);
  EXPECT_THROW(default_dt(16, RealField(4, 1.0)), ZeroFieldError);
}

TEST(StepCount, LandsOnEnd) {
  EXPECT_EQ(step_count(1.0, 0.01), 100u);
  EXPECT_EQ(step_count(0.105, 0.01), 11u);
  EXPECT_EQ(step_count(0.0, 0.01), 0u);
  EXPECT_EQ(step_count(1.0, 1.0 / 3.0), 3u);
}

TEST(Integrate, ZeroFinalTime) {
  const Discretization d = build_discretization(4, 1.0, 2.0);
  NonlinearWorkspace w(d);
  const SpectralField u = random_hermitian_field(d, 1);
  int calls = 0;
  const StepperState end = integrate(u, {0.1, 0.0}, linear_symbol(d), w, [&](const StepperState& s) {
    ++calls;
    EXPECT_EQ(s.t, 0.0);
  });
  EXPECT_EQ(calls, 1);
  EXPECT_EQ(end.t, 0.0);
  EXPECT_EQ(max_abs_diff(end.u, u), 0.0);
}

TEST(Integrate, LinearCosineMatchesAnalyticRotation) {
  // cos(x1) evolves to cos(x1 + t) under u_t = d/dx1 (-Delta) u.
  const Discretization d = build_discretization(8, 1.0, 2.0);
  NonlinearWorkspace w(d);
  IntegrateOptions opts;
  opts.nonlinearity = Nonlinearity::disabled;
  const StepperState end = integrate(cosine_field(d, 1), {0.01, 1.0}, linear_symbol(d), w, {}, opts);
  EXPECT_DOUBLE_EQ(end.t, 1.0);
  const RealField got = inverse_transform(end.u, d.m_phys);
  double worst = 0.0;
  for (int i = 0; i < d.m_phys; ++i) {
    for (int j = 0; j < d.m_phys; ++j) {
      worst = std::max(worst, std::abs(got.at(i, j) - std::cos(got.coordinate(i) + 1.0)));
    }
  }
  EXPECT_LE(worst, 1e-12);
}

TEST(Integrate, ObserverCadenceAndExactStops) {
  const Discretization d = build_discretization(4, 1.0, 2.0);
  NonlinearWorkspace w(d);
  std::vector<double> times;
  IntegrateOptions opts;
  opts.observe_every = 4;
  opts.stops = {0.055};
  const StepperState end = integrate(random_hermitian_field(d, 2), {0.01, 0.105}, linear_symbol(d), w,
                                     [&](const StepperState& s) { times.push_back(s.t); }, opts);
  EXPECT_EQ(end.t, 0.105);
  ASSERT_FALSE(times.empty());
  EXPECT_EQ(times.front(), 0.0);
  EXPECT_EQ(times.back(), 0.105);
  EXPECT_NE(std::find(times.begin(), times.end(), 0.055), times.end());
  EXPECT_TRUE(std::is_sorted(times.begin(), times.end()));
}

TEST(Integrate, RejectsInvalidPolicy) {
  const Discretization d = build_discretization(4, 1.0, 2.0);
  NonlinearWorkspace w(d);
  EXPECT_THROW(integrate(SpectralField(d), {0.0, 1.0}, linear_symbol(d), w), InvalidParameter);
  EXPECT_THROW(integrate(SpectralField(d), {0.1, -1.0}, linear_symbol(d), w), InvalidParameter);
}

TEST(Integrate, FourthOrderInTime) {
  RunConfig cfg;
  cfg.n = 16;
  cfg.l = 2.0;
  cfg.t_final = 1.0;
  cfg.ic = {CosineMode{0.5, 1, 0, 0.0}, CosineMode{0.25, 1, 1, 0.3}};
  const std::vector<double> dts{1.0 / 40, 1.0 / 80, 1.0 / 160, 1.0 / 320, 1.0 / 640};
  const std::vector<TemporalOrderRow> rows = temporal_order_study(cfg, dts);
  ASSERT_EQ(rows.size(), 4u);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    ASSERT_TRUE(rows[i].order.has_value());
    EXPECT_GE(*rows[i].order, 3.7);
    EXPECT_LE(*rows[i].order, 4.3);
  }
}

}  // namespace
}  // namespace fzk
