#include "fzk/time_stepper.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "fzk/errors.hpp"

namespace fzk {

void StepPolicy::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidParameter("time step must be positive");
  if (!(t_final >= 0.0) || !std::isfinite(t_final)) {
    throw InvalidParameter("final time must be non-negative");
  }
}

std::size_t step_count(double span, double dt) {
  if (!(span > 0.0)) return 0;
  const double ratio = span / dt;
  // Absorb round-off so that e.g. 1.0 / 0.01 gives 100 steps, not 101.
  const double n = std::ceil(ratio - 1e-9 * std::max(1.0, ratio));
  return static_cast<std::size_t>(std::max(1.0, n));
}

DiagonalOperator phase_factor(const DiagonalOperator& lambda, double h) {
  DiagonalOperator out{lambda.disc, std::vector<Complex>(lambda.entries.size())};
  for (std::size_t i = 0; i < out.entries.size(); ++i) out.entries[i] = std::exp(lambda.entries[i] * h);
  return out;
}

// ---------------------------------------------------------------------------

IfRk4Stepper::IfRk4Stepper(DiagonalOperator lambda, NonlinearWorkspace& workspace,
                           Nonlinearity nonlinearity)
    : lambda_(std::move(lambda)), workspace_(&workspace), nonlinearity_(nonlinearity) {
  if (!lambda_.disc.compatible(workspace.disc())) {
    throw WorkspaceMismatch("symbol and workspace use different discretizations");
  }
  const std::size_t count = lambda_.entries.size();
  for (auto* buf : {&a1_, &a2_, &a3_, &a4_, &stage_}) buf->assign(count, Complex{0.0, 0.0});
}

void IfRk4Stepper::refresh_phases(double dt) {
  if (dt == cached_dt_ && !full_phase_.empty()) return;
  half_phase_ = phase_factor(lambda_, 0.5 * dt).entries;
  full_phase_ = phase_factor(lambda_, dt).entries;
  cached_dt_ = dt;
}

void IfRk4Stepper::nonlinear(std::span<const Complex> u, std::span<Complex> out, double dt) {
  if (nonlinearity_ == Nonlinearity::disabled) {
    std::fill(out.begin(), out.end(), Complex{0.0, 0.0});
    return;
  }
  workspace_->evaluate(u, out);
  for (Complex& v : out) v *= dt;
}

void IfRk4Stepper::step(StepperState& state, double dt, std::size_t step_index) {
  if (!(dt > 0.0)) throw InvalidParameter("time step must be positive");
  if (!state.u.disc().compatible(lambda_.disc)) {
    throw WorkspaceMismatch("state and stepper use different discretizations");
  }
  refresh_phases(dt);

  auto u = state.u.coeffs();
  const std::size_t count = u.size();
  const auto& e = half_phase_;
  const auto& e2 = full_phase_;

  nonlinear(u, a1_, dt);

  for (std::size_t i = 0; i < count; ++i) stage_[i] = e[i] * (u[i] + 0.5 * a1_[i]);
  nonlinear(stage_, a2_, dt);

  for (std::size_t i = 0; i < count; ++i) stage_[i] = e[i] * u[i] + 0.5 * a2_[i];
  nonlinear(stage_, a3_, dt);

  for (std::size_t i = 0; i < count; ++i) stage_[i] = e2[i] * u[i] + e[i] * a3_[i];
  nonlinear(stage_, a4_, dt);

  constexpr double kSixth = 1.0 / 6.0;
  bool finite = true;
  for (std::size_t i = 0; i < count; ++i) {
    const Complex incr = e2[i] * a1_[i] + 2.0 * e[i] * (a2_[i] + a3_[i]) + a4_[i];
    u[i] = e2[i] * u[i] + kSixth * incr;
    finite = finite && std::isfinite(u[i].real()) && std::isfinite(u[i].imag());
  }
  if (!finite) throw NanDetected(step_index, state.t);
  state.u.enforce_hermitian();
  state.t += dt;
}

StepperState step(const StepperState& s, double dt, const DiagonalOperator& lambda,
                  NonlinearWorkspace& w, Nonlinearity nonlinearity) {
  IfRk4Stepper stepper(lambda, w, nonlinearity);
  StepperState out = s;
  stepper.step(out, dt);
  return out;
}

// ---------------------------------------------------------------------------

Complex stability_function(Complex z) {
  return 1.0 + z * (1.0 + z * (0.5 + z * (1.0 / 6.0 + z / 24.0)));
}

double max_stable_dt(int n, double lambda, double l) {
  if (n < 1) throw InvalidParameter("mode cutoff N must be >= 1");
  if (!(l > 0.0)) throw InvalidParameter("domain factor L must be positive");
  if (lambda == 0.0) return std::numeric_limits<double>::infinity();
  return 2.0 * std::numbers::sqrt2 * l / (std::abs(lambda) * n);
}

double default_dt(int n, const RealField& u0) {
  if (n < 1) throw InvalidParameter("mode cutoff N must be >= 1");
  const double peak = u0.max_abs();
  if (!(peak > 0.0)) throw ZeroFieldError("default time step undefined for a zero initial field");
  return 1.0 / (n * peak);
}

// ---------------------------------------------------------------------------

StepperState integrate(const SpectralField& u0, const StepPolicy& policy,
                       const DiagonalOperator& lambda, NonlinearWorkspace& w,
                       const Observer& observer, const IntegrateOptions& options) {
  policy.validate();

  std::vector<double> landings;
  for (double s : options.stops) {
    if (s > 0.0 && s < policy.t_final) landings.push_back(s);
  }
  std::sort(landings.begin(), landings.end());
  landings.erase(std::unique(landings.begin(), landings.end()), landings.end());
  landings.push_back(policy.t_final);

  StepperState state{0.0, u0};
  if (observer) observer(state);
  if (policy.t_final == 0.0) return state;

  IfRk4Stepper stepper(lambda, w, options.nonlinearity);
  const std::size_t cadence = std::max<std::size_t>(options.observe_every, 1);
  std::size_t index = 0;
  double segment_start = 0.0;
  for (double target : landings) {
    const std::size_t n = step_count(target - segment_start, policy.dt);
    for (std::size_t j = 0; j < n; ++j) {
      const bool last = j + 1 == n;
      const double t_next = last ? target : segment_start + static_cast<double>(j + 1) * policy.dt;
      double h = policy.dt;
      if (last) {
        h = target - (segment_start + static_cast<double>(j) * policy.dt);
        if (std::abs(h - policy.dt) <= 1e-12 * policy.dt) h = policy.dt;
      }
      stepper.step(state, h, index);
      state.t = t_next;
      ++index;
      if (observer && (last || index % cadence == 0)) observer(state);
    }
    segment_start = target;
  }
  return state;
}

}  // namespace fzk
