#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "fzk/operators.hpp"
#include "fzk/spectral_grid.hpp"

namespace fzk {

struct StepperState {
  double t = 0.0;
  SpectralField u;
};

struct StepPolicy {
  double dt = 0.0;
  double t_final = 0.0;

  /// Throws InvalidParameter unless dt > 0 and t_final >= 0, both finite.
  void validate() const;
};

/// Number of steps of size at most `dt` needed to cover `span`; the last one
/// may be shortened to land exactly on the end.
std::size_t step_count(double span, double dt);

/// Test hook: `disabled` drops N(u) so only the linear flow is integrated.
enum class Nonlinearity { enabled, disabled };

/// exp(h * Lambda(k)) per mode.
DiagonalOperator phase_factor(const DiagonalOperator& lambda, double h);

/// Integrating-factor RK4 with the transform rebased at the start of every
/// step. Caches the half- and full-step phase factors for the last step size
/// used. Not thread-safe; holds a non-owning reference to the workspace.
class IfRk4Stepper {
 public:
  IfRk4Stepper(DiagonalOperator lambda, NonlinearWorkspace& workspace,
               Nonlinearity nonlinearity = Nonlinearity::enabled);

  /// Advances `state` by `dt` in place. Throws NanDetected (with
  /// `step_index`) if any coefficient becomes non-finite.
  void step(StepperState& state, double dt, std::size_t step_index = 0);

  const DiagonalOperator& symbol() const noexcept { return lambda_; }

 private:
  void refresh_phases(double dt);
  void nonlinear(std::span<const Complex> u, std::span<Complex> out, double dt);

  DiagonalOperator lambda_;
  NonlinearWorkspace* workspace_;
  Nonlinearity nonlinearity_;
  double cached_dt_ = 0.0;
  std::vector<Complex> half_phase_;
  std::vector<Complex> full_phase_;
  std::vector<Complex> a1_, a2_, a3_, a4_, stage_;
};

StepperState step(const StepperState& s, double dt, const DiagonalOperator& lambda,
                  NonlinearWorkspace& w, Nonlinearity nonlinearity = Nonlinearity::enabled);

/// RK4 amplification factor 1 + z + z^2/2 + z^3/6 + z^4/24.
Complex stability_function(Complex z);

/// 2*sqrt(2) * L / (|lambda| N): the largest step for which the linearized
/// scheme with advection speed lambda stays on the stable segment of the
/// imaginary axis. Returns +infinity when lambda == 0.
double max_stable_dt(int n, double lambda, double l = 1.0);

/// 1 / (N * max|u0|). Throws ZeroFieldError for an identically zero field.
double default_dt(int n, const RealField& u0);

using Observer = std::function<void(const StepperState&)>;

struct IntegrateOptions {
  /// Observer cadence in steps. The observer also fires at t = 0, at every
  /// stop and at t_final.
  std::size_t observe_every = 100;
  /// Intermediate times landed on exactly (e.g. snapshot times).
  std::vector<double> stops;
  Nonlinearity nonlinearity = Nonlinearity::enabled;
};

/// Advances u0 from t = 0 to policy.t_final with fixed steps, shortening the
/// final step of each segment so that every stop and t_final is hit exactly.
StepperState integrate(const SpectralField& u0, const StepPolicy& policy,
                       const DiagonalOperator& lambda, NonlinearWorkspace& w,
                       const Observer& observer = {}, const IntegrateOptions& options = {});

}  // namespace fzk
