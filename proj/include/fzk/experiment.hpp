#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "fzk/diagnostics.hpp"
#include "fzk/spectral_grid.hpp"
#include "fzk/time_stepper.hpp"

namespace fzk {

/// amp * cos((k1 x1 + k2 x2) / L + phase)
struct CosineMode {
  double amp = 1.0;
  int k1 = 1;
  int k2 = 0;
  double phase = 0.0;
};

struct ConstantField {
  double value = 0.0;
};

/// Seeded random Hermitian field with |u_hat(k)| = amp (1 + |k|^2)^-2.
struct RandomField {
  double amp = 1.0;
};

/// Terms of the initial condition; the run starts from their sum. An empty
/// list is the zero field.
using InitialTerm = std::variant<SolitonSpec, CosineMode, ConstantField, RandomField>;

struct RunConfig {
  int n = 0;
  double l = 1.0;
  double alpha = 2.0;
  /// nullopt = 1 / (N max|u0|)
  std::optional<double> dt;
  double t_final = 0.0;
  std::vector<InitialTerm> ic;
  std::size_t observe_every = 100;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
};

struct RunOptions {
  /// Landed on exactly; the full field is kept at each.
  std::vector<double> snapshot_times;
  Nonlinearity nonlinearity = Nonlinearity::enabled;
};

struct Snapshot {
  double t = 0.0;
  SpectralField u;
  RealField field;
};

struct RunResult {
  RunConfig config;
  Discretization disc;
  double dt = 0.0;
  StepperState final_state;
  std::vector<InvariantRecord> invariants;
  std::vector<Snapshot> snapshots;
  /// Wall-clock seconds per phase ("setup", "integrate").
  std::map<std::string, double> timings;
};

SpectralField random_hermitian_field(const Discretization& d, std::uint64_t seed, double amp = 1.0);

/// The initial condition sampled on the M_phys grid of `d`.
RealField sample_initial_condition(const RunConfig& cfg, const Discretization& d);

/// Projects the initial data onto the retained modes and integrates to
/// t_final, recording invariants at the configured cadence.
RunResult run_simulation(const RunConfig& cfg, const RunOptions& options = {});

/// u(x1, x2 = 0) on the m-point x1 grid.
std::vector<double> cross_section(const SpectralField& u, int m);

enum class ReferenceKind { exact_soliton, finest_resolution };

struct ConvergenceReport {
  ErrorTable table;
  ReferenceKind reference = ReferenceKind::exact_soliton;
};

/// Runs `base` at every N in `ns` (each double the previous). With alpha = 2
/// and a single-soliton initial condition, errors are measured against the
/// exact solution at t_final on each run's solution grid; otherwise against
/// the run at the largest N, which is then dropped from the table.
ConvergenceReport convergence_study(const RunConfig& base, std::span<const int> ns);

struct TemporalOrderRow {
  double dt = 0.0;
  double error = 0.0;
  std::optional<double> order;
};

/// Self-convergence in time: every dt but the smallest is compared (L2 on
/// the solution grid) with the run at the smallest dt. dts must halve
/// successively.
std::vector<TemporalOrderRow> temporal_order_study(const RunConfig& cfg, std::span<const double> dts);

struct InteractionRun {
  double alpha = 2.0;
  RunResult result;
};

inline const std::vector<double> kInteractionAlphas{1.2, 1.5, 1.9, 2.0};

/// Runs a multi-soliton configuration once per alpha, keeping snapshots at
/// `snapshot_times`. Results follow the order of `alphas`.
std::vector<InteractionRun> soliton_interaction_study(const RunConfig& cfg, std::span<const double> alphas,
                                                      std::span<const double> snapshot_times);

/// Max |nonlinear_term - nonlinear_term_oracle| over `trials` random fields
/// for each N = 2, 4, ... up to nmax (and nmax itself).
double oracle_check(int nmax, int trials, std::uint64_t seed);

}  // namespace fzk
