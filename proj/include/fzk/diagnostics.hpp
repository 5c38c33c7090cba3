#pragma once

#include <optional>
#include <span>
#include <vector>

#include "fzk/fft.hpp"
#include "fzk/spectral_grid.hpp"

namespace fzk {

struct InvariantRecord {
  double t = 0.0;
  double mass = 0.0;
  double momentum = 0.0;
  double hamiltonian = 0.0;
};

/// Line soliton 3c sech^2((sqrt(c)/2) [(x - x0 - c t) cos(theta) + (y - y0) sin(theta)]),
/// an exact travelling wave of the alpha = 2 equation.
struct SolitonSpec {
  double c = 1.0;
  double theta = 0.0;
  double x0 = 0.0;
  double y0 = 0.0;

  void validate() const;
  double amplitude() const noexcept { return 3.0 * c; }
};

struct ErrorRow {
  int n = 0;
  double l2_error = 0.0;
  std::optional<double> l2_order;
  double linf_error = 0.0;
  std::optional<double> linf_order;
};

struct ErrorTable {
  std::vector<ErrorRow> rows;
};

/// |Omega| * Re u_hat(0)
double mass(const SpectralField& u);

/// |Omega| * sum_k |u_hat(k)|^2, i.e. the integral of u^2.
double momentum(const SpectralField& u);

/// Alias-free quadrature of the cubic term in the Hamiltonian: u is sampled
/// on a grid of at least 4N+2 points per axis.
class CubicQuadrature {
 public:
  explicit CubicQuadrature(const Discretization& d);

  const Discretization& disc() const noexcept { return disc_; }
  int grid_size() const noexcept { return fft_.size(); }

  /// Integral of u^3 over the domain.
  double integrate_cube(const SpectralField& u);

 private:
  Discretization disc_;
  RealFft2d fft_;
};

/// (1/2) |Omega| sum_k |kappa|^alpha |u_hat|^2 - (1/6) integral(u^3).
double hamiltonian(const SpectralField& u, CubicQuadrature& quad);
double hamiltonian(const SpectralField& u);

InvariantRecord invariants(double t, const SpectralField& u, CubicQuadrature& quad);

/// Samples the soliton at time t on the M x M grid over [-L*pi, L*pi]^2.
/// Coordinates are wrapped periodically about the moving centre. Emits a
/// warning on stderr when the profile has not decayed below 1e-14 at the
/// domain edge.
RealField exact_soliton(const SolitonSpec& spec, double t, int m, double l);

/// Sum of exact_soliton over `specs`.
RealField soliton_superposition(std::span<const SolitonSpec> specs, double t, int m, double l);

/// sqrt(cell_area * sum (a - b)^2). Throws GridMismatch on different grids.
double l2_error(const RealField& a, const RealField& b);
/// max |a - b|
double linf_error(const RealField& a, const RealField& b);

/// Attaches order_i = log2(e_{i-1} / e_i) to every row after the first.
/// Throws NonDoublingSequence unless each N is twice its predecessor.
ErrorTable observed_orders(const ErrorTable& table);

struct Drift {
  double mass = 0.0;
  double momentum = 0.0;
  double hamiltonian = 0.0;
};

inline constexpr double kDriftFloor = 1e-30;

/// max_t |Q(t) - Q(0)| / max(|Q(0)|, kDriftFloor) per invariant.
Drift conservation_drift(std::span<const InvariantRecord> series);

struct Peak {
  double x1 = 0.0;
  double value = 0.0;
};

/// Local maxima of the line above `threshold`, located on an m-point grid
/// and polished with Newton's method on the exact series. Sorted by value,
/// largest first.
std::vector<Peak> find_peaks(const LineSeries& line, int m, double threshold);

}  // namespace fzk
