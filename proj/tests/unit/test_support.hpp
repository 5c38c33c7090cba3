#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "fzk/experiment.hpp"
#include "fzk/operators.hpp"
#include "fzk/spectral_grid.hpp"

namespace fzk::testing {

inline constexpr double kPi = std::numbers::pi;

inline double max_abs_diff(const SpectralField& a, const SpectralField& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.coeffs().size(); ++i) {
    worst = std::max(worst, std::abs(a.coeffs()[i] - b.coeffs()[i]));
  }
  return worst;
}

inline double max_abs_diff(const RealField& a, const RealField& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i) {
    worst = std::max(worst, std::abs(a.values()[i] - b.values()[i]));
  }
  return worst;
}

/// cos(k x1 / L) as coefficients: 1/2 at (+-k, 0).
inline SpectralField cosine_field(const Discretization& d, int k) {
  SpectralField u(d);
  u.at(k, 0) = 0.5;
  u.at(-k, 0) = 0.5;
  return u;
}

/// Trapezoidal quadrature of f^2 on a grid of m points, computed straight
/// from the samples.
inline double grid_integral_of_square(const SpectralField& u, int m) {
  const RealField f = inverse_transform(u, m);
  double sum = 0.0;
  for (double v : f.values()) sum += v * v;
  return sum * f.cell_area();
}

/// Classical RK4 on the full (stiff) coefficient system du/dt = rhs(u).
/// Independent of the integrating-factor path; needs tiny steps.
inline SpectralField classical_rk4(SpectralField u, double t_span, int steps, const DiagonalOperator& lambda,
                                   NonlinearWorkspace& w) {
  const double h = t_span / steps;
  auto axpy = [](const SpectralField& x, double a, const SpectralField& y) {
    SpectralField out = x;
    for (std::size_t i = 0; i < out.coeffs().size(); ++i) out.coeffs()[i] += a * y.coeffs()[i];
    return out;
  };
  for (int s = 0; s < steps; ++s) {
    const SpectralField k1 = rhs(u, lambda, w);
    const SpectralField k2 = rhs(axpy(u, h / 2, k1), lambda, w);
    const SpectralField k3 = rhs(axpy(u, h / 2, k2), lambda, w);
    const SpectralField k4 = rhs(axpy(u, h, k3), lambda, w);
    for (std::size_t i = 0; i < u.coeffs().size(); ++i) {
      u.coeffs()[i] += h / 6 * (k1.coeffs()[i] + 2.0 * k2.coeffs()[i] + 2.0 * k3.coeffs()[i] + k4.coeffs()[i]);
    }
  }
  return u;
}

}  // namespace fzk::testing
