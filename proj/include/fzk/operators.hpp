#pragma once

#include <span>
#include <vector>

#include "fzk/fft.hpp"
#include "fzk/spectral_grid.hpp"

namespace fzk {

/// Per-mode multiplier, stored in the same dense layout as SpectralField.
struct DiagonalOperator {
  Discretization disc;
  std::vector<Complex> entries;

  const Complex& at(int k1, int k2) const { return entries[disc.index(k1, k2)]; }
};

/// Dispersion symbol Lambda(k) = i kappa1 |kappa|^alpha, the Fourier symbol of
/// d/dx1 (-Delta)^(alpha/2). Purely imaginary, zero whenever k1 = 0.
DiagonalOperator linear_symbol(const Discretization& d);

/// Scratch space for the dealiased quadratic product: a padded M_pad x M_pad
/// FFT pair plus the kappa1 table. One workspace per evaluation stream.
class NonlinearWorkspace {
 public:
  explicit NonlinearWorkspace(const Discretization& d);

  const Discretization& disc() const noexcept { return disc_; }

  /// out <- -(1/2) i kappa1 * P_N[(u*u)], the Galerkin truncation of
  /// -(1/2) d/dx1 (u^2). Both spans use the dense SpectralField layout; `u`
  /// must be Hermitian. out((0,0)) is exactly zero.
  void evaluate(std::span<const Complex> u, std::span<Complex> out);

 private:
  Discretization disc_;
  RealFft2d padded_;
  std::vector<double> kappa1_;
};

SpectralField nonlinear_term(const SpectralField& u, NonlinearWorkspace& w);

/// Brute-force O(N^4) evaluation of the truncated convolution sum, with the
/// same contract as nonlinear_term. Refuses N > 16.
SpectralField nonlinear_term_oracle(const SpectralField& u);

inline constexpr int kOracleMaxModes = 16;

/// (-Delta)^s: multiplies mode k by |kappa|^(2s). 0^0 is taken as 1, so s = 0
/// is the identity.
SpectralField apply_fractional(const SpectralField& u, double s);

/// Full Galerkin right-hand side Lambda u + N(u).
SpectralField rhs(const SpectralField& u, const DiagonalOperator& lambda, NonlinearWorkspace& w);

}  // namespace fzk
