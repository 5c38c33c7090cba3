#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace fzk {

using Complex = std::complex<double>;

/// Resolution and domain parameters for the periodic square
/// [-L*pi, L*pi]^2. Retained modes are |k|_inf <= n; wavenumbers are
/// scaled as kappa = k / L.
struct Discretization {
  int n = 0;
  double l = 1.0;
  double alpha = 2.0;
  /// Solution grid, >= 2n+1 points per axis.
  int m_phys = 0;
  /// Dealiasing grid for quadratic products, >= 3n+1 points per axis.
  int m_pad = 0;
  std::vector<std::string> warnings;

  int modes_per_axis() const noexcept { return 2 * n + 1; }
  std::size_t mode_count() const noexcept {
    return static_cast<std::size_t>(modes_per_axis()) * modes_per_axis();
  }
  double domain_width() const noexcept;
  double domain_area() const noexcept;

  std::size_t index(int k1, int k2) const noexcept {
    return static_cast<std::size_t>(k1 + n) * static_cast<std::size_t>(modes_per_axis()) +
           static_cast<std::size_t>(k2 + n);
  }

  /// Same resolution, domain and order. Warnings are not compared.
  bool compatible(const Discretization& other) const noexcept {
    return n == other.n && l == other.l && alpha == other.alpha && m_phys == other.m_phys &&
           m_pad == other.m_pad;
  }
};

/// Smallest integer >= `minimum` whose only prime factors are 2, 3 and 5.
int next_smooth_size(int minimum);

/// Throws InvalidParameter unless n >= 1, l > 0 and alpha in (0, 2].
Discretization build_discretization(int n, double l, double alpha);

struct WavenumberTable {
  int n = 0;
  std::vector<double> kappa1;
  std::vector<double> kappa2;
  /// |kappa|^alpha
  std::vector<double> frac_mult;
};

WavenumberTable wavenumbers(const Discretization& d);

/// Fourier coefficients u_hat(k), |k|_inf <= n, stored densely as a
/// (2n+1)^2 array with k1 as the slow index. Represents the real field
/// sum_k u_hat(k) exp(i k.x / L).
class SpectralField {
 public:
  SpectralField() = default;
  explicit SpectralField(Discretization d);

  const Discretization& disc() const noexcept { return disc_; }
  int n() const noexcept { return disc_.n; }

  Complex& at(int k1, int k2) { return coeffs_[disc_.index(k1, k2)]; }
  const Complex& at(int k1, int k2) const { return coeffs_[disc_.index(k1, k2)]; }

  std::span<Complex> coeffs() noexcept { return coeffs_; }
  std::span<const Complex> coeffs() const noexcept { return coeffs_; }

  /// Replaces each pair by u(k) <- (u(k) + conj(u(-k))) / 2, so the zero
  /// mode loses its imaginary part.
  void enforce_hermitian() noexcept;
  /// max_k |u(k) - conj(u(-k))|
  double hermitian_defect() const noexcept;
  /// sqrt(sum_k |u(k)|^2)
  double coeff_norm() const noexcept;

 private:
  Discretization disc_;
  std::vector<Complex> coeffs_;
};

/// Real samples on the uniform M x M grid x_j = -L*pi + j * 2*pi*L / M,
/// row-major with the first index along x1.
class RealField {
 public:
  RealField() = default;
  RealField(int m, double l);
  RealField(int m, double l, std::vector<double> values);

  int m() const noexcept { return m_; }
  double l() const noexcept { return l_; }
  double spacing() const noexcept;
  double cell_area() const noexcept { return spacing() * spacing(); }
  /// Coordinate of grid line j along either axis.
  double coordinate(int j) const noexcept;

  double& at(int i1, int i2) { return values_[static_cast<std::size_t>(i1) * m_ + i2]; }
  double at(int i1, int i2) const { return values_[static_cast<std::size_t>(i1) * m_ + i2]; }

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }

  double max_abs() const noexcept;
  bool all_finite() const noexcept;

 private:
  int m_ = 0;
  double l_ = 1.0;
  std::vector<double> values_;
};

/// Coefficients of the trigonometric interpolant of `f`, truncated to
/// |k|_inf <= d.n, with Hermitian symmetry enforced. Requires f.m() >= 2n+1
/// and f.l() == d.l.
SpectralField forward_transform(const RealField& f, const Discretization& d);

/// Samples the real part of sum_k u_hat(k) exp(i k.x / L) on an M x M grid.
/// Requires m >= 2n+1.
RealField inverse_transform(const SpectralField& s, int m);

/// Zero-pads or truncates `s` onto the modes of `target` (same L required).
SpectralField resample(const SpectralField& s, const Discretization& target);

/// One-dimensional restriction u(x1, x2 = const) as a trigonometric series in
/// x1. Exact; no grid is involved.
class LineSeries {
 public:
  LineSeries(const SpectralField& s, double x2);

  double l() const noexcept { return l_; }

  double value(double x1) const noexcept;
  double derivative(double x1) const noexcept;
  double second_derivative(double x1) const noexcept;
  /// Samples at x1_j = -L*pi + j * 2*pi*L / m.
  std::vector<double> sample(int m) const;

 private:
  // value(x) = Re sum_{k=-n..n} coeffs_[k+n] exp(i k x / L)
  int n_;
  double l_;
  std::vector<Complex> coeffs_;
};

}  // namespace fzk
