#include "fzk/spectral_grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "fzk/errors.hpp"
#include "fzk/fft.hpp"

namespace fzk {

namespace {

constexpr double kPi = std::numbers::pi;

bool is_smooth(int v) {
  for (int p : {2, 3, 5}) {
    while (v % p == 0) v /= p;
  }
  return v == 1;
}

int wrap(int k, int m) { return k < 0 ? k + m : k; }

// (-1)^(k1+k2): the grid starts at -L*pi rather than 0.
double grid_sign(int k1, int k2) { return ((k1 + k2) & 1) != 0 ? -1.0 : 1.0; }

}  // namespace

double Discretization::domain_width() const noexcept { return 2.0 * kPi * l; }

double Discretization::domain_area() const noexcept { return domain_width() * domain_width(); }

int next_smooth_size(int minimum) {
  int v = std::max(minimum, 1);
  while (!is_smooth(v)) ++v;
  return v;
}

Discretization build_discretization(int n, double l, double alpha) {
  if (n < 1) throw InvalidParameter("mode cutoff N must be >= 1, got " + std::to_string(n));
  if (!(l > 0.0) || !std::isfinite(l)) {
    throw InvalidParameter("domain factor L must be positive and finite");
  }
  if (!(alpha > 0.0 && alpha <= 2.0)) {
    throw InvalidParameter("fractional order alpha must lie in (0, 2], got " +
                           std::to_string(alpha));
  }

  Discretization d;
  d.n = n;
  d.l = l;
  d.alpha = alpha;
  d.m_phys = next_smooth_size(2 * n + 2);
  d.m_pad = next_smooth_size(3 * n + 2);
  if (alpha < 1.0) {
    d.warnings.push_back("alpha = " + std::to_string(alpha) +
                         " lies outside the analysed range [1, 2]");
  }
  return d;
}

WavenumberTable wavenumbers(const Discretization& d) {
  WavenumberTable table;
  table.n = d.n;
  const std::size_t count = d.mode_count();
  table.kappa1.resize(count);
  table.kappa2.resize(count);
  table.frac_mult.resize(count);
  for (int k1 = -d.n; k1 <= d.n; ++k1) {
    for (int k2 = -d.n; k2 <= d.n; ++k2) {
      const std::size_t idx = d.index(k1, k2);
      const double q1 = k1 / d.l;
      const double q2 = k2 / d.l;
      table.kappa1[idx] = q1;
      table.kappa2[idx] = q2;
      // |kappa|^alpha with |kappa|^2 = q1^2 + q2^2; exactly 0 at the origin.
      table.frac_mult[idx] = (k1 == 0 && k2 == 0) ? 0.0 : std::pow(q1 * q1 + q2 * q2, 0.5 * d.alpha);
    }
  }
  return table;
}

// ---------------------------------------------------------------------------
// SpectralField

SpectralField::SpectralField(Discretization d)
    : disc_(std::move(d)), coeffs_(disc_.mode_count(), Complex{0.0, 0.0}) {}

void SpectralField::enforce_hermitian() noexcept {
  const int n = disc_.n;
  for (int k1 = -n; k1 <= n; ++k1) {
    for (int k2 = -n; k2 <= n; ++k2) {
      const std::size_t i = disc_.index(k1, k2);
      const std::size_t j = disc_.index(-k1, -k2);
      if (j < i) continue;
      const Complex avg = 0.5 * (coeffs_[i] + std::conj(coeffs_[j]));
      coeffs_[i] = avg;
      coeffs_[j] = std::conj(avg);
    }
  }
}

double SpectralField::hermitian_defect() const noexcept {
  const int n = disc_.n;
  double worst = 0.0;
  for (int k1 = -n; k1 <= n; ++k1) {
    for (int k2 = -n; k2 <= n; ++k2) {
      worst = std::max(worst, std::abs(at(k1, k2) - std::conj(at(-k1, -k2))));
    }
  }
  return worst;
}

double SpectralField::coeff_norm() const noexcept {
  double sum = 0.0;
  for (const Complex& c : coeffs_) sum += std::norm(c);
  return std::sqrt(sum);
}

// ---------------------------------------------------------------------------
// RealField

RealField::RealField(int m, double l)
    : m_(m), l_(l), values_(static_cast<std::size_t>(m) * static_cast<std::size_t>(m), 0.0) {
  if (m < 1) throw InvalidParameter("grid size must be positive");
}

RealField::RealField(int m, double l, std::vector<double> values)
    : m_(m), l_(l), values_(std::move(values)) {
  if (m < 1) throw InvalidParameter("grid size must be positive");
  if (values_.size() != static_cast<std::size_t>(m) * static_cast<std::size_t>(m)) {
    throw GridMismatch("value count does not match an M x M grid");
  }
}

double RealField::spacing() const noexcept { return 2.0 * kPi * l_ / m_; }

double RealField::coordinate(int j) const noexcept { return -kPi * l_ + j * spacing(); }

double RealField::max_abs() const noexcept {
  double worst = 0.0;
  for (double v : values_) worst = std::max(worst, std::abs(v));
  return worst;
}

bool RealField::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

// ---------------------------------------------------------------------------
// Transforms

SpectralField forward_transform(const RealField& f, const Discretization& d) {
  const int m = f.m();
  if (m < 2 * d.n + 1) {
    throw ResolutionMismatch("grid of " + std::to_string(m) + " points cannot carry modes up to N = " +
                             std::to_string(d.n));
  }
  if (f.l() != d.l) throw ResolutionMismatch("grid and discretization use different domains");

  RealFft2d fft(m);
  std::copy(f.values().begin(), f.values().end(), fft.real().begin());
  fft.forward();

  const auto spec = fft.spectral();
  const int half = fft.half();
  const double scale = 1.0 / (static_cast<double>(m) * m);

  SpectralField s(d);
  for (int k1 = -d.n; k1 <= d.n; ++k1) {
    for (int k2 = -d.n; k2 <= d.n; ++k2) {
      Complex x;
      if (k2 >= 0) {
        x = spec[static_cast<std::size_t>(wrap(k1, m)) * half + k2];
      } else {
        x = std::conj(spec[static_cast<std::size_t>(wrap(-k1, m)) * half + (-k2)]);
      }
      s.at(k1, k2) = x * (scale * grid_sign(k1, k2));
    }
  }
  s.enforce_hermitian();
  return s;
}

RealField inverse_transform(const SpectralField& s, int m) {
  const int n = s.n();
  if (m < 2 * n + 1) {
    throw ResolutionMismatch("grid of " + std::to_string(m) + " points cannot carry modes up to N = " +
                             std::to_string(n));
  }

  RealFft2d fft(m);
  auto spec = fft.spectral();
  std::fill(spec.begin(), spec.end(), Complex{0.0, 0.0});
  const int half = fft.half();
  for (int k1 = -n; k1 <= n; ++k1) {
    for (int k2 = 0; k2 <= n; ++k2) {
      // Hermitian part only: the imaginary residue of the synthesis is dropped.
      const Complex c = 0.5 * (s.at(k1, k2) + std::conj(s.at(-k1, -k2)));
      spec[static_cast<std::size_t>(wrap(k1, m)) * half + k2] = c * grid_sign(k1, k2);
    }
  }
  fft.inverse();

  RealField f(m, s.disc().l);
  std::copy(fft.real().begin(), fft.real().end(), f.values().begin());
  return f;
}

SpectralField resample(const SpectralField& s, const Discretization& target) {
  if (s.disc().l != target.l) throw ResolutionMismatch("resample across different domains");
  SpectralField out(target);
  const int n = std::min(s.n(), target.n);
  for (int k1 = -n; k1 <= n; ++k1) {
    for (int k2 = -n; k2 <= n; ++k2) out.at(k1, k2) = s.at(k1, k2);
  }
  return out;
}

// ---------------------------------------------------------------------------
// LineSeries

LineSeries::LineSeries(const SpectralField& s, double x2)
    : n_(s.n()), l_(s.disc().l), coeffs_(static_cast<std::size_t>(2 * s.n() + 1)) {
  for (int k1 = -n_; k1 <= n_; ++k1) {
    Complex sum{0.0, 0.0};
    for (int k2 = -n_; k2 <= n_; ++k2) {
      sum += s.at(k1, k2) * std::polar(1.0, k2 * x2 / l_);
    }
    coeffs_[static_cast<std::size_t>(k1 + n_)] = sum;
  }
}

double LineSeries::value(double x1) const noexcept {
  double sum = 0.0;
  for (int k = -n_; k <= n_; ++k) {
    sum += (coeffs_[static_cast<std::size_t>(k + n_)] * std::polar(1.0, k * x1 / l_)).real();
  }
  return sum;
}

double LineSeries::derivative(double x1) const noexcept {
  double sum = 0.0;
  for (int k = -n_; k <= n_; ++k) {
    const Complex ik{0.0, k / l_};
    sum += (ik * coeffs_[static_cast<std::size_t>(k + n_)] * std::polar(1.0, k * x1 / l_)).real();
  }
  return sum;
}

double LineSeries::second_derivative(double x1) const noexcept {
  double sum = 0.0;
  for (int k = -n_; k <= n_; ++k) {
    const double q = k / l_;
    sum -= q * q * (coeffs_[static_cast<std::size_t>(k + n_)] * std::polar(1.0, k * x1 / l_)).real();
  }
  return sum;
}

std::vector<double> LineSeries::sample(int m) const {
  std::vector<double> out(static_cast<std::size_t>(m));
  const double h = 2.0 * kPi * l_ / m;
  for (int j = 0; j < m; ++j) out[static_cast<std::size_t>(j)] = value(-kPi * l_ + j * h);
  return out;
}

}  // namespace fzk
