#include "fzk/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numbers>

#include "fzk/errors.hpp"

namespace fzk {

namespace {

constexpr double kPi = std::numbers::pi;

int wrap_index(int k, int m) { return k < 0 ? k + m : k; }

// Maps d into [-w/2, w/2).
double wrap_periodic(double d, double w) { return d - w * std::floor(d / w + 0.5); }

void require_same_grid(const RealField& a, const RealField& b) {
  if (a.m() != b.m() || a.l() != b.l()) throw GridMismatch("fields live on different grids");
}

}  // namespace

void SolitonSpec::validate() const {
  if (!(c > 0.0) || !std::isfinite(c)) throw InvalidParameter("soliton speed c must be positive");
  if (!std::isfinite(theta) || !std::isfinite(x0) || !std::isfinite(y0)) {
    throw InvalidParameter("soliton angle and centre must be finite");
  }
}

double mass(const SpectralField& u) { return u.disc().domain_area() * u.at(0, 0).real(); }

double momentum(const SpectralField& u) {
  double sum = 0.0;
  for (const Complex& c : u.coeffs()) sum += std::norm(c);
  return u.disc().domain_area() * sum;
}

CubicQuadrature::CubicQuadrature(const Discretization& d)
    : disc_(d), fft_(next_smooth_size(4 * d.n + 2)) {}

double CubicQuadrature::integrate_cube(const SpectralField& u) {
  if (!u.disc().compatible(disc_)) throw WorkspaceMismatch("quadrature built for another discretization");
  const int n = disc_.n;
  const int m = fft_.size();
  const int half = fft_.half();
  auto spec = fft_.spectral();
  std::fill(spec.begin(), spec.end(), Complex{0.0, 0.0});
  // The integral is translation invariant, so the grid offset is irrelevant.
  for (int k1 = -n; k1 <= n; ++k1) {
    for (int k2 = 0; k2 <= n; ++k2) {
      spec[static_cast<std::size_t>(wrap_index(k1, m)) * half + k2] = u.at(k1, k2);
    }
  }
  fft_.inverse();
  double sum = 0.0;
  for (double v : fft_.real()) sum += v * v * v;
  const double h = disc_.domain_width() / m;
  return sum * h * h;
}

double hamiltonian(const SpectralField& u, CubicQuadrature& quad) {
  const WavenumberTable table = wavenumbers(u.disc());
  const auto c = u.coeffs();
  double quadratic = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) quadratic += table.frac_mult[i] * std::norm(c[i]);
  quadratic *= 0.5 * u.disc().domain_area();
  return quadratic - quad.integrate_cube(u) / 6.0;
}

double hamiltonian(const SpectralField& u) {
  CubicQuadrature quad(u.disc());
  return hamiltonian(u, quad);
}

InvariantRecord invariants(double t, const SpectralField& u, CubicQuadrature& quad) {
  return InvariantRecord{t, mass(u), momentum(u), hamiltonian(u, quad)};
}

RealField exact_soliton(const SolitonSpec& spec, double t, int m, double l) {
  spec.validate();
  const double half_width = kPi * l;
  const double k = 0.5 * std::sqrt(spec.c);
  const double edge = spec.amplitude() / std::pow(std::cosh(k * half_width), 2);
  if (edge > 1e-14) {
    std::cerr << "warning: soliton with c = " << spec.c << " has not decayed at the domain edge ("
              << edge << ")\n";
  }

  RealField f(m, l);
  const double width = 2.0 * half_width;
  const double ct = std::cos(spec.theta);
  const double st = std::sin(spec.theta);
  for (int i1 = 0; i1 < m; ++i1) {
    const double dx = wrap_periodic(f.coordinate(i1) - spec.x0 - spec.c * t, width);
    for (int i2 = 0; i2 < m; ++i2) {
      const double dy = wrap_periodic(f.coordinate(i2) - spec.y0, width);
      const double ch = std::cosh(k * (dx * ct + dy * st));
      f.at(i1, i2) = spec.amplitude() / (ch * ch);
    }
  }
  return f;
}

RealField soliton_superposition(std::span<const SolitonSpec> specs, double t, int m, double l) {
  RealField sum(m, l);
  for (const SolitonSpec& s : specs) {
    const RealField one = exact_soliton(s, t, m, l);
    auto dst = sum.values();
    const auto src = one.values();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
  }
  return sum;
}

double l2_error(const RealField& a, const RealField& b) {
  require_same_grid(a, b);
  const auto va = a.values();
  const auto vb = b.values();
  double sum = 0.0;
  for (std::size_t i = 0; i < va.size(); ++i) {
    const double d = va[i] - vb[i];
    sum += d * d;
  }
  return std::sqrt(a.cell_area() * sum);
}

double linf_error(const RealField& a, const RealField& b) {
  require_same_grid(a, b);
  const auto va = a.values();
  const auto vb = b.values();
  double worst = 0.0;
  for (std::size_t i = 0; i < va.size(); ++i) worst = std::max(worst, std::abs(va[i] - vb[i]));
  return worst;
}

ErrorTable observed_orders(const ErrorTable& table) {
  ErrorTable out = table;
  for (std::size_t i = 0; i < out.rows.size(); ++i) {
    ErrorRow& row = out.rows[i];
    if (i == 0) {
      row.l2_order.reset();
      row.linf_order.reset();
      continue;
    }
    const ErrorRow& prev = out.rows[i - 1];
    if (row.n != 2 * prev.n) {
      throw NonDoublingSequence("resolution " + std::to_string(row.n) + " does not double " +
                                std::to_string(prev.n));
    }
    row.l2_order = std::log2(prev.l2_error / row.l2_error);
    row.linf_order = std::log2(prev.linf_error / row.linf_error);
  }
  return out;
}

Drift conservation_drift(std::span<const InvariantRecord> series) {
  if (series.empty()) throw PreconditionError("conservation drift needs at least one record");
  const InvariantRecord& first = series.front();
  auto rel = [](double q, double q0) { return std::abs(q - q0) / std::max(std::abs(q0), kDriftFloor); };
  Drift d;
  for (const InvariantRecord& r : series) {
    d.mass = std::max(d.mass, rel(r.mass, first.mass));
    d.momentum = std::max(d.momentum, rel(r.momentum, first.momentum));
    d.hamiltonian = std::max(d.hamiltonian, rel(r.hamiltonian, first.hamiltonian));
  }
  return d;
}

std::vector<Peak> find_peaks(const LineSeries& line, int m, double threshold) {
  std::vector<Peak> peaks;
  if (m < 3) return peaks;
  const std::vector<double> v = line.sample(m);
  const double width = 2.0 * kPi * line.l();
  const double h = width / m;

  for (int j = 0; j < m; ++j) {
    const double left = v[static_cast<std::size_t>((j + m - 1) % m)];
    const double right = v[static_cast<std::size_t>((j + 1) % m)];
    const double here = v[static_cast<std::size_t>(j)];
    if (here < threshold || here < left || here <= right) continue;

    const double x_grid = -kPi * line.l() + j * h;
    double x = x_grid;
    for (int iter = 0; iter < 30; ++iter) {
      const double d2 = line.second_derivative(x);
      if (!(d2 < 0.0)) break;
      const double dx = -line.derivative(x) / d2;
      x += dx;
      if (std::abs(x - x_grid) > h) {
        x = x_grid;
        break;
      }
      if (std::abs(dx) < 1e-13 * width) break;
    }
    peaks.push_back(Peak{wrap_periodic(x, width), line.value(x)});
  }
  std::sort(peaks.begin(), peaks.end(), [](const Peak& a, const Peak& b) { return a.value > b.value; });
  return peaks;
}

}  // namespace fzk
