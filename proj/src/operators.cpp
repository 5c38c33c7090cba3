#include "fzk/operators.hpp"

#include <algorithm>
#include <cmath>

#include "fzk/errors.hpp"

namespace fzk {

namespace {

int wrap(int k, int m) { return k < 0 ? k + m : k; }

void require_compatible(const Discretization& a, const Discretization& b, const char* what) {
  if (!a.compatible(b)) throw WorkspaceMismatch(what);
}

}  // namespace

DiagonalOperator linear_symbol(const Discretization& d) {
  const WavenumberTable table = wavenumbers(d);
  DiagonalOperator op{d, std::vector<Complex>(d.mode_count())};
  for (std::size_t i = 0; i < op.entries.size(); ++i) {
    op.entries[i] = Complex{0.0, table.kappa1[i] * table.frac_mult[i]};
  }
  return op;
}

NonlinearWorkspace::NonlinearWorkspace(const Discretization& d)
    : disc_(d), padded_(d.m_pad, PlanEffort::measure), kappa1_(wavenumbers(d).kappa1) {
  if (d.m_pad < 3 * d.n + 1) {
    throw InvalidParameter("padded grid too small for an alias-free quadratic product");
  }
}

void NonlinearWorkspace::evaluate(std::span<const Complex> u, std::span<Complex> out) {
  const int n = disc_.n;
  const int m = disc_.m_pad;
  const int half = padded_.half();
  const std::size_t count = disc_.mode_count();
  if (u.size() != count || out.size() != count) {
    throw WorkspaceMismatch("coefficient buffer does not match the workspace resolution");
  }

  auto spec = padded_.spectral();
  std::fill(spec.begin(), spec.end(), Complex{0.0, 0.0});
  for (int k1 = -n; k1 <= n; ++k1) {
    const std::size_t row = static_cast<std::size_t>(wrap(k1, m)) * half;
    for (int k2 = 0; k2 <= n; ++k2) spec[row + k2] = u[disc_.index(k1, k2)];
  }
  padded_.inverse();

  for (double& v : padded_.real()) v *= v;
  padded_.forward();

  // (u*u)(k) = X(k) / M^2; the factor -(1/2) i kappa1 is folded in.
  const double scale = -0.5 / (static_cast<double>(m) * m);
  for (int k1 = -n; k1 <= n; ++k1) {
    const std::size_t row = static_cast<std::size_t>(wrap(k1, m)) * half;
    for (int k2 = 0; k2 <= n; ++k2) {
      if (k2 == 0 && k1 < 0) continue;
      const std::size_t idx = disc_.index(k1, k2);
      const Complex x = spec[row + k2];
      const double f = scale * kappa1_[idx];
      // f * i * x
      const Complex value{-f * x.imag(), f * x.real()};
      out[idx] = value;
      out[disc_.index(-k1, -k2)] = std::conj(value);
    }
  }
  out[disc_.index(0, 0)] = Complex{0.0, 0.0};
}

SpectralField nonlinear_term(const SpectralField& u, NonlinearWorkspace& w) {
  require_compatible(u.disc(), w.disc(), "workspace was built for a different discretization");
  SpectralField out(u.disc());
  w.evaluate(u.coeffs(), out.coeffs());
  return out;
}

SpectralField nonlinear_term_oracle(const SpectralField& u) {
  const int n = u.n();
  if (n > kOracleMaxModes) {
    throw OracleSizeExceeded("brute-force convolution limited to N <= " +
                             std::to_string(kOracleMaxModes) + ", got " + std::to_string(n));
  }
  const double l = u.disc().l;
  SpectralField out(u.disc());
  for (int m1 = -n; m1 <= n; ++m1) {
    for (int m2 = -n; m2 <= n; ++m2) {
      if (m1 == 0) continue;
      Complex sum{0.0, 0.0};
      for (int k1 = std::max(-n, m1 - n); k1 <= std::min(n, m1 + n); ++k1) {
        for (int k2 = std::max(-n, m2 - n); k2 <= std::min(n, m2 + n); ++k2) {
          sum += u.at(k1, k2) * u.at(m1 - k1, m2 - k2);
        }
      }
      out.at(m1, m2) = Complex{0.0, -0.5 * (m1 / l)} * sum;
    }
  }
  return out;
}

SpectralField apply_fractional(const SpectralField& u, double s) {
  if (!(s >= 0.0)) throw InvalidParameter("fractional exponent must be non-negative");
  const WavenumberTable table = wavenumbers(u.disc());
  SpectralField out(u.disc());
  const int n = u.n();
  for (int k1 = -n; k1 <= n; ++k1) {
    for (int k2 = -n; k2 <= n; ++k2) {
      const std::size_t i = u.disc().index(k1, k2);
      const double q2 = table.kappa1[i] * table.kappa1[i] + table.kappa2[i] * table.kappa2[i];
      double mult;
      if (s == 0.0) {
        mult = 1.0;
      } else if (k1 == 0 && k2 == 0) {
        mult = 0.0;
      } else {
        mult = std::pow(q2, s);
      }
      out.at(k1, k2) = u.at(k1, k2) * mult;
    }
  }
  return out;
}

SpectralField rhs(const SpectralField& u, const DiagonalOperator& lambda, NonlinearWorkspace& w) {
  require_compatible(u.disc(), lambda.disc, "operator was built for a different discretization");
  SpectralField out = nonlinear_term(u, w);
  auto dst = out.coeffs();
  const auto src = u.coeffs();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += lambda.entries[i] * src[i];
  out.at(0, 0) = Complex{0.0, 0.0};
  return out;
}

}  // namespace fzk
