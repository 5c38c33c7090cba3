#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace fzk {

enum class PlanEffort { estimate, measure };

/// Square 2D real-to-complex FFT of size M x M backed by FFTW.
///
/// The real buffer is row-major with the first index along x1. The
/// spectral buffer holds M x (M/2 + 1) half-spectrum entries (FFTW r2c
/// layout), halved along x2. Neither direction is normalized.
///
/// Plan creation goes through a process-wide lock (the FFTW planner is not
/// reentrant); execution touches only this object's buffers, so distinct
/// instances can be used from distinct threads.
class RealFft2d {
 public:
  /// `measure` plans are slower to build and faster to execute.
  explicit RealFft2d(int m, PlanEffort effort = PlanEffort::estimate);
  ~RealFft2d();

  RealFft2d(RealFft2d&& other) noexcept;
  RealFft2d& operator=(RealFft2d&& other) noexcept;
  RealFft2d(const RealFft2d&) = delete;
  RealFft2d& operator=(const RealFft2d&) = delete;

  int size() const noexcept { return m_; }
  int half() const noexcept { return m_ / 2 + 1; }

  std::span<double> real() noexcept { return {real_, real_count()}; }
  std::span<const double> real() const noexcept { return {real_, real_count()}; }
  std::span<std::complex<double>> spectral() noexcept { return {spec_, spec_count()}; }
  std::span<const std::complex<double>> spectral() const noexcept {
    return {spec_, spec_count()};
  }

  /// real() -> spectral(). Leaves real() unspecified.
  void forward();
  /// spectral() -> real(). Destroys spectral().
  void inverse();

 private:
  std::size_t real_count() const noexcept { return static_cast<std::size_t>(m_) * m_; }
  std::size_t spec_count() const noexcept {
    return static_cast<std::size_t>(m_) * static_cast<std::size_t>(half());
  }
  void release() noexcept;

  int m_ = 0;
  double* real_ = nullptr;
  std::complex<double>* spec_ = nullptr;
  void* forward_plan_ = nullptr;
  void* inverse_plan_ = nullptr;
};

}  // namespace fzk
