#include "fzk/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <new>
#include <utility>

#include "fzk/errors.hpp"

namespace fzk {

namespace {

std::mutex& planner_mutex() {
  static std::mutex mutex;
  return mutex;
}

}  // namespace

RealFft2d::RealFft2d(int m, PlanEffort effort) : m_(m) {
  if (m < 1) throw InvalidParameter("FFT size must be positive");

  real_ = static_cast<double*>(fftw_malloc(sizeof(double) * real_count()));
  spec_ = static_cast<std::complex<double>*>(fftw_malloc(sizeof(fftw_complex) * spec_count()));
  if (real_ == nullptr || spec_ == nullptr) {
    release();
    throw std::bad_alloc();
  }

  auto* spec = reinterpret_cast<fftw_complex*>(spec_);
  {
    std::lock_guard lock(planner_mutex());
    const unsigned flags = effort == PlanEffort::measure ? FFTW_MEASURE : FFTW_ESTIMATE;
    forward_plan_ = fftw_plan_dft_r2c_2d(m, m, real_, spec, flags);
    inverse_plan_ = fftw_plan_dft_c2r_2d(m, m, spec, real_, flags);
  }
  if (forward_plan_ == nullptr || inverse_plan_ == nullptr) {
    release();
    throw Error("FFTW failed to create a plan");
  }
}

RealFft2d::~RealFft2d() { release(); }

RealFft2d::RealFft2d(RealFft2d&& other) noexcept
    : m_(std::exchange(other.m_, 0)),
      real_(std::exchange(other.real_, nullptr)),
      spec_(std::exchange(other.spec_, nullptr)),
      forward_plan_(std::exchange(other.forward_plan_, nullptr)),
      inverse_plan_(std::exchange(other.inverse_plan_, nullptr)) {}

RealFft2d& RealFft2d::operator=(RealFft2d&& other) noexcept {
  if (this != &other) {
    release();
    m_ = std::exchange(other.m_, 0);
    real_ = std::exchange(other.real_, nullptr);
    spec_ = std::exchange(other.spec_, nullptr);
    forward_plan_ = std::exchange(other.forward_plan_, nullptr);
    inverse_plan_ = std::exchange(other.inverse_plan_, nullptr);
  }
  return *this;
}

void RealFft2d::forward() { fftw_execute(static_cast<fftw_plan>(forward_plan_)); }

void RealFft2d::inverse() { fftw_execute(static_cast<fftw_plan>(inverse_plan_)); }

void RealFft2d::release() noexcept {
  if (forward_plan_ != nullptr || inverse_plan_ != nullptr) {
    std::lock_guard lock(planner_mutex());
    if (forward_plan_ != nullptr) fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
    if (inverse_plan_ != nullptr) fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
  }
  forward_plan_ = nullptr;
  inverse_plan_ = nullptr;
  if (real_ != nullptr) fftw_free(real_);
  if (spec_ != nullptr) fftw_free(spec_);
  real_ = nullptr;
  spec_ = nullptr;
}

}  // namespace fzk
