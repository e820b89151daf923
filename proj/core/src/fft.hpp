#pragma once

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <memory>
#include <mutex>
#include <vector>

namespace chisq::detail {

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

template <class T>
using FftwBuffer = std::unique_ptr<T[], FftwFree>;

template <class T>
FftwBuffer<T> fftw_alloc(std::size_t n) {
  return FftwBuffer<T>(static_cast<T*>(fftw_malloc(sizeof(T) * n)));
}

// Real <-> half-complex transforms on an n^3 periodic grid, unnormalized in
// both directions. Plans are made with FFTW_ESTIMATE so that the chosen
// algorithm, and therefore the rounding, never depends on timing.
class RealFft3 {
 public:
  explicit RealFft3(std::size_t n) : n_(n) {
    std::lock_guard<std::mutex> lock(planner_mutex());
    auto r = fftw_alloc<double>(real_size());
    auto c = fftw_alloc<fftw_complex>(complex_size());
    const int ni = static_cast<int>(n);
    forward_ = fftw_plan_dft_r2c_3d(ni, ni, ni, r.get(), c.get(), FFTW_ESTIMATE);
    backward_ = fftw_plan_dft_c2r_3d(ni, ni, ni, c.get(), r.get(), FFTW_ESTIMATE);
  }
  ~RealFft3() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
  }
  RealFft3(const RealFft3&) = delete;
  RealFft3& operator=(const RealFft3&) = delete;

  std::size_t n() const { return n_; }
  std::size_t real_size() const { return n_ * n_ * n_; }
  std::size_t complex_size() const { return n_ * n_ * (n_ / 2 + 1); }

  void forward(double* in, fftw_complex* out) const { fftw_execute_dft_r2c(forward_, in, out); }
  // Destroys `in`.
  void backward(fftw_complex* in, double* out) const { fftw_execute_dft_c2r(backward_, in, out); }

  // Signed integer wavenumber of index i along a full axis.
  long wave(std::size_t i) const { return i <= n_ / 2 ? static_cast<long>(i) : static_cast<long>(i) - static_cast<long>(n_); }

 private:
  static std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
  }
  std::size_t n_;
  fftw_plan forward_;
  fftw_plan backward_;
};

}  // namespace chisq::detail
