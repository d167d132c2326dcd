#pragma once

#include <complex>
#include <memory>
#include <span>

namespace scatfp {

/// 2-D complex DFT of a fixed geometry backed by FFTW. Plans are created
/// once per geometry and shared; execution is thread-safe.
class Fft2d {
 public:
  /// Returns the shared transform for a width x height grid.
  static std::shared_ptr<const Fft2d> for_geometry(int width, int height);

  Fft2d(int width, int height);
  ~Fft2d();
  Fft2d(const Fft2d&) = delete;
  Fft2d& operator=(const Fft2d&) = delete;

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }

  /// Unnormalised forward transform, X[k] = sum_n x[n] exp(-2 pi i k.n / N).
  /// Both directions accept `in` and `out` referring to the same buffer.
  void forward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const;
  /// Inverse transform including the 1/N factor.
  void inverse(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const;

 private:
  struct Plans;
  int width_;
  int height_;
  std::unique_ptr<Plans> plans_;
};

}  // namespace scatfp
