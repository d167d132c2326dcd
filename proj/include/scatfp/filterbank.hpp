#pragma once

#include <filesystem>
#include <memory>
#include <numbers>
#include <vector>

#include "scatfp/fft.hpp"
#include "scatfp/grid.hpp"

namespace scatfp {

/// Shape parameters of the Morlet band-pass filters and the Gaussian low-pass.
/// Scale j dilates by 2^j: envelope width sigma * 2^j, centre frequency xi / 2^j
/// (radians per pixel). The low-pass at J has width lowpass_sigma * 2^J.
struct MorletConfig {
  double slant = 0.5;
  double sigma = 0.8;
  double xi = 3.0 * std::numbers::pi / 4.0;
  double lowpass_sigma = 0.8;
};

/// J scales x L orientations of zero-mean complex Morlet filters plus one
/// real Gaussian low-pass, all stored as periodised frequency responses of
/// the bank's image geometry. Orientation l is the angle l * pi / L.
class FilterBank {
 public:
  int scales() const noexcept { return scales_; }
  int orientations() const noexcept { return orientations_; }
  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  const MorletConfig& config() const noexcept { return config_; }

  const ComplexGrid& bandpass(int scale, int orientation) const;
  const RealGrid& lowpass() const noexcept { return lowpass_; }
  const Fft2d& fft() const noexcept { return *fft_; }

  double angle(int orientation) const noexcept {
    return orientation * std::numbers::pi / orientations_;
  }

 private:
  friend FilterBank build_filter_bank(int, int, int, int, const MorletConfig&);

  int scales_ = 0;
  int orientations_ = 0;
  int width_ = 0;
  int height_ = 0;
  MorletConfig config_;
  std::vector<ComplexGrid> bandpass_;  // index scale * L + orientation
  RealGrid lowpass_;
  std::shared_ptr<const Fft2d> fft_;
};

/// Requires scales, orientations >= 1 and width, height >= 2^scales.
FilterBank build_filter_bank(int scales, int orientations, int width, int height,
                             const MorletConfig& config = {});

/// Circular convolution of a real map with a frequency-domain filter.
ComplexGrid convolve(const RealGrid& signal, const ComplexGrid& filter_hat);
ComplexGrid convolve(const RealGrid& signal, const RealGrid& filter_hat);

/// Spatial samples of a frequency-domain filter (inverse DFT).
ComplexGrid to_spatial(const ComplexGrid& filter_hat);

/// Writes |filter| in the spatial domain as PGM files, centred and scaled to
/// the filter's peak: psi_j<j>_l<l>.pgm and phi.pgm.
void dump_filters(const FilterBank& bank, const std::filesystem::path& dir);

}  // namespace scatfp
