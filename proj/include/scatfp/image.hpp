#pragma once

#include <filesystem>

#include "scatfp/grid.hpp"

namespace scatfp {

/// Grayscale image with intensities in [0, 1], stored row-major.
class GrayImage {
 public:
  GrayImage() = default;
  /// Throws ArgumentError if any intensity lies outside [0, 1].
  explicit GrayImage(RealGrid pixels);
  GrayImage(int width, int height, double fill);

  int width() const noexcept { return pixels_.width(); }
  int height() const noexcept { return pixels_.height(); }
  double operator()(int y, int x) const { return pixels_(y, x); }
  const RealGrid& pixels() const noexcept { return pixels_; }

  friend bool operator==(const GrayImage&, const GrayImage&) = default;

 private:
  RealGrid pixels_;
};

/// BT.601 luma weights, applied to colour inputs.
inline constexpr double kLumaR = 0.299;
inline constexpr double kLumaG = 0.587;
inline constexpr double kLumaB = 0.114;

/// Bilinear resampling with pixel-centre alignment and edge clamping.
/// Resizing to the source dimensions returns the input unchanged.
GrayImage resize_bilinear(const GrayImage& image, int target_width, int target_height);

/// Decodes PGM (P2/P5, any maxval) natively and other rasters (PNG, BMP, TIFF,
/// JPEG, ...) through OpenCV, converts to luminance, scales by the format's
/// maximum value and resizes to the target geometry.
GrayImage load_image(const std::filesystem::path& path, int target_width, int target_height);

/// Reads an image without resizing.
GrayImage read_image(const std::filesystem::path& path);

/// Writes an 8-bit binary PGM (P5), rounding intensities to the nearest level.
void write_pgm(const std::filesystem::path& path, const GrayImage& image);

/// Circular shift by (dx, dy) pixels; positive values move content right/down.
GrayImage circular_shift(const GrayImage& image, int dx, int dy);

}  // namespace scatfp
