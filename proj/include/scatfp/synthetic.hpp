#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <vector>

#include "scatfp/image.hpp"
#include "scatfp/manifest.hpp"

namespace scatfp {

/// Parameters of a synthetic ridge pattern: parallel ridges at `orientation`
/// (radians) with the given period in pixels, bent parabolically by
/// `curvature` around a core at (core_x, core_y) in image-relative units.
struct RidgeSubject {
  double orientation = 0.0;
  double period = 7.0;
  double curvature = 0.0;
  double core_x = 0.5;
  double core_y = 0.5;
};

/// Per-image perturbations applied when rendering with a random source.
struct RidgeJitter {
  double shift = 4.0;           // max translation of the core, pixels
  double rotation = 0.06;       // max rotation, radians
  double period_scale = 0.03;   // max relative change of the ridge period
  double noise = 0.04;          // standard deviation of additive noise
  double contrast_min = 0.85;   // ridge amplitude scale drawn from [contrast_min, 1]
};

/// `count` subjects with orientations spread over [0, pi), ridge periods
/// spread geometrically over [3, 14] pixels, and random curvatures.
std::vector<RidgeSubject> make_subjects(int count, std::uint64_t seed);

/// Renders the pattern; with a non-null `rng` the jitter is applied.
GrayImage render_ridges(const RidgeSubject& subject, int width, int height, std::mt19937_64* rng = nullptr,
                        const RidgeJitter& jitter = {});

/// Writes `per_subject` jittered PGM images for each of `subjects` subjects
/// into `dir` together with `manifest.tsv` (half/half split). Returns the
/// manifest path.
std::filesystem::path write_synthetic_dataset(const std::filesystem::path& dir, int subjects, int per_subject,
                                              int width, int height, std::uint64_t seed,
                                              const RidgeJitter& jitter = {});

}  // namespace scatfp
