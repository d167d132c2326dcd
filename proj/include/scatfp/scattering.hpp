#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <vector>

#include "scatfp/filterbank.hpp"
#include "scatfp/image.hpp"

namespace scatfp {

/// Sequence of (scale, orientation) pairs identifying one scattering map.
/// Scales strictly decrease along the path: j_k < ... < j_1 < J.
/// Paths order by layer, then lexicographically over (j_1, l_1, j_2, l_2, ...).
struct ScatteringPath {
  std::vector<int> scales;
  std::vector<int> orientations;

  int layer() const noexcept { return static_cast<int>(scales.size()); }

  friend bool operator==(const ScatteringPath&, const ScatteringPath&) = default;
  friend std::strong_ordering operator<=>(const ScatteringPath& a, const ScatteringPath& b);
};

struct ScatteringParams {
  int scales = 5;
  int orientations = 6;
  int max_layer = 2;
  int width = 80;
  int height = 60;

  friend bool operator==(const ScatteringParams&, const ScatteringParams&) = default;
};

struct ScatteringMap {
  ScatteringPath path;
  RealGrid values;
};

/// All maps of a transform in canonical path order.
struct ScatteringResult {
  ScatteringParams params;
  std::vector<ScatteringMap> maps;
};

/// Pooled per-image descriptor: (mean, variance) of every map, interleaved,
/// in canonical path order.
struct FeatureVector {
  std::vector<double> values;
  std::optional<int> label;
};

/// sum_{k=0}^{m} L^k C(J, k). Throws ArgumentError when m > J or m < 0.
std::size_t path_count(int scales, int orientations, int max_layer);

/// Every path up to max_layer in canonical order.
std::vector<ScatteringPath> enumerate_paths(int scales, int orientations, int max_layer);

/// Layer 0 is f * phi; layer k is | ... |f * psi_{j1,l1}| * ... * psi_{jk,lk}| * phi
/// with j_k < ... < j_1. Maps are kept at full resolution.
ScatteringResult scatter(const GrayImage& image, const FilterBank& bank, int max_layer);

/// Mean and population variance of every map.
FeatureVector pool_features(const ScatteringResult& result);

/// scatter followed by pool_features.
FeatureVector extract_features(const GrayImage& image, const FilterBank& bank, int max_layer);

}  // namespace scatfp
