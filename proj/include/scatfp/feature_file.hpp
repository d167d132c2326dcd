#pragma once

#include <filesystem>
#include <vector>

#include "scatfp/scattering.hpp"

namespace scatfp {

/// Labeled feature vectors together with the transform that produced them.
struct FeatureSet {
  ScatteringParams params;
  std::vector<FeatureVector> features;  // every entry carries a label
};

/// SCF1 file:
///   magic "SCF1"
///   u32 J, L, m, width, height, feature-length, count
///   count x { i32 label, f64 values[feature-length] }
/// All little-endian. Values are (mean, variance) per scattering map,
/// interleaved, maps in canonical path order (layer, then lexicographic
/// (j1, l1, j2, l2, ...)).
void write_features(const std::filesystem::path& path, const FeatureSet& set);
FeatureSet read_features(const std::filesystem::path& path);

/// CSV with a `label` column then one `<path>_mean` / `<path>_var` column pair
/// per map, e.g. `S0_mean`, `j2l1_var`, `j3l0_j1l5_mean`.
void write_features_csv(const std::filesystem::path& path, const FeatureSet& set);

/// Column-name stem for a scattering path.
std::string path_name(const ScatteringPath& path);

}  // namespace scatfp
