#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "scatfp/eval.hpp"
#include "scatfp/pca.hpp"
#include "scatfp/scattering.hpp"

namespace scatfp {

enum class OutputFormat { kCsv, kSvg, kBoth };

inline constexpr int kDefaultPcaK = 200;

/// Settings shared by every pipeline stage. Defaults reproduce the reference
/// configuration: J=5, L=6, m=2, 80x60 input, K=200 components, C=1.
struct PipelineConfig {
  std::filesystem::path manifest;
  std::filesystem::path out_dir = "scatfp-out";
  int width = 80;
  int height = 60;
  int scales = 5;
  int orientations = 6;
  int layers = 2;
  // Explicit K must not exceed the rank of the training data. When unset,
  // kDefaultPcaK is used, capped at that rank.
  std::optional<int> pca_k;
  std::optional<double> epsilon;  // overrides pca_k with choose_k when set
  double svm_c = 1.0;
  std::uint64_t seed = 0;
  int holdout = 0;
  bool standardize = false;
  bool raw_distance = false;
  std::optional<OutputFormat> format;
  std::vector<int> k_grid;
  std::filesystem::path dump_filters;
  int threads = 0;  // 0: one per hardware thread
  int curve_points = 201;
};

/// File names inside PipelineConfig::out_dir.
namespace files {
inline constexpr const char* kTrainFeatures = "features_train.scf";
inline constexpr const char* kTestFeatures = "features_test.scf";
inline constexpr const char* kTrainFeaturesCsv = "features_train.csv";
inline constexpr const char* kTestFeaturesCsv = "features_test.csv";
inline constexpr const char* kPca = "pca.bin";
inline constexpr const char* kSvm = "svm.bin";
inline constexpr const char* kScaler = "scaler.bin";
inline constexpr const char* kReport = "report.csv";
inline constexpr const char* kConfusion = "confusion.csv";
inline constexpr const char* kFarFrrSvg = "far_frr.svg";
inline constexpr const char* kEerCsv = "eer.csv";
inline constexpr const char* kAccuracyCsv = "accuracy_vs_k.csv";
inline constexpr const char* kAccuracySvg = "accuracy_vs_k.svg";
}  // namespace files

/// Per-component z-scoring of projected features, fitted on training data.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> scale;

  static Standardizer fit(std::span<const LabeledPoint> points);
  void apply(std::vector<double>& x) const;
};

/// STD1 file: magic "STD1", u32 d, f64 mean[d], f64 scale[d].
void save_standardizer(const std::filesystem::path& path, const Standardizer& s);
Standardizer load_standardizer(const std::filesystem::path& path);

struct ExtractSummary {
  std::size_t train_count = 0;
  std::size_t test_count = 0;
  std::size_t feature_length = 0;
  double seconds = 0.0;
};

struct FitSummary {
  int rank = 0;
  int components = 0;
  double retained_variance = 0.0;
  double seconds = 0.0;
};

struct EvalSummary {
  EvalReport report;
  double mean_match_ms = 0.0;
  double seconds = 0.0;
};

/// Scatters every manifest image and writes the train/test feature files.
/// A manifest without a split column is split half/half with the seed.
ExtractSummary cmd_extract(const PipelineConfig& config, std::ostream& log);

/// Fits PCA on the training features and the one-vs-all SVM on their projections.
FitSummary cmd_fit(const PipelineConfig& config, std::ostream& log);

/// Identification accuracy, minimum-distance FAR/FRR and EER on the test split.
EvalSummary cmd_evaluate(const PipelineConfig& config, std::ostream& log);

/// Accuracy for each component count in config.k_grid (or a default grid).
std::vector<ComponentAccuracy> cmd_sweep_k(const PipelineConfig& config, std::ostream& log);

/// Minimum-distance verification only: FAR/FRR curve and EER.
EerPoint cmd_eer(const PipelineConfig& config, std::ostream& log);

/// Converts labeled feature vectors to SVM/eval points.
std::vector<LabeledPoint> to_points(std::span<const FeatureVector> features);

}  // namespace scatfp
