#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "scatfp/eval.hpp"

namespace scatfp {

/// Shortest round-trip decimal form, independent of locale.
std::string format_number(double v);

/// `threshold,far,frr` rows, a blank line, then `metric,value` summary rows
/// for accuracy, eer and eer_threshold.
void write_report_csv(const std::filesystem::path& path, const EvalReport& report);

/// `true\predicted` matrix with class labels as row and column headers.
void write_confusion_csv(const std::filesystem::path& path, const ConfusionMatrix& confusion);

/// `threshold,far,frr` rows followed by the eer summary.
void write_curve_csv(const std::filesystem::path& path, std::span<const CurvePoint> curve, const EerPoint& eer);

/// `components,accuracy` rows.
void write_accuracy_csv(const std::filesystem::path& path, std::span<const ComponentAccuracy> points);

/// FAR and FRR against the distance threshold with the EER point marked.
void write_far_frr_svg(const std::filesystem::path& path, std::span<const CurvePoint> curve, const EerPoint& eer);

/// Identification accuracy against the number of PCA components.
void write_accuracy_svg(const std::filesystem::path& path, std::span<const ComponentAccuracy> points);

}  // namespace scatfp
