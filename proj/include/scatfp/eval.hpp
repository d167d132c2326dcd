#pragma once

#include <span>
#include <vector>

#include "scatfp/svm.hpp"

namespace scatfp {

/// Verification distances: genuine are probe-to-own-subject, impostor are
/// probe-to-nearest-other-subject.
struct ScoreSet {
  std::vector<double> genuine;
  std::vector<double> impostor;
};

struct CurvePoint {
  double threshold = 0.0;
  double far = 0.0;  // fraction of impostor distances <= threshold
  double frr = 0.0;  // fraction of genuine distances > threshold
};

struct EerPoint {
  double eer = 0.0;
  double threshold = 0.0;
};

/// counts[true][predicted] over the classes of a multiclass model.
struct ConfusionMatrix {
  std::vector<int> classes;
  std::vector<std::vector<int>> counts;
};

struct EvalReport {
  double accuracy = 0.0;
  std::vector<CurvePoint> curve;
  double eer = 0.0;
  double eer_threshold = 0.0;
  ConfusionMatrix confusion;
};

/// Fraction of test points whose predicted label matches.
double accuracy(const MulticlassSvmModel& model, std::span<const LabeledPoint> test);

ConfusionMatrix confusion_matrix(const MulticlassSvmModel& model, std::span<const LabeledPoint> test);

/// Minimum-distance matcher. For each probe: Euclidean distance to the nearest
/// gallery template of its own subject (genuine) and to the nearest template
/// of any other subject (impostor, omitted when the gallery has one subject).
/// Throws ValidationError if a probe's subject is missing from the gallery.
ScoreSet min_distance_scores(std::span<const LabeledPoint> gallery, std::span<const LabeledPoint> probes);

/// FAR/FRR at each threshold of an ascending grid.
std::vector<CurvePoint> far_frr_curve(const ScoreSet& scores, std::span<const double> grid);

/// Evenly spaced thresholds from 0 to the largest score, inclusive.
std::vector<double> threshold_grid(const ScoreSet& scores, int points);

/// Sweeps every distinct score and the midpoints between neighbours; picks
/// the threshold minimising |FAR - FRR| (smallest threshold on ties) and
/// reports (FAR + FRR) / 2 there.
EerPoint compute_eer(const ScoreSet& scores);

struct ComponentAccuracy {
  int components = 0;
  double accuracy = 0.0;
};

/// Accuracy of the PCA(k) + one-vs-all SVM pipeline for each k in the grid.
/// PCA is fitted once on `train` and truncated per k.
std::vector<ComponentAccuracy> accuracy_vs_components(std::span<const LabeledPoint> train,
                                                      std::span<const LabeledPoint> test,
                                                      std::span<const int> k_grid, double C,
                                                      const SvmOptions& options = {});

}  // namespace scatfp
