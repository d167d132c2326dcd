#include "scatfp/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "scatfp/errors.hpp"
#include "scatfp/pca.hpp"

namespace scatfp {

double accuracy(const MulticlassSvmModel& model, std::span<const LabeledPoint> test) {
  if (test.empty()) throw ArgumentError("accuracy needs a non-empty test set");
  std::size_t correct = 0;
  for (const auto& p : test) {
    if (model.predict(p.x) == p.label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(test.size());
}

ConfusionMatrix confusion_matrix(const MulticlassSvmModel& model, std::span<const LabeledPoint> test) {
  ConfusionMatrix cm;
  cm.classes = model.classes();
  const std::size_t m = cm.classes.size();
  cm.counts.assign(m, std::vector<int>(m, 0));
  auto index_of = [&](int label) -> std::size_t {
    auto it = std::lower_bound(cm.classes.begin(), cm.classes.end(), label);
    if (it == cm.classes.end() || *it != label)
      throw ValidationError("test label " + std::to_string(label) + " is not a model class");
    return static_cast<std::size_t>(it - cm.classes.begin());
  };
  for (const auto& p : test) ++cm.counts[index_of(p.label)][index_of(model.predict(p.x))];
  return cm;
}

namespace {

double euclidean(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ArgumentError("distance arguments differ in length");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace

ScoreSet min_distance_scores(std::span<const LabeledPoint> gallery, std::span<const LabeledPoint> probes) {
  if (gallery.empty() || probes.empty()) throw ArgumentError("gallery and probes must be non-empty");
  ScoreSet scores;
  scores.genuine.reserve(probes.size());
  scores.impostor.reserve(probes.size());
  for (const auto& probe : probes) {
    double own = std::numeric_limits<double>::infinity();
    double other = std::numeric_limits<double>::infinity();
    for (const auto& g : gallery) {
      const double dist = euclidean(probe.x, g.x);
      if (g.label == probe.label) own = std::min(own, dist);
      else other = std::min(other, dist);
    }
    if (std::isinf(own))
      throw ValidationError("probe subject " + std::to_string(probe.label) + " has no gallery template");
    scores.genuine.push_back(own);
    if (!std::isinf(other)) scores.impostor.push_back(other);
  }
  return scores;
}

namespace {

// Counts of sorted values <= t and > t.
std::size_t count_le(const std::vector<double>& sorted, double t) {
  return static_cast<std::size_t>(std::upper_bound(sorted.begin(), sorted.end(), t) - sorted.begin());
}

std::vector<double> sorted_copy(const std::vector<double>& v) {
  std::vector<double> s = v;
  std::sort(s.begin(), s.end());
  return s;
}

}  // namespace

std::vector<CurvePoint> far_frr_curve(const ScoreSet& scores, std::span<const double> grid) {
  if (grid.empty()) throw ArgumentError("threshold grid is empty");
  if (!std::is_sorted(grid.begin(), grid.end())) throw ArgumentError("threshold grid must be ascending");
  if (scores.genuine.empty() || scores.impostor.empty())
    throw ArgumentError("FAR/FRR needs genuine and impostor scores");
  const auto genuine = sorted_copy(scores.genuine);
  const auto impostor = sorted_copy(scores.impostor);
  const double ng = static_cast<double>(genuine.size());
  const double ni = static_cast<double>(impostor.size());
  std::vector<CurvePoint> curve;
  curve.reserve(grid.size());
  for (double t : grid) {
    curve.push_back({t, static_cast<double>(count_le(impostor, t)) / ni,
                     static_cast<double>(genuine.size() - count_le(genuine, t)) / ng});
  }
  return curve;
}

std::vector<double> threshold_grid(const ScoreSet& scores, int points) {
  if (points < 2) throw ArgumentError("threshold grid needs at least two points");
  double top = 0.0;
  for (double v : scores.genuine) top = std::max(top, v);
  for (double v : scores.impostor) top = std::max(top, v);
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i) grid[i] = top * static_cast<double>(i) / (points - 1);
  grid.back() = top;
  return grid;
}

EerPoint compute_eer(const ScoreSet& scores) {
  if (scores.genuine.empty() || scores.impostor.empty())
    throw ArgumentError("EER needs genuine and impostor scores");
  std::vector<double> values;
  values.reserve(scores.genuine.size() + scores.impostor.size());
  values.insert(values.end(), scores.genuine.begin(), scores.genuine.end());
  values.insert(values.end(), scores.impostor.begin(), scores.impostor.end());
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());

  std::vector<double> candidates;
  candidates.reserve(2 * values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    candidates.push_back(values[i]);
    if (i + 1 < values.size()) candidates.push_back(values[i] + (values[i + 1] - values[i]) / 2.0);
  }

  const auto curve = far_frr_curve(scores, candidates);
  const CurvePoint* best = &curve.front();
  for (const auto& p : curve) {
    if (std::abs(p.far - p.frr) < std::abs(best->far - best->frr)) best = &p;
  }
  return {(best->far + best->frr) / 2.0, best->threshold};
}

std::vector<ComponentAccuracy> accuracy_vs_components(std::span<const LabeledPoint> train,
                                                      std::span<const LabeledPoint> test,
                                                      std::span<const int> k_grid, double C,
                                                      const SvmOptions& options) {
  if (k_grid.empty()) throw ArgumentError("component grid is empty");
  if (test.empty()) throw ArgumentError("accuracy needs a non-empty test set");
  std::vector<std::vector<double>> rows;
  rows.reserve(train.size());
  for (const auto& p : train) rows.push_back(p.x);
  const int k_max = *std::max_element(k_grid.begin(), k_grid.end());
  const PcaModel full = fit_pca(rows, k_max);

  std::vector<ComponentAccuracy> out;
  for (int k : k_grid) {
    const PcaModel model = full.with_components(k);
    std::vector<LabeledPoint> ptrain;
    std::vector<LabeledPoint> ptest;
    for (const auto& p : train) ptrain.push_back({project(model, p.x), p.label});
    for (const auto& p : test) ptest.push_back({project(model, p.x), p.label});
    const auto svm = train_multiclass(ptrain, Kernel::linear(), C, options);
    out.push_back({k, accuracy(svm, ptest)});
  }
  return out;
}

}  // namespace scatfp
