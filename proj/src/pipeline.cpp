#include "scatfp/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

#include "scatfp/binary_io.hpp"
#include "scatfp/errors.hpp"
#include "scatfp/feature_file.hpp"
#include "scatfp/filterbank.hpp"
#include "scatfp/manifest.hpp"
#include "scatfp/report.hpp"

namespace scatfp {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

bool wants_csv(const PipelineConfig& c, OutputFormat fallback) {
  const auto f = c.format.value_or(fallback);
  return f == OutputFormat::kCsv || f == OutputFormat::kBoth;
}

bool wants_svg(const PipelineConfig& c, OutputFormat fallback) {
  const auto f = c.format.value_or(fallback);
  return f == OutputFormat::kSvg || f == OutputFormat::kBoth;
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
}

void require_file(const std::filesystem::path& path, const char* what) {
  if (!std::filesystem::is_regular_file(path))
    throw IoError(std::string(what) + " not found: " + path.string());
}

// Writes through a temporary name so a failed stage never leaves a partial file.
template <class Fn>
void write_atomically(const std::filesystem::path& path, Fn&& write) {
  auto tmp = path;
  tmp += ".partial";
  try {
    write(tmp);
  } catch (...) {
    std::error_code ec;
    std::filesystem::remove(tmp, ec);
    throw;
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot move " + tmp.string() + " to " + path.string());
}

int thread_count(const PipelineConfig& c, std::size_t jobs) {
  int n = c.threads > 0 ? c.threads : static_cast<int>(std::thread::hardware_concurrency());
  return std::clamp(n, 1, static_cast<int>(std::max<std::size_t>(jobs, 1)));
}

}  // namespace

Standardizer Standardizer::fit(std::span<const LabeledPoint> points) {
  if (points.empty()) throw ArgumentError("standardizer needs data");
  const std::size_t d = points.front().x.size();
  Standardizer s;
  s.mean.assign(d, 0.0);
  s.scale.assign(d, 0.0);
  for (const auto& p : points)
    for (std::size_t k = 0; k < d; ++k) s.mean[k] += p.x[k];
  for (auto& m : s.mean) m /= static_cast<double>(points.size());
  for (const auto& p : points)
    for (std::size_t k = 0; k < d; ++k) s.scale[k] += (p.x[k] - s.mean[k]) * (p.x[k] - s.mean[k]);
  for (auto& v : s.scale) {
    v = std::sqrt(v / static_cast<double>(points.size()));
    if (v == 0.0) v = 1.0;
  }
  return s;
}

void Standardizer::apply(std::vector<double>& x) const {
  if (x.size() != mean.size()) throw ArgumentError("standardizer dimension mismatch");
  for (std::size_t k = 0; k < x.size(); ++k) x[k] = (x[k] - mean[k]) / scale[k];
}

void save_standardizer(const std::filesystem::path& path, const Standardizer& s) {
  binio::Writer w(path);
  w.magic("STD1");
  w.u32(static_cast<std::uint32_t>(s.mean.size()));
  w.f64s(s.mean);
  w.f64s(s.scale);
  w.close();
}

Standardizer load_standardizer(const std::filesystem::path& path) {
  binio::Reader r(path);
  r.expect_magic("STD1");
  Standardizer s;
  const std::uint32_t d = r.u32();
  s.mean.resize(d);
  s.scale.resize(d);
  r.f64s(s.mean);
  r.f64s(s.scale);
  return s;
}

std::vector<LabeledPoint> to_points(std::span<const FeatureVector> features) {
  std::vector<LabeledPoint> out;
  out.reserve(features.size());
  for (const auto& f : features) {
    if (!f.label) throw ValidationError("feature vector without a label");
    out.push_back({f.values, *f.label});
  }
  return out;
}

ExtractSummary cmd_extract(const PipelineConfig& config, std::ostream& log) {
  const auto start = Clock::now();
  if (config.manifest.empty()) throw ArgumentError("--manifest is required");
  ManifestFile file = read_manifest(config.manifest);
  DatasetManifest manifest =
      file.manifest ? std::move(*file.manifest) : split_half(file.unsplit, config.seed);
  if (manifest.entries.empty()) throw ValidationError("manifest " + config.manifest.string() + " has no entries");
  if (config.holdout > 0) manifest = drop_subjects(manifest, config.holdout);

  const FilterBank bank = build_filter_bank(config.scales, config.orientations, config.width, config.height);
  const ScatteringParams params{config.scales, config.orientations, config.layers, config.width, config.height};
  const std::size_t length = 2 * path_count(config.scales, config.orientations, config.layers);
  if (!config.dump_filters.empty()) dump_filters(bank, config.dump_filters);

  const auto& entries = manifest.entries;
  std::vector<FeatureVector> features(entries.size());
  std::vector<std::exception_ptr> errors(entries.size());
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::atomic<bool> failed{false};
  std::mutex log_mutex;
  const std::size_t step = std::max<std::size_t>(1, entries.size() / 10);

  auto worker = [&] {
    for (std::size_t i = next++; i < entries.size() && !failed; i = next++) {
      try {
        const GrayImage image = load_image(entries[i].path, config.width, config.height);
        features[i] = extract_features(image, bank, config.layers);
        features[i].label = entries[i].label;
      } catch (...) {
        errors[i] = std::current_exception();
        failed = true;
        continue;
      }
      const std::size_t n = ++done;
      if (n % step == 0 || n == entries.size()) {
        std::lock_guard lock(log_mutex);
        log << "extracted " << n << '/' << entries.size() << " images\n";
      }
    }
  };
  std::vector<std::thread> pool;
  const int threads = thread_count(config, entries.size());
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const IoError& e) {
      throw IoError("failed on " + entries[i].path.string() + ": " + e.what());
    } catch (const ArgumentError& e) {
      throw ArgumentError("failed on " + entries[i].path.string() + ": " + e.what());
    }
  }

  FeatureSet train{params, {}};
  FeatureSet test{params, {}};
  for (std::size_t i = 0; i < entries.size(); ++i)
    (entries[i].split == Split::kTrain ? train : test).features.push_back(std::move(features[i]));

  ensure_dir(config.out_dir);
  auto write_set = [&](const FeatureSet& set, const char* bin, const char* csv) {
    write_atomically(config.out_dir / bin, [&](const auto& p) { write_features(p, set); });
    if (wants_csv(config, OutputFormat::kSvg))
      write_atomically(config.out_dir / csv, [&](const auto& p) { write_features_csv(p, set); });
  };
  write_set(train, files::kTrainFeatures, files::kTrainFeaturesCsv);
  write_set(test, files::kTestFeatures, files::kTestFeaturesCsv);

  ExtractSummary summary{train.features.size(), test.features.size(), length, seconds_since(start)};
  log << "features: " << summary.train_count << " train, " << summary.test_count << " test, length "
      << summary.feature_length << " (" << summary.seconds << " s)\n";
  return summary;
}

namespace {

FeatureSet load_split(const PipelineConfig& config, const char* name) {
  const auto path = config.out_dir / name;
  require_file(path, "feature file");
  return read_features(path);
}

}  // namespace

FitSummary cmd_fit(const PipelineConfig& config, std::ostream& log) {
  const auto start = Clock::now();
  const FeatureSet train = load_split(config, files::kTrainFeatures);
  if (train.features.size() < 2) throw ValidationError("fitting needs at least two training vectors");

  PcaModel pca = config.pca_k && !config.epsilon ? fit_pca(train.features, *config.pca_k)
                                                 : fit_pca(train.features, 1);
  if (config.epsilon) {
    pca = pca.with_components(choose_k(pca, *config.epsilon));
  } else if (!config.pca_k) {
    pca = pca.with_components(std::min(kDefaultPcaK, pca.rank()));
    if (pca.rank() < kDefaultPcaK)
      log << "note: K capped at the training-data rank " << pca.rank() << '\n';
  }

  std::vector<LabeledPoint> points;
  points.reserve(train.features.size());
  for (const auto& f : train.features) points.push_back({project(pca, f), *f.label});

  const auto scaler_path = config.out_dir / files::kScaler;
  std::error_code ec;
  std::filesystem::remove(scaler_path, ec);
  if (config.standardize) {
    const Standardizer scaler = Standardizer::fit(points);
    for (auto& p : points) scaler.apply(p.x);
    save_standardizer(scaler_path, scaler);
  }

  const MulticlassSvmModel svm = train_multiclass(points, Kernel::linear(), config.svm_c);
  write_atomically(config.out_dir / files::kPca, [&](const auto& p) { save_pca(p, pca); });
  write_atomically(config.out_dir / files::kSvm, [&](const auto& p) { save_svm(p, svm); });

  FitSummary summary{pca.rank(), pca.components(), retained_variance(pca, pca.components()),
                     seconds_since(start)};
  log << "PCA: " << summary.components << " of " << summary.rank << " components, retained variance "
      << summary.retained_variance << "\nSVM: " << svm.classes().size() << " one-vs-all classifiers, C="
      << config.svm_c << " (" << summary.seconds << " s)\n";
  return summary;
}

namespace {

struct ProjectedSplits {
  std::vector<LabeledPoint> train;
  std::vector<LabeledPoint> test;
};

ProjectedSplits distance_space(const PipelineConfig& config, const FeatureSet& train, const FeatureSet& test,
                               const PcaModel* pca) {
  ProjectedSplits out;
  if (config.raw_distance || !pca) {
    out.train = to_points(train.features);
    out.test = to_points(test.features);
    return out;
  }
  for (const auto& f : train.features) out.train.push_back({project(*pca, f), *f.label});
  for (const auto& f : test.features) out.test.push_back({project(*pca, f), *f.label});
  return out;
}

}  // namespace

EvalSummary cmd_evaluate(const PipelineConfig& config, std::ostream& log) {
  const auto start = Clock::now();
  const auto pca_path = config.out_dir / files::kPca;
  const auto svm_path = config.out_dir / files::kSvm;
  require_file(pca_path, "PCA model");
  require_file(svm_path, "SVM model");
  const FeatureSet train = load_split(config, files::kTrainFeatures);
  const FeatureSet test = load_split(config, files::kTestFeatures);
  if (test.features.empty()) throw ValidationError("test split is empty");
  const PcaModel pca = load_pca(pca_path);
  const MulticlassSvmModel svm = load_svm(svm_path);
  std::optional<Standardizer> scaler;
  if (std::filesystem::exists(config.out_dir / files::kScaler))
    scaler = load_standardizer(config.out_dir / files::kScaler);

  EvalSummary summary;
  EvalReport& report = summary.report;

  // Identification: project, optionally standardise, and match per probe.
  std::vector<LabeledPoint> probes;
  probes.reserve(test.features.size());
  std::size_t correct = 0;
  const auto match_start = Clock::now();
  for (const auto& f : test.features) {
    auto x = project(pca, f);
    if (scaler) scaler->apply(x);
    if (svm.predict(x) == *f.label) ++correct;
    probes.push_back({std::move(x), *f.label});
  }
  summary.mean_match_ms =
      std::chrono::duration<double, std::milli>(Clock::now() - match_start).count() / probes.size();
  report.accuracy = static_cast<double>(correct) / static_cast<double>(probes.size());
  report.confusion = confusion_matrix(svm, probes);

  // Verification: minimum-distance matcher against the training templates.
  const auto space = distance_space(config, train, test, &pca);
  const ScoreSet scores = min_distance_scores(space.train, space.test);
  if (scores.impostor.empty()) throw ValidationError("verification needs at least two subjects");
  report.curve = far_frr_curve(scores, threshold_grid(scores, config.curve_points));
  const EerPoint eer = compute_eer(scores);
  report.eer = eer.eer;
  report.eer_threshold = eer.threshold;

  ensure_dir(config.out_dir);
  if (wants_csv(config, OutputFormat::kBoth)) {
    write_report_csv(config.out_dir / files::kReport, report);
    write_confusion_csv(config.out_dir / files::kConfusion, report.confusion);
  }
  if (wants_svg(config, OutputFormat::kBoth)) write_far_frr_svg(config.out_dir / files::kFarFrrSvg, report.curve, eer);

  summary.seconds = seconds_since(start);
  log << "accuracy:       " << report.accuracy << " (" << correct << '/' << probes.size() << ")\n"
      << "EER:            " << report.eer << " at distance " << report.eer_threshold << '\n'
      << "matching time:  " << summary.mean_match_ms << " ms per probe\n"
      << "evaluate time:  " << summary.seconds << " s\n";
  return summary;
}

std::vector<ComponentAccuracy> cmd_sweep_k(const PipelineConfig& config, std::ostream& log) {
  const FeatureSet train = load_split(config, files::kTrainFeatures);
  const FeatureSet test = load_split(config, files::kTestFeatures);
  const auto train_pts = to_points(train.features);
  const auto test_pts = to_points(test.features);
  if (test_pts.empty()) throw ValidationError("test split is empty");

  std::vector<int> grid = config.k_grid;
  if (grid.empty()) {
    const int rank = fit_pca(train.features, 1).rank();
    for (int k : {1, 2, 5, 10, 20, 50, 100, 150, 200, 300, 400, 500, 600, 700}) {
      if (k <= rank) grid.push_back(k);
    }
    if (grid.back() != rank) grid.push_back(rank);
  }
  std::sort(grid.begin(), grid.end());
  const auto points = accuracy_vs_components(train_pts, test_pts, grid, config.svm_c);

  ensure_dir(config.out_dir);
  if (wants_csv(config, OutputFormat::kBoth)) write_accuracy_csv(config.out_dir / files::kAccuracyCsv, points);
  if (wants_svg(config, OutputFormat::kBoth)) write_accuracy_svg(config.out_dir / files::kAccuracySvg, points);
  for (const auto& p : points) log << "K=" << p.components << "  accuracy " << p.accuracy << '\n';
  return points;
}

EerPoint cmd_eer(const PipelineConfig& config, std::ostream& log) {
  const FeatureSet train = load_split(config, files::kTrainFeatures);
  const FeatureSet test = load_split(config, files::kTestFeatures);
  std::optional<PcaModel> pca;
  if (!config.raw_distance) {
    const auto pca_path = config.out_dir / files::kPca;
    require_file(pca_path, "PCA model");
    pca = load_pca(pca_path);
  }
  const auto space = distance_space(config, train, test, pca ? &*pca : nullptr);
  const ScoreSet scores = min_distance_scores(space.train, space.test);
  if (scores.impostor.empty()) throw ValidationError("verification needs at least two subjects");
  const auto curve = far_frr_curve(scores, threshold_grid(scores, config.curve_points));
  const EerPoint eer = compute_eer(scores);

  ensure_dir(config.out_dir);
  if (wants_csv(config, OutputFormat::kBoth)) write_curve_csv(config.out_dir / files::kEerCsv, curve, eer);
  if (wants_svg(config, OutputFormat::kBoth)) write_far_frr_svg(config.out_dir / files::kFarFrrSvg, curve, eer);
  log << "EER " << eer.eer << " at distance " << eer.threshold << " (" << scores.genuine.size() << " genuine, "
      << scores.impostor.size() << " impostor scores)\n";
  return eer;
}

}  // namespace scatfp
