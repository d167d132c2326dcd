// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Usage: scatfp_acceptance <path-to-scatfp-cli>

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "scatfp/eval.hpp"
#include "scatfp/filterbank.hpp"
#include "scatfp/pca.hpp"
#include "scatfp/scattering.hpp"
#include "scatfp/svm.hpp"
#include "scatfp/synthetic.hpp"

using namespace scatfp;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const char* name, double limit_s, const std::function<Outcome()>& body) {
  const auto start = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double s = std::chrono::duration<double>(Clock::now() - start).count();
  if (limit_s > 0 && s >= limit_s) {
    o.pass = false;
    o.detail += "; runtime over the limit";
  }
  if (!o.pass) ++failures;
  std::printf("%s criterion %d (%s): %s [%.2f s", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), s);
  if (limit_s > 0) std::printf(" / limit %.0f s", limit_s);
  std::printf("]\n");
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int run_cli(const std::string& cli, const std::string& args, const fs::path& log) {
  const std::string cmd = "\"" + cli + "\" " + args + " >>\"" + log.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

double report_metric(const fs::path& report, const std::string& key) {
  std::ifstream in(report);
  std::string line;
  while (std::getline(in, line))
    if (line.rfind(key + ",", 0) == 0) return std::stod(line.substr(key.size() + 1));
  throw std::runtime_error("metric " + key + " missing from " + report.string());
}

double l2(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

Outcome structural() {
  const FilterBank bank = build_filter_bank(5, 6, 80, 60);
  std::mt19937_64 rng(1);
  const ScatteringResult r = scatter(oracle::random_image(80, 60, rng), bank, 2);
  const FeatureVector f = pool_features(r);
  const bool ok = r.maps.size() == 391 && f.values.size() == 782 && path_count(5, 6, 2) == 391;
  return {ok, std::to_string(r.maps.size()) + " maps, " + std::to_string(f.values.size()) + " features"};
}

Outcome cascade() {
  std::mt19937_64 rng(2);
  const FilterBank bank = build_filter_bank(3, 2, 16, 16);
  double worst = 0.0;
  std::size_t maps = 0;
  for (int i = 0; i < 20; ++i) {
    const GrayImage img = oracle::random_image(16, 16, rng);
    const ScatteringResult r = scatter(img, bank, 2);
    const auto ref = oracle::scattering_maps(img, bank, 2);
    if (r.maps.size() != ref.size()) return {false, "map count differs from the oracle"};
    for (std::size_t m = 0; m < ref.size(); ++m)
      for (std::size_t p = 0; p < ref[m].size(); ++p) worst = std::max(worst, std::abs(r.maps[m].values[p] - ref[m][p]));
    maps += ref.size();
  }
  return {worst <= 1e-8, std::to_string(maps) + " maps over 20 images, max abs error " + fmt("%.3g", worst) + " (tol 1e-8)"};
}

Outcome translation() {
  const int J = 5;
  const FilterBank bank = build_filter_bank(J, 6, 80, 60);
  const auto textures = make_subjects(10, 2024);
  std::vector<std::vector<double>> base;
  std::vector<GrayImage> images;
  for (const auto& t : textures) {
    images.push_back(render_ridges(t, 80, 60));
    base.push_back(extract_features(images.back(), bank, 2).values);
  }
  double worst_rel = 0.0, worst_shift = 0.0;
  for (std::size_t t = 0; t < images.size(); ++t) {
    const double n = std::sqrt(std::inner_product(base[t].begin(), base[t].end(), base[t].begin(), 0.0));
    for (int s = 1; s <= (1 << (J - 2)); s *= 2)
      for (auto [dx, dy] : {std::pair{s, 0}, std::pair{0, s}, std::pair{-s, s}}) {
        const double d = l2(extract_features(circular_shift(images[t], dx, dy), bank, 2).values, base[t]);
        worst_rel = std::max(worst_rel, d / n);
        worst_shift = std::max(worst_shift, d);
      }
  }
  double nearest_texture = 1e300;
  for (std::size_t a = 0; a < base.size(); ++a)
    for (std::size_t b = a + 1; b < base.size(); ++b) nearest_texture = std::min(nearest_texture, l2(base[a], base[b]));
  const bool ok = worst_rel <= 0.15 && nearest_texture > worst_shift;
  return {ok, "shifts up to " + std::to_string(1 << (J - 2)) + " px: max relative change " + fmt("%.3g", worst_rel) +
                  " (tol 0.15); max shift distance " + fmt("%.3g", worst_shift) + " < min inter-texture distance " +
                  fmt("%.3g", nearest_texture)};
}

Outcome pca_oracle() {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g;
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int M = 2 + static_cast<int>(rng() % 19);
    const int d = 1 + static_cast<int>(rng() % 30);
    std::vector<double> scale(d);
    for (double& s : scale) s = std::exp(0.7 * g(rng));
    std::vector<std::vector<double>> rows(M, std::vector<double>(d));
    for (auto& r : rows)
      for (int k = 0; k < d; ++k) r[k] = scale[k] * g(rng);
    const int r = std::min(M - 1, d);
    const PcaModel model = fit_pca(rows, r);
    if (model.rank() != r) return {false, "rank mismatch on dataset " + std::to_string(trial)};
    const auto ref = oracle::jacobi(oracle::scatter_matrix(rows));
    double total = 0.0, part = 0.0;
    for (double v : ref.values) total += v;
    for (int j = 0; j < r; ++j) {
      worst = std::max(worst, std::abs(model.eigenvalues()(j) - ref.values[j]));
      part += ref.values[j];
      worst = std::max(worst, std::abs(retained_variance(model, j + 1) - part / total));
    }
    for (const auto& x : rows) {
      const auto p = project(model, x);
      for (int j = 0; j < r; ++j) {
        double s = 0.0;
        for (int k = 0; k < d; ++k) s += ref.vectors[j][k] * (x[k] - model.mean()(k));
        worst = std::max(worst, std::abs(p[j] - s));
      }
    }
  }
  return {worst <= 1e-8, "50 datasets, max deviation over eigenvalues/projections/ratios " + fmt("%.3g", worst) + " (tol 1e-8)"};
}

Outcome svm_oracle() {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  double worst_obj = 0.0, worst_kkt = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 7);
    const int d = 1 + static_cast<int>(rng() % 3);
    const double C = std::array{0.1, 1.0, 10.0}[trial % 3];
    std::vector<LabeledPoint> data(n);
    for (int i = 0; i < n; ++i) {
      data[i].label = i % 2 ? -1 : 1;
      data[i].x.resize(d);
      for (double& v : data[i].x) v = g(rng) + 0.7 * data[i].label;
    }
    const DualSolution s = solve_dual(data, Kernel::linear(), C);
    const auto ref = oracle::dual_qp(data, C);
    worst_obj = std::max(worst_obj, std::abs(oracle::dual_objective(data, s.alpha) - ref.objective));
    double balance = 0.0;
    for (int i = 0; i < n; ++i) {
      balance += s.alpha[i] * data[i].label;
      double f = s.bias;
      for (int j = 0; j < n; ++j) {
        double dot = 0.0;
        for (int k = 0; k < d; ++k) dot += data[i].x[k] * data[j].x[k];
        f += s.alpha[j] * data[j].label * dot;
      }
      const double margin = data[i].label * f;
      double v = 0.0;
      if (s.alpha[i] < 0.0 || s.alpha[i] > C) v = 1.0;
      else if (s.alpha[i] == 0.0) v = std::max(0.0, 1.0 - margin);
      else if (s.alpha[i] == C) v = std::max(0.0, margin - 1.0);
      else v = std::abs(margin - 1.0);
      worst_kkt = std::max(worst_kkt, v);
    }
    worst_kkt = std::max(worst_kkt, std::abs(balance) > 1e-6 ? 1.0 : 0.0);
  }
  const bool ok = worst_obj <= 1e-3 && worst_kkt <= 1e-3;
  return {ok, "100 datasets, max objective gap " + fmt("%.3g", worst_obj) + ", max KKT violation " + fmt("%.3g", worst_kkt) +
                  " (tol 1e-3)"};
}

Outcome eer_checks() {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ScoreSet same;
  for (int i = 0; i < 500; ++i) same.genuine.push_back(u(rng));
  same.impostor = same.genuine;
  ScoreSet apart;
  for (int i = 0; i < 500; ++i) {
    apart.genuine.push_back(u(rng));
    apart.impostor.push_back(1.5 + u(rng));
  }
  ScoreSet overlap;
  for (int i = 0; i < 10000; ++i) {
    overlap.genuine.push_back(u(rng));
    overlap.impostor.push_back(0.5 + u(rng));
  }
  const double e_same = compute_eer(same).eer;
  const double e_apart = compute_eer(apart).eer;
  const double e_overlap = compute_eer(overlap).eer;  // analytic crossing 0.25
  const bool ok = e_same == 0.5 && e_apart == 0.0 && std::abs(e_overlap - 0.25) <= 0.02;
  return {ok, "identical " + fmt("%.3g", e_same) + ", separated " + fmt("%.3g", e_apart) + ", overlapping uniforms " +
                  fmt("%.4f", e_overlap) + " vs 0.25 (tol 0.02)"};
}

Outcome end_to_end(const std::string& cli, const fs::path& work) {
  const fs::path data = work / "data";
  const fs::path out = work / "run1";
  const fs::path log = work / "e2e.log";
  if (run_cli(cli, "synth --subjects 10 --per-subject 10 --resize 80x60 --seed 0 --out \"" + data.string() + "\"", log) != 0)
    return {false, "synth failed, see " + log.string()};
  const std::string common = "--manifest \"" + (data / "manifest.tsv").string() + "\" --out \"" + out.string() + "\"";
  for (const char* cmd : {"extract", "fit", "evaluate"})
    if (run_cli(cli, std::string(cmd) + " " + common, log) != 0) return {false, std::string(cmd) + " failed:\n" + slurp(log)};
  const double acc = report_metric(out / "report.csv", "accuracy");
  const double eer = report_metric(out / "report.csv", "eer");
  return {acc >= 0.90 && eer <= 0.15,
          "10 subjects x 10 images, accuracy " + fmt("%.3f", acc) + " (>= 0.90), EER " + fmt("%.3f", eer) + " (<= 0.15)"};
}

Outcome latency() {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g;
  const int classes = 100, dim = 200, per = 3;
  std::vector<std::vector<double>> centres(classes, std::vector<double>(dim));
  for (auto& c : centres)
    for (double& v : c) v = g(rng);
  std::vector<LabeledPoint> gallery;
  for (int c = 0; c < classes; ++c)
    for (int i = 0; i < per; ++i) {
      LabeledPoint p{centres[c], c};
      for (double& v : p.x) v += 0.3 * g(rng);
      gallery.push_back(std::move(p));
    }
  const MulticlassSvmModel model = train_multiclass(gallery, Kernel::linear(), 1.0);
  std::vector<std::vector<double>> probes;
  for (int i = 0; i < 1000; ++i) {
    auto x = centres[i % classes];
    for (double& v : x) v += 0.3 * g(rng);
    probes.push_back(std::move(x));
  }
  int correct = 0;
  const auto start = Clock::now();
  for (int i = 0; i < 1000; ++i) correct += model.predict(probes[i]) == i % classes;
  const double ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count() / 1000.0;
  return {ms <= 97.0, "mean " + fmt("%.4f", ms) + " ms per probe over 1000 probes (<= 97 ms), " + std::to_string(correct) +
                          "/1000 correct"};
}

Outcome determinism(const std::string& cli, const fs::path& work) {
  const fs::path first = work / "run1";
  const fs::path second = work / "run2";
  const fs::path log = work / "det.log";
  if (!fs::exists(first / "report.csv")) return {false, "end-to-end run missing"};
  const std::string common = "--manifest \"" + (work / "data" / "manifest.tsv").string() + "\" --out \"" + second.string() + "\"";
  for (const char* cmd : {"extract", "fit", "evaluate"})
    if (run_cli(cli, std::string(cmd) + " " + common, log) != 0) return {false, std::string(cmd) + " failed"};
  int files = 0;
  for (const auto& e : fs::directory_iterator(first)) {
    const fs::path other = second / e.path().filename();
    if (!fs::exists(other) || slurp(e.path()) != slurp(other))
      return {false, e.path().filename().string() + " differs between runs"};
    ++files;
  }
  for (const auto& e : fs::directory_iterator(second))
    if (!fs::exists(first / e.path().filename())) return {false, e.path().filename().string() + " only in second run"};
  return {files > 0, std::to_string(files) + " output files byte-identical across two runs"};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: " << argv[0] << " <scatfp-cli>\n";
    return 2;
  }
  const std::string cli = argv[1];
  std::random_device rd;
  const fs::path work = fs::temp_directory_path() / ("scatfp-acceptance-" + std::to_string(rd()));
  fs::create_directories(work);

  report(1, "structural fidelity", 5, structural);
  report(2, "cascade oracle equivalence", 60, cascade);
  report(3, "translation invariance", 60, translation);
  report(4, "PCA oracle", 30, pca_oracle);
  report(5, "SVM oracle", 120, svm_oracle);
  report(6, "EER correctness", 10, eer_checks);
  report(7, "end-to-end discrimination", 300, [&] { return end_to_end(cli, work); });
  report(8, "matching latency", 0, latency);
  report(9, "determinism", 0, [&] { return determinism(cli, work); });

  std::error_code ec;
  fs::remove_all(work, ec);
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
