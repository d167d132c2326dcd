#include "scatfp/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "scatfp/errors.hpp"

namespace scatfp {

std::vector<RidgeSubject> make_subjects(int count, std::uint64_t seed) {
  if (count < 1) throw ArgumentError("subject count must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  // Orientation and ridge period are both stratified. Periods are spread
  // geometrically over [3, 14] pixels in shuffled bands so orientation
  // neighbours land at different scales.
  std::vector<int> band(count);
  for (int s = 0; s < count; ++s) band[s] = s;
  std::shuffle(band.begin(), band.end(), rng);
  std::vector<RidgeSubject> subjects(count);
  for (int s = 0; s < count; ++s) {
    auto& sub = subjects[s];
    sub.orientation = (s + 0.3 * unit(rng)) * std::numbers::pi / count;
    sub.period = 3.0 * std::pow(14.0 / 3.0, (band[s] + 0.5 * unit(rng)) / count);
    sub.curvature = -1.5 + 3.0 * unit(rng);
    sub.core_x = 0.35 + 0.3 * unit(rng);
    sub.core_y = 0.35 + 0.3 * unit(rng);
  }
  return subjects;
}

GrayImage render_ridges(const RidgeSubject& subject, int width, int height, std::mt19937_64* rng,
                        const RidgeJitter& jitter) {
  double dx = 0.0, dy = 0.0, rot = 0.0, scale = 1.0, contrast = 1.0;
  if (rng) {
    std::uniform_real_distribution<double> sym(-1.0, 1.0);
    dx = jitter.shift * sym(*rng);
    dy = jitter.shift * sym(*rng);
    rot = jitter.rotation * sym(*rng);
    scale = 1.0 + jitter.period_scale * sym(*rng);
    contrast = jitter.contrast_min + (1.0 - jitter.contrast_min) * (sym(*rng) + 1.0) / 2.0;
  }
  const double theta = subject.orientation + rot;
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double cx = subject.core_x * width + dx;
  const double cy = subject.core_y * height + dy;
  const double k = 2.0 * std::numbers::pi / (subject.period * scale);
  const double bend = subject.curvature / std::max(width, height);

  std::normal_distribution<double> noise(0.0, jitter.noise);
  RealGrid px(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double u = c * (x - cx) + s * (y - cy);
      const double v = -s * (x - cx) + c * (y - cy);
      double value = 0.5 + 0.4 * contrast * std::cos(k * (u + bend * v * v));
      if (rng && jitter.noise > 0.0) value += noise(*rng);
      px(y, x) = std::clamp(value, 0.0, 1.0);
    }
  }
  return GrayImage(std::move(px));
}

std::filesystem::path write_synthetic_dataset(const std::filesystem::path& dir, int subjects, int per_subject,
                                              int width, int height, std::uint64_t seed,
                                              const RidgeJitter& jitter) {
  if (per_subject < 2) throw ArgumentError("each subject needs at least two images");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string());

  const auto subs = make_subjects(subjects, seed);
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<LabeledPath> entries;
  for (int s = 0; s < subjects; ++s) {
    for (int i = 0; i < per_subject; ++i) {
      char name[64];
      std::snprintf(name, sizeof name, "s%03d_i%02d.pgm", s, i);
      write_pgm(dir / name, render_ridges(subs[s], width, height, &rng, jitter));
      entries.push_back({name, s});
    }
  }
  const auto manifest_path = dir / "manifest.tsv";
  write_manifest(manifest_path, split_half(entries, seed));
  return manifest_path;
}

}  // namespace scatfp
