#include "scatfp/scattering.hpp"

#include <algorithm>
#include <cmath>

namespace scatfp {

std::strong_ordering operator<=>(const ScatteringPath& a, const ScatteringPath& b) {
  if (auto c = a.layer() <=> b.layer(); c != 0) return c;
  for (int k = 0; k < a.layer(); ++k) {
    if (auto c = a.scales[k] <=> b.scales[k]; c != 0) return c;
    if (auto c = a.orientations[k] <=> b.orientations[k]; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

namespace {

std::size_t binomial(int n, int k) {
  std::size_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::size_t>(n - k + i) / static_cast<std::size_t>(i);
  return r;
}

void check_layers(int scales, int orientations, int max_layer) {
  if (scales < 1 || orientations < 1) throw ArgumentError("J and L must be at least 1");
  if (max_layer < 0) throw ArgumentError("layer count must be non-negative");
  if (max_layer > scales)
    throw ArgumentError("layer count " + std::to_string(max_layer) + " exceeds scale count " +
                        std::to_string(scales) + "; no strictly decreasing scale path exists");
}

}  // namespace

std::size_t path_count(int scales, int orientations, int max_layer) {
  check_layers(scales, orientations, max_layer);
  std::size_t total = 0;
  std::size_t lk = 1;
  for (int k = 0; k <= max_layer; ++k) {
    total += lk * binomial(scales, k);
    lk *= static_cast<std::size_t>(orientations);
  }
  return total;
}

std::vector<ScatteringPath> enumerate_paths(int scales, int orientations, int max_layer) {
  check_layers(scales, orientations, max_layer);
  std::vector<ScatteringPath> out{ScatteringPath{}};
  std::vector<ScatteringPath> frontier{ScatteringPath{}};
  for (int k = 1; k <= max_layer; ++k) {
    std::vector<ScatteringPath> next;
    for (const auto& parent : frontier) {
      const int bound = parent.scales.empty() ? scales : parent.scales.back();
      for (int j = 0; j < bound; ++j) {
        for (int l = 0; l < orientations; ++l) {
          ScatteringPath child = parent;
          child.scales.push_back(j);
          child.orientations.push_back(l);
          next.push_back(std::move(child));
        }
      }
    }
    out.insert(out.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  return out;
}

ScatteringResult scatter(const GrayImage& image, const FilterBank& bank, int max_layer) {
  if (image.width() != bank.width() || image.height() != bank.height())
    throw ArgumentError("image geometry does not match the filter bank");
  check_layers(bank.scales(), bank.orientations(), max_layer);

  const int w = image.width();
  const int h = image.height();
  const std::size_t n = static_cast<std::size_t>(w) * h;
  const Fft2d& fft = bank.fft();
  const RealGrid& phi = bank.lowpass();

  ScatteringResult result;
  result.params = {bank.scales(), bank.orientations(), max_layer, w, h};
  result.maps.reserve(path_count(bank.scales(), bank.orientations(), max_layer));

  // A node carries the spectrum of its propagated map U_p (the image at the
  // root, |U_parent * psi| below it).
  struct Node {
    ScatteringPath path;
    ComplexGrid spectrum;
  };

  ComplexGrid scratch(w, h);
  auto averaged = [&](const ComplexGrid& spectrum) {
    for (std::size_t i = 0; i < n; ++i) scratch[i] = spectrum[i] * phi[i];
    fft.inverse(scratch.values(), scratch.values());
    RealGrid out(w, h);
    for (std::size_t i = 0; i < n; ++i) out[i] = scratch[i].real();
    return out;
  };

  Node root{{}, ComplexGrid(w, h)};
  for (std::size_t i = 0; i < n; ++i) root.spectrum[i] = image.pixels()[i];
  fft.forward(root.spectrum.values(), root.spectrum.values());

  std::vector<Node> frontier;
  frontier.push_back(std::move(root));
  for (int layer = 0;; ++layer) {
    for (const auto& node : frontier) result.maps.push_back({node.path, averaged(node.spectrum)});
    if (layer == max_layer) break;

    std::vector<Node> next;
    for (const auto& parent : frontier) {
      const int bound = parent.path.scales.empty() ? bank.scales() : parent.path.scales.back();
      for (int j = 0; j < bound; ++j) {
        for (int l = 0; l < bank.orientations(); ++l) {
          const ComplexGrid& psi = bank.bandpass(j, l);
          Node child{parent.path, ComplexGrid(w, h)};
          child.path.scales.push_back(j);
          child.path.orientations.push_back(l);
          for (std::size_t i = 0; i < n; ++i) scratch[i] = parent.spectrum[i] * psi[i];
          fft.inverse(scratch.values(), scratch.values());
          for (std::size_t i = 0; i < n; ++i) child.spectrum[i] = std::abs(scratch[i]);
          fft.forward(child.spectrum.values(), child.spectrum.values());
          next.push_back(std::move(child));
        }
      }
    }
    frontier = std::move(next);
  }
  return result;
}

FeatureVector pool_features(const ScatteringResult& result) {
  if (result.maps.empty()) throw ArgumentError("scattering result has no maps");
  FeatureVector fv;
  fv.values.reserve(2 * result.maps.size());
  for (const auto& map : result.maps) {
    const auto values = map.values.values();
    const double count = static_cast<double>(values.size());
    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / count;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    fv.values.push_back(mean);
    fv.values.push_back(ss / count);
  }
  return fv;
}

FeatureVector extract_features(const GrayImage& image, const FilterBank& bank, int max_layer) {
  return pool_features(scatter(image, bank, max_layer));
}

}  // namespace scatfp
