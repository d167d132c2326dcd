#include "scatfp/feature_file.hpp"

#include <fstream>

#include "scatfp/binary_io.hpp"
#include "scatfp/errors.hpp"
#include "scatfp/report.hpp"

namespace scatfp {

void write_features(const std::filesystem::path& path, const FeatureSet& set) {
  const std::size_t length = 2 * path_count(set.params.scales, set.params.orientations, set.params.max_layer);
  binio::Writer w(path);
  w.magic("SCF1");
  w.u32(static_cast<std::uint32_t>(set.params.scales));
  w.u32(static_cast<std::uint32_t>(set.params.orientations));
  w.u32(static_cast<std::uint32_t>(set.params.max_layer));
  w.u32(static_cast<std::uint32_t>(set.params.width));
  w.u32(static_cast<std::uint32_t>(set.params.height));
  w.u32(static_cast<std::uint32_t>(length));
  w.u32(static_cast<std::uint32_t>(set.features.size()));
  for (const auto& f : set.features) {
    if (f.values.size() != length) throw ArgumentError("feature vector length does not match the header");
    if (!f.label) throw ArgumentError("feature vector has no label");
    w.i32(*f.label);
    w.f64s(f.values);
  }
  w.close();
}

FeatureSet read_features(const std::filesystem::path& path) {
  binio::Reader r(path);
  r.expect_magic("SCF1");
  FeatureSet set;
  set.params.scales = static_cast<int>(r.u32());
  set.params.orientations = static_cast<int>(r.u32());
  set.params.max_layer = static_cast<int>(r.u32());
  set.params.width = static_cast<int>(r.u32());
  set.params.height = static_cast<int>(r.u32());
  const std::uint32_t length = r.u32();
  const std::uint32_t count = r.u32();
  if (length == 0) throw ValidationError(path.string() + ": zero feature length");
  set.features.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    FeatureVector f;
    f.label = r.i32();
    f.values.resize(length);
    r.f64s(f.values);
    set.features.push_back(std::move(f));
  }
  if (!r.at_end()) throw ValidationError(path.string() + ": trailing bytes after the last record");
  return set;
}

std::string path_name(const ScatteringPath& path) {
  if (path.layer() == 0) return "S0";
  std::string name;
  for (int k = 0; k < path.layer(); ++k) {
    if (k > 0) name += '_';
    name += 'j' + std::to_string(path.scales[k]) + 'l' + std::to_string(path.orientations[k]);
  }
  return name;
}

void write_features_csv(const std::filesystem::path& path, const FeatureSet& set) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << "label";
  for (const auto& p : enumerate_paths(set.params.scales, set.params.orientations, set.params.max_layer)) {
    const std::string stem = path_name(p);
    out << ',' << stem << "_mean," << stem << "_var";
  }
  out << '\n';
  for (const auto& f : set.features) {
    out << f.label.value_or(-1);
    for (double v : f.values) out << ',' << format_number(v);
    out << '\n';
  }
  if (!out) throw IoError("error writing " + path.string());
}

}  // namespace scatfp
