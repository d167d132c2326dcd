#include "scatfp/manifest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <random>
#include <unordered_map>

#include "scatfp/errors.hpp"

namespace scatfp {

std::vector<ManifestEntry> DatasetManifest::train() const {
  std::vector<ManifestEntry> out;
  std::copy_if(entries.begin(), entries.end(), std::back_inserter(out),
               [](const ManifestEntry& e) { return e.split == Split::kTrain; });
  return out;
}

std::vector<ManifestEntry> DatasetManifest::test() const {
  std::vector<ManifestEntry> out;
  std::copy_if(entries.begin(), entries.end(), std::back_inserter(out),
               [](const ManifestEntry& e) { return e.split == Split::kTest; });
  return out;
}

DatasetManifest canonicalize(std::span<const LabeledPath> entries, std::span<const Split> splits) {
  if (entries.size() != splits.size()) throw ArgumentError("entries and splits differ in length");
  DatasetManifest manifest;
  std::unordered_map<std::int64_t, int> index;
  std::vector<bool> has_train;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    auto [it, inserted] = index.try_emplace(entries[i].subject, static_cast<int>(index.size()));
    if (inserted) {
      manifest.subject_ids.push_back(entries[i].subject);
      has_train.push_back(false);
    }
    if (splits[i] == Split::kTrain) has_train[it->second] = true;
    manifest.entries.push_back({entries[i].path, it->second, splits[i]});
  }
  for (std::size_t s = 0; s < has_train.size(); ++s) {
    if (!has_train[s])
      throw ValidationError("subject " + std::to_string(manifest.subject_ids[s]) +
                            " appears only in the test split");
  }
  return manifest;
}

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab == std::string_view::npos ? tab : tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return fields;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

ManifestFile read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest: " + path.string());
  const std::filesystem::path base = path.parent_path();
  const std::string where = path.string();

  std::vector<LabeledPath> entries;
  std::vector<Split> splits;
  std::optional<bool> with_split;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view = trim(line);
    if (view.empty() || view.front() == '#') continue;

    auto fields = split_tabs(view);
    if (fields.size() != 2 && fields.size() != 3)
      throw ParseError(where, lineno, "expected <path>\\t<subject-id>[\\t<train|test>]");
    const bool has_split = fields.size() == 3;
    if (with_split && *with_split != has_split)
      throw ParseError(where, lineno, "split column must be present on all lines or none");
    with_split = has_split;

    std::string_view rel = trim(fields[0]);
    if (rel.empty()) throw ParseError(where, lineno, "empty image path");
    std::string_view id_text = trim(fields[1]);
    std::int64_t subject = 0;
    auto [ptr, ec] = std::from_chars(id_text.data(), id_text.data() + id_text.size(), subject);
    if (ec != std::errc{} || ptr != id_text.data() + id_text.size())
      throw ParseError(where, lineno, "subject id is not an integer: '" + std::string(id_text) + "'");

    std::filesystem::path image_path(std::string{rel});
    if (image_path.is_relative()) image_path = base / image_path;
    entries.push_back({image_path, subject});

    if (has_split) {
      std::string_view s = trim(fields[2]);
      if (s == "train") {
        splits.push_back(Split::kTrain);
      } else if (s == "test") {
        splits.push_back(Split::kTest);
      } else {
        throw ParseError(where, lineno, "split must be 'train' or 'test', got '" + std::string(s) + "'");
      }
    }
  }
  if (in.bad()) throw IoError("error reading manifest: " + where);

  ManifestFile file;
  if (with_split.value_or(true)) {
    file.manifest = canonicalize(entries, splits);
  } else {
    file.unsplit = std::move(entries);
  }
  return file;
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
  ManifestFile file = read_manifest(path);
  if (!file.manifest) throw ValidationError(path.string() + ": manifest has no split column");
  return std::move(*file.manifest);
}

void write_manifest(const std::filesystem::path& path, const DatasetManifest& manifest) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write manifest: " + path.string());
  out << "# path\tsubject\tsplit\n";
  for (const auto& e : manifest.entries) {
    out << e.path.generic_string() << '\t' << manifest.subject_ids.at(e.label) << '\t'
        << (e.split == Split::kTrain ? "train" : "test") << '\n';
  }
  if (!out) throw IoError("error writing manifest: " + path.string());
}

DatasetManifest split_half(std::span<const LabeledPath> entries, std::uint64_t seed) {
  // Group entry indices by subject in first-appearance order.
  std::unordered_map<std::int64_t, std::size_t> group_of;
  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    auto [it, inserted] = group_of.try_emplace(entries[i].subject, groups.size());
    if (inserted) groups.emplace_back();
    groups[it->second].push_back(i);
  }

  std::mt19937_64 rng(seed);
  std::vector<Split> splits(entries.size(), Split::kTrain);
  for (auto& group : groups) {
    if (group.size() < 2)
      throw ValidationError("subject " + std::to_string(entries[group.front()].subject) +
                            " has fewer than two images");
    std::shuffle(group.begin(), group.end(), rng);
    const std::size_t n_train = (group.size() + 1) / 2;
    for (std::size_t k = n_train; k < group.size(); ++k) splits[group[k]] = Split::kTest;
  }
  return canonicalize(entries, splits);
}

DatasetManifest drop_subjects(const DatasetManifest& manifest, int count) {
  if (count < 0) throw ArgumentError("holdout count must be non-negative");
  if (count >= manifest.subject_count())
    throw ValidationError("holdout of " + std::to_string(count) + " subjects leaves none of " +
                          std::to_string(manifest.subject_count()));
  std::vector<LabeledPath> kept;
  std::vector<Split> splits;
  for (const auto& e : manifest.entries) {
    if (e.label < count) continue;
    kept.push_back({e.path, manifest.subject_ids[e.label]});
    splits.push_back(e.split);
  }
  return canonicalize(kept, splits);
}

}  // namespace scatfp
