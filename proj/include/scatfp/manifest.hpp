#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace scatfp {

enum class Split { kTrain, kTest };

struct ManifestEntry {
  std::filesystem::path path;
  int label = 0;  // canonical subject index 0..M-1
  Split split = Split::kTrain;

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

/// Image list with canonical subject labels and a train/test assignment.
///
/// Invariants: labels are 0..M-1 in order of first appearance, and every
/// subject with a test image also has at least one training image.
struct DatasetManifest {
  std::vector<ManifestEntry> entries;
  /// subject_ids[label] is the identifier the subject had in the source file.
  std::vector<std::int64_t> subject_ids;

  int subject_count() const noexcept { return static_cast<int>(subject_ids.size()); }
  std::vector<ManifestEntry> train() const;
  std::vector<ManifestEntry> test() const;

  friend bool operator==(const DatasetManifest&, const DatasetManifest&) = default;
};

/// An image path and subject identifier without a split assignment.
struct LabeledPath {
  std::filesystem::path path;
  std::int64_t subject = 0;
};

/// Manifest file as read from disk. Lines are `<path>\t<subject-id>\t<train|test>`;
/// the split column may be omitted on every line, in which case `manifest` is
/// empty and `unsplit` carries the entries for split_half.
struct ManifestFile {
  std::optional<DatasetManifest> manifest;
  std::vector<LabeledPath> unsplit;
};

/// Parses a manifest. Relative image paths are resolved against the
/// manifest's directory. Throws ParseError (with line number) on malformed
/// lines and ValidationError if a subject appears only in the test split.
ManifestFile read_manifest(const std::filesystem::path& path);

/// Like read_manifest but requires the split column to be present.
DatasetManifest load_manifest(const std::filesystem::path& path);

/// Serialises a manifest in the on-disk format. Paths are written as given.
void write_manifest(const std::filesystem::path& path, const DatasetManifest& manifest);

/// Assigns each subject's images to train/test: a seeded per-subject shuffle,
/// then the first ceil(n/2) go to training. Entry order is preserved.
/// Throws ValidationError if any subject has fewer than two images.
DatasetManifest split_half(std::span<const LabeledPath> entries, std::uint64_t seed);

/// Relabels subjects 0..M-1 by first appearance and validates the split invariant.
DatasetManifest canonicalize(std::span<const LabeledPath> entries, std::span<const Split> splits);

/// Removes the first `count` subjects (in canonical order) and relabels the rest.
DatasetManifest drop_subjects(const DatasetManifest& manifest, int count);

}  // namespace scatfp
