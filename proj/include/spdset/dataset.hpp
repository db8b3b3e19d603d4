#pragma once

// Directory-tree datasets laid out as root/<class>/<set>/<frame files>.

#include <filesystem>
#include <string>
#include <vector>

#include "spdset/descriptor.hpp"
#include "spdset/image.hpp"

namespace spdset {

struct SetEntry {
  int label = 0;
  std::filesystem::path dir;
  /// Decodable frames, lexicographic.
  std::vector<std::filesystem::path> frames;

  /// "<class>/<set>" relative to the dataset root.
  std::string id() const;
};

struct DatasetManifest {
  std::filesystem::path root;
  /// Class names, lexicographic; a set's label indexes this list.
  std::vector<std::string> classes;
  /// All sets grouped by class, lexicographic within a class.
  std::vector<SetEntry> sets;
  /// Indices into `sets` per class.
  std::vector<std::vector<std::size_t>> sets_by_class;
  /// Skipped frames and sets, one message each.
  std::vector<std::string> warnings;

  std::size_t min_sets_per_class() const;
};

/// Scans and decodes every frame once. Unreadable frames are skipped with a
/// warning; sets left with fewer than 2 frames are dropped. Throws EmptyDataset
/// when nothing usable is found and InsufficientSets when a class keeps fewer
/// than 2 sets.
DatasetManifest load_dataset(const std::filesystem::path& root);

/// Decodes and preprocesses the frames of one set.
ImageSet load_image_set(const SetEntry& entry, const PreprocessConfig& cfg);

}  // namespace spdset
