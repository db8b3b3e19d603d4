#include "spdset/dataset.hpp"

#include <algorithm>
#include <system_error>

namespace spdset {
namespace fs = std::filesystem;

namespace {

std::vector<fs::path> sorted_children(const fs::path& dir, bool want_dirs) {
  std::vector<fs::path> out;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    const std::string name = entry.path().filename().string();
    if (name.empty() || name.front() == '.') continue;
    if (want_dirs ? entry.is_directory() : entry.is_regular_file()) out.push_back(entry.path());
  }
  if (ec) throw Error(ErrorCode::IoError, "cannot list " + dir.string() + ": " + ec.message());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::string SetEntry::id() const {
  return (dir.parent_path().filename() / dir.filename()).generic_string();
}

std::size_t DatasetManifest::min_sets_per_class() const {
  std::size_t m = sets_by_class.empty() ? 0 : sets_by_class.front().size();
  for (const auto& v : sets_by_class) m = std::min(m, v.size());
  return m;
}

DatasetManifest load_dataset(const fs::path& root) {
  if (!fs::is_directory(root)) {
    throw Error(ErrorCode::EmptyDataset, root.string() + " is not a directory");
  }
  DatasetManifest m;
  m.root = root;
  for (const fs::path& class_dir : sorted_children(root, true)) {
    std::vector<SetEntry> class_sets;
    const int label = static_cast<int>(m.classes.size());
    for (const fs::path& set_dir : sorted_children(class_dir, true)) {
      SetEntry entry{label, set_dir, {}};
      for (const fs::path& frame : sorted_children(set_dir, false)) {
        try {
          (void)read_pnm(frame);
          entry.frames.push_back(frame);
        } catch (const Error& e) {
          m.warnings.push_back("skipping frame: " + std::string(e.what()));
        }
      }
      if (entry.frames.size() < 2) {
        m.warnings.push_back("skipping set " + entry.id() + ": fewer than 2 readable frames");
        continue;
      }
      class_sets.push_back(std::move(entry));
    }
    if (class_sets.empty()) {
      m.warnings.push_back("skipping class " + class_dir.filename().string() + ": no usable sets");
      continue;
    }
    m.classes.push_back(class_dir.filename().string());
    std::vector<std::size_t> idx;
    for (auto& s : class_sets) {
      idx.push_back(m.sets.size());
      m.sets.push_back(std::move(s));
    }
    m.sets_by_class.push_back(std::move(idx));
  }
  if (m.sets.empty()) throw Error(ErrorCode::EmptyDataset, "no image sets under " + root.string());
  for (std::size_t c = 0; c < m.classes.size(); ++c) {
    if (m.sets_by_class[c].size() < 2) {
      throw Error(ErrorCode::InsufficientSets,
                  "class '" + m.classes[c] + "' has " + std::to_string(m.sets_by_class[c].size()) +
                      " image set(s), need at least 2");
    }
  }
  return m;
}

ImageSet load_image_set(const SetEntry& entry, const PreprocessConfig& cfg) {
  std::vector<Image> frames;
  frames.reserve(entry.frames.size());
  for (const fs::path& p : entry.frames) frames.push_back(preprocess_frame(read_pnm(p), cfg));
  return ImageSet(entry.label, std::move(frames), entry.id());
}

}  // namespace spdset
