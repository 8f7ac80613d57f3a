#pragma once

#include <filesystem>
#include <vector>

namespace csm::cli {

struct ManifestEntry {
    std::filesystem::path image;
    std::filesystem::path dcorr;
    int class_id = 0;
};

/// Tab-separated "image_path<TAB>dcorr_path<TAB>class" lines; '#' comments.
/// Relative paths resolve against the manifest's directory.
std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path);

}  // namespace csm::cli
