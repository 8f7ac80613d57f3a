#include "csm/cli/manifest.hpp"

#include <fstream>

#include "csm/error.hpp"

namespace csm::cli {

std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("manifest not found: " + path.string());
    const auto base = path.parent_path();

    std::vector<ManifestEntry> entries;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;

        const auto tab1 = line.find('\t');
        const auto tab2 = tab1 == std::string::npos ? std::string::npos : line.find('\t', tab1 + 1);
        if (tab1 == std::string::npos || tab2 == std::string::npos)
            throw ParseError("expected 'image<TAB>dcorr<TAB>class'", line_no);

        ManifestEntry entry;
        std::filesystem::path image = line.substr(0, tab1);
        std::filesystem::path dcorr = line.substr(tab1 + 1, tab2 - tab1 - 1);
        const std::string class_str = line.substr(tab2 + 1);
        try {
            std::size_t pos = 0;
            entry.class_id = std::stoi(class_str, &pos);
            if (pos != class_str.size()) throw std::invalid_argument(class_str);
        } catch (const std::exception&) {
            throw ParseError("bad class id '" + class_str + "'", line_no);
        }
        entry.image = image.is_absolute() ? image : base / image;
        entry.dcorr = dcorr.is_absolute() ? dcorr : base / dcorr;
        entries.push_back(std::move(entry));
    }
    if (entries.empty()) throw ValidationError("manifest lists no entries: " + path.string());
    return entries;
}

}  // namespace csm::cli
