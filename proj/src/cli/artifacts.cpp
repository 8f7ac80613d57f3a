#include "csm/cli/artifacts.hpp"

#include <unistd.h>

#include <fstream>
#include <nlohmann/json.hpp>

#include "csm/error.hpp"
#include "csm/png_io.hpp"

namespace csm::cli {

void atomic_write(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw InputError("cannot open for writing: " + tmp.string());
        out.write(reinterpret_cast<const char*>(bytes.data()),
                  static_cast<std::streamsize>(bytes.size()));
        if (!out) throw InputError("write failed: " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        throw InputError("rename to " + path.string() + " failed: " + ec.message());
    }
}

void write_saliency_artifact(const SaliencyMap& map, const std::filesystem::path& path) {
    atomic_write(path, serialize_saliency(map));
}

void write_png_artifact(const FaceImage& image, const std::filesystem::path& path) {
    atomic_write(path, encode_png(image));
}

void write_json_artifact(const nlohmann::json& doc, const std::filesystem::path& path) {
    const std::string text = doc.dump(2) + "\n";
    atomic_write(path, {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
}

}  // namespace csm::cli
