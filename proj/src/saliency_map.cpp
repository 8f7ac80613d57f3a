#include "csm/saliency_map.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "csm/error.hpp"

namespace csm {

SaliencyMap::SaliencyMap(int width, int height, Frame frame, std::vector<float> values,
                         MapMeta meta)
    : width_(width), height_(height), frame_(frame), values_(std::move(values)),
      meta_(std::move(meta)) {
    if (width < 1 || height < 1)
        throw ValidationError("saliency map dimensions must be >= 1");
    if (values_.size() != static_cast<std::size_t>(width) * height)
        throw ValidationError("saliency value count " + std::to_string(values_.size()) +
                              " does not match " + std::to_string(width) + "x" +
                              std::to_string(height));
    for (float v : values_)
        if (!std::isfinite(v)) throw ValidationError("saliency map contains non-finite value");
}

SaliencyMap SaliencyMap::zeros(int width, int height, Frame frame, MapMeta meta) {
    return SaliencyMap(width, height, frame,
                       std::vector<float>(static_cast<std::size_t>(width) * height, 0.0f),
                       std::move(meta));
}

CountMatrix::CountMatrix(int width, int height)
    : width_(width), height_(height),
      counts_(static_cast<std::size_t>(width) * height, 0) {
    if (width < 1 || height < 1) throw ValidationError("count matrix dimensions must be >= 1");
}

namespace {

constexpr char kMagic[4] = {'C', 'S', 'M', '1'};
constexpr std::size_t kHeaderSize = 16;

void put_u32le(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xff));
    out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xff));
    out.push_back(static_cast<std::uint8_t>((v >> 16) & 0xff));
    out.push_back(static_cast<std::uint8_t>((v >> 24) & 0xff));
}

std::uint32_t get_u32le(const std::uint8_t* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

}  // namespace

std::vector<std::uint8_t> serialize_saliency(const SaliencyMap& map) {
    for (float v : map.values())
        if (!std::isfinite(v)) throw ValidationError("refusing to write non-finite saliency map");

    std::vector<std::uint8_t> out;
    out.reserve(kHeaderSize + map.pixel_count() * 4);
    out.insert(out.end(), kMagic, kMagic + 4);
    put_u32le(out, static_cast<std::uint32_t>(map.width()));
    put_u32le(out, static_cast<std::uint32_t>(map.height()));
    out.push_back(static_cast<std::uint8_t>(map.frame()));
    out.insert(out.end(), 3, 0);
    static_assert(sizeof(float) == 4);
    for (float v : map.values()) {
        const auto bits = std::bit_cast<std::uint32_t>(v);
        put_u32le(out, bits);
    }
    return out;
}

SaliencyMap parse_saliency(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < kHeaderSize) throw FormatError("saliency file truncated: no header");
    if (std::memcmp(bytes.data(), kMagic, 4) != 0)
        throw FormatError("bad magic: not a CSM1 saliency file");
    const std::uint32_t w = get_u32le(bytes.data() + 4);
    const std::uint32_t h = get_u32le(bytes.data() + 8);
    const std::uint8_t frame_byte = bytes[12];
    if (frame_byte > 1)
        throw FormatError("unknown frame byte " + std::to_string(int(frame_byte)));
    if (w < 1 || h < 1 || w > (1u << 20) || h > (1u << 20))
        throw FormatError("implausible saliency dimensions");
    const std::size_t expected = kHeaderSize + static_cast<std::size_t>(w) * h * 4;
    if (bytes.size() != expected)
        throw FormatError("saliency payload size " + std::to_string(bytes.size()) +
                          " does not match expected " + std::to_string(expected));

    std::vector<float> values(static_cast<std::size_t>(w) * h);
    for (std::size_t i = 0; i < values.size(); ++i) {
        const std::uint32_t bits = get_u32le(bytes.data() + kHeaderSize + i * 4);
        values[i] = std::bit_cast<float>(bits);
        if (!std::isfinite(values[i]))
            throw FormatError("saliency payload contains non-finite value");
    }
    return SaliencyMap(static_cast<int>(w), static_cast<int>(h), static_cast<Frame>(frame_byte),
                       std::move(values));
}

void write_saliency(const SaliencyMap& map, const std::filesystem::path& path) {
    const auto bytes = serialize_saliency(map);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot open for writing: " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw InputError("write failed: " + path.string());
}

SaliencyMap read_saliency(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("saliency file not found: " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return parse_saliency(bytes);
}

}  // namespace csm
