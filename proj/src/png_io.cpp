#include "csm/png_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <csetjmp>
#include <cstring>
#include <fstream>

#include "csm/error.hpp"

namespace csm {

namespace {

struct ReadCursor {
    const std::uint8_t* data;
    std::size_t size;
    std::size_t pos;
};

void mem_read(png_structp png, png_bytep out, png_size_t n) {
    auto* cur = static_cast<ReadCursor*>(png_get_io_ptr(png));
    if (cur->pos + n > cur->size) {
        png_error(png, "read past end of buffer");
        return;
    }
    std::memcpy(out, cur->data + cur->pos, n);
    cur->pos += n;
}

void mem_write(png_structp png, png_bytep data, png_size_t n) {
    auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
    out->insert(out->end(), data, data + n);
}

void mem_flush(png_structp) {}

}  // namespace

FaceImage decode_png(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0)
        throw FormatError("not a PNG stream");

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw Error("libpng: create_read_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw Error("libpng: create_info_struct failed");
    }

    std::vector<std::uint8_t> pixels;
    int width = 0, height = 0, channels = 0;

    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw FormatError("PNG decode failed");
    }

    ReadCursor cursor{bytes.data(), bytes.size(), 0};
    png_set_read_fn(png, &cursor, mem_read);
    png_read_info(png, info);

    const png_byte color_type = png_get_color_type(png, info);
    const png_byte bit_depth = png_get_bit_depth(png, info);

    if (bit_depth == 16) png_set_strip_16(png);
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_strip_alpha(png);

    png_read_update_info(png, info);

    width = static_cast<int>(png_get_image_width(png, info));
    height = static_cast<int>(png_get_image_height(png, info));
    channels = static_cast<int>(png_get_channels(png, info));
    if (channels != 1 && channels != 3) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw FormatError("unsupported PNG channel count " + std::to_string(channels));
    }

    pixels.resize(static_cast<std::size_t>(width) * height * channels);
    std::vector<png_bytep> rows(height);
    const std::size_t row_bytes = static_cast<std::size_t>(width) * channels;
    for (int y = 0; y < height; ++y) rows[y] = pixels.data() + y * row_bytes;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    return FaceImage(width, height, channels, std::move(pixels));
}

std::vector<std::uint8_t> encode_png(const FaceImage& image) {
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw Error("libpng: create_write_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw Error("libpng: create_info_struct failed");
    }

    std::vector<std::uint8_t> out;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw Error("PNG encode failed");
    }

    png_set_write_fn(png, &out, mem_write, mem_flush);
    const int color_type =
        image.channels() == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB;
    png_set_IHDR(png, info, static_cast<png_uint_32>(image.width()),
                 static_cast<png_uint_32>(image.height()), 8, color_type, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    const std::size_t row_bytes = static_cast<std::size_t>(image.width()) * image.channels();
    std::vector<png_bytep> rows(image.height());
    const std::uint8_t* base = image.pixels().data();
    for (int y = 0; y < image.height(); ++y)
        rows[y] = const_cast<png_bytep>(base + y * row_bytes);
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    return out;
}

FaceImage read_png(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("image not found: " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return decode_png(bytes);
}

void write_png(const FaceImage& image, const std::filesystem::path& path) {
    const auto bytes = encode_png(image);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot open for writing: " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw InputError("write failed: " + path.string());
}

std::array<std::uint8_t, 3> ramp_color(double t) {
    t = std::clamp(t, 0.0, 1.0);
    // Piecewise-linear blue -> cyan -> yellow -> red.
    struct Stop {
        double t;
        double r, g, b;
    };
    static constexpr Stop stops[] = {
        {0.0, 0, 0, 255}, {1.0 / 3.0, 0, 255, 255}, {2.0 / 3.0, 255, 255, 0}, {1.0, 255, 0, 0}};
    for (int i = 0; i < 3; ++i) {
        if (t <= stops[i + 1].t) {
            const double u = (t - stops[i].t) / (stops[i + 1].t - stops[i].t);
            auto lerp = [u](double a, double b) { return a + (b - a) * u; };
            return {static_cast<std::uint8_t>(std::lround(lerp(stops[i].r, stops[i + 1].r))),
                    static_cast<std::uint8_t>(std::lround(lerp(stops[i].g, stops[i + 1].g))),
                    static_cast<std::uint8_t>(std::lround(lerp(stops[i].b, stops[i + 1].b)))};
        }
    }
    return {255, 0, 0};
}

FaceImage render_heatmap(const SaliencyMap& map) {
    const auto values = map.values();
    float lo = values[0], hi = values[0];
    for (float v : values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double span = static_cast<double>(hi) - lo;
    std::vector<std::uint8_t> pixels(map.pixel_count() * 3);
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double t = span > 0 ? (values[i] - lo) / span : 0.0;
        const auto rgb = ramp_color(t);
        pixels[i * 3 + 0] = rgb[0];
        pixels[i * 3 + 1] = rgb[1];
        pixels[i * 3 + 2] = rgb[2];
    }
    return FaceImage(map.width(), map.height(), 3, std::move(pixels));
}

void write_heatmap_png(const SaliencyMap& map, const std::filesystem::path& path) {
    write_png(render_heatmap(map), path);
}

FaceImage overlay_heatmap(const SaliencyMap& map, const FaceImage& base, double alpha) {
    if (map.width() != base.width() || map.height() != base.height())
        throw ValidationError("overlay: map and base image dimensions differ");
    alpha = std::clamp(alpha, 0.0, 1.0);
    const FaceImage heat = render_heatmap(map);
    std::vector<std::uint8_t> pixels(map.pixel_count() * 3);
    for (int y = 0; y < base.height(); ++y) {
        for (int x = 0; x < base.width(); ++x) {
            for (int c = 0; c < 3; ++c) {
                const double b = base.channels() == 3 ? base.at(x, y, c) : base.at(x, y, 0);
                const double h = heat.at(x, y, c);
                pixels[(static_cast<std::size_t>(y) * base.width() + x) * 3 + c] =
                    static_cast<std::uint8_t>(std::lround(alpha * h + (1.0 - alpha) * b));
            }
        }
    }
    return FaceImage(base.width(), base.height(), 3, std::move(pixels));
}

}  // namespace csm
