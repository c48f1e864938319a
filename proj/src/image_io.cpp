#include "fovc/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <vector>

namespace fovc {
namespace io {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

[[noreturn]] void fail_io(const std::string& what, const std::string& path) {
    throw IoError(what + ": " + path);
}

}  // namespace

RasterImage read_png(const std::string& path, double deg_per_px) {
    if (!(deg_per_px > 0.0)) throw ValidationError("read_png: deg_per_px must be positive");
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp) fail_io("cannot open PNG", path);

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw IoError("libpng: out of memory");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw IoError("libpng: out of memory");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        fail_io("failed to decode PNG", path);
    }
    png_init_io(png, fp.get());
    png_read_info(png, info);

    const png_uint_32 w = png_get_image_width(png, info);
    const png_uint_32 h = png_get_image_height(png, info);
    const int color = png_get_color_type(png, info);
    const int depth = png_get_bit_depth(png, info);

    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    if (color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA)
        png_set_gray_to_rgb(png);
    png_set_strip_alpha(png);
    png_read_update_info(png, info);

    const int out_depth = png_get_bit_depth(png, info);
    const std::size_t stride = png_get_rowbytes(png, info);
    std::vector<png_byte> data(stride * h);
    std::vector<png_bytep> rows(h);
    for (png_uint_32 y = 0; y < h; ++y) rows[y] = data.data() + y * stride;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    RasterImage img(static_cast<int>(w), static_cast<int>(h), deg_per_px);
    const std::size_t n = static_cast<std::size_t>(w) * h;
    if (out_depth == 16) {
        for (std::size_t i = 0; i < n; ++i) {
            for (int c = 0; c < 3; ++c) {
                const png_byte* p = &data[i * 6 + 2 * c];  // network byte order
                const unsigned v = (static_cast<unsigned>(p[0]) << 8) | p[1];
                img.rgb[3 * i + c] = v / 65535.0;
            }
        }
    } else {
        for (std::size_t i = 0; i < n; ++i)
            for (int c = 0; c < 3; ++c) img.rgb[3 * i + c] = data[i * 3 + c] / 255.0;
    }
    return img;
}

namespace {

void write_png_rgb8(const std::string& path, int width, int height,
                    const std::vector<png_byte>& rgb) {
    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) fail_io("cannot create PNG", path);
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw IoError("libpng: out of memory");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw IoError("libpng: out of memory");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        fail_io("failed to encode PNG", path);
    }
    png_init_io(png, fp.get());
    png_set_compression_level(png, 6);  // fixed level keeps bytes reproducible
    png_set_IHDR(png, info, width, height, 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    std::vector<png_bytep> rows(height);
    for (int y = 0; y < height; ++y)
        rows[y] = const_cast<png_bytep>(&rgb[static_cast<std::size_t>(y) * width * 3]);
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

}  // namespace

void write_png(const std::string& path, const RasterImage& img) {
    img.validate_shape();
    std::vector<png_byte> rgb(3 * static_cast<std::size_t>(img.width) * img.height);
    for (std::size_t i = 0; i < rgb.size(); ++i) {
        const double v = std::clamp(img.rgb[i], 0.0, 1.0);
        rgb[i] = static_cast<png_byte>(std::lround(v * 255.0));
    }
    write_png_rgb8(path, img.width, img.height, rgb);
}

namespace {

void put_u16(std::string& buf, std::uint16_t v) {
    buf.push_back(static_cast<char>(v & 0xff));
    buf.push_back(static_cast<char>((v >> 8) & 0xff));
}

void put_u32(std::string& buf, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint16_t get_u16(const unsigned char* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t get_u32(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

}  // namespace

void write_cmap(const std::string& path, const ScalarField& field) {
    require_finite(field, "write_cmap");
    std::string buf;
    buf.reserve(24 + field.size() * 4);
    buf.append("CMAP", 4);
    put_u16(buf, kCmapVersion);
    put_u16(buf, 0);  // reserved
    put_u32(buf, static_cast<std::uint32_t>(field.width));
    put_u32(buf, static_cast<std::uint32_t>(field.height));
    for (double v : field.values) {
        const float f = static_cast<float>(v);
        std::uint32_t bits;
        std::memcpy(&bits, &f, 4);
        put_u32(buf, bits);
    }
    std::uint64_t dbits;
    std::memcpy(&dbits, &field.deg_per_px, 8);
    for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((dbits >> (8 * i)) & 0xff));

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail_io("cannot create CMAP", path);
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) fail_io("failed to write CMAP", path);
}

ScalarField read_cmap(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail_io("cannot open CMAP", path);
    std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (buf.size() < 24 || buf.compare(0, 4, "CMAP") != 0)
        fail_io("not a CMAP file", path);
    const auto* p = reinterpret_cast<const unsigned char*>(buf.data());
    const std::uint16_t version = get_u16(p + 4);
    if (version != kCmapVersion)
        throw IoError("unsupported CMAP version " + std::to_string(version) + ": " + path);
    const std::uint32_t w = get_u32(p + 8);
    const std::uint32_t h = get_u32(p + 12);
    const std::size_t expected = 16 + static_cast<std::size_t>(w) * h * 4 + 8;
    if (buf.size() != expected) fail_io("CMAP payload length mismatch", path);

    double dpp;
    std::uint64_t dbits = 0;
    for (int i = 0; i < 8; ++i)
        dbits |= static_cast<std::uint64_t>(p[buf.size() - 8 + i]) << (8 * i);
    std::memcpy(&dpp, &dbits, 8);

    ScalarField field(static_cast<int>(w), static_cast<int>(h), dpp);
    for (std::size_t i = 0; i < field.size(); ++i) {
        const std::uint32_t bits = get_u32(p + 16 + 4 * i);
        float f;
        std::memcpy(&f, &bits, 4);
        field.values[i] = f;
    }
    return field;
}

namespace {

// Viridis anchors (matplotlib data, public domain), interpolated linearly.
constexpr double kViridis[33][3] = {
    {0.267004, 0.004874, 0.329415}, {0.277018, 0.050344, 0.375715},
    {0.282327, 0.094955, 0.417331}, {0.282884, 0.135920, 0.453427},
    {0.278012, 0.180367, 0.486697}, {0.269308, 0.218818, 0.509577},
    {0.257322, 0.256130, 0.526563}, {0.243113, 0.292092, 0.538516},
    {0.225863, 0.330805, 0.547314}, {0.210503, 0.363727, 0.552206},
    {0.195860, 0.395433, 0.555276}, {0.182256, 0.426184, 0.557120},
    {0.168126, 0.459988, 0.558082}, {0.156270, 0.489624, 0.557936},
    {0.144759, 0.519093, 0.556572}, {0.133743, 0.548535, 0.553541},
    {0.123463, 0.581687, 0.547445}, {0.119423, 0.611141, 0.538982},
    {0.124780, 0.640461, 0.527068}, {0.143303, 0.669459, 0.511215},
    {0.166383, 0.690856, 0.496502}, {0.202219, 0.718701, 0.472873},
    {0.250425, 0.742231, 0.443533}, {0.306210, 0.764704, 0.406205},
    {0.369214, 0.788888, 0.382914}, {0.431080, 0.808473, 0.346476},
    {0.503493, 0.825798, 0.306377}, {0.582087, 0.839861, 0.258934},
    {0.664741, 0.851538, 0.207249}, {0.751884, 0.861126, 0.152568},
    {0.843229, 0.870295, 0.114965}, {0.928329, 0.884191, 0.124806},
    {0.993248, 0.906157, 0.143936},
};

void viridis(double t, png_byte* out) {
    t = std::clamp(t, 0.0, 1.0) * 32.0;
    const int i = std::min(31, static_cast<int>(t));
    const double f = t - i;
    for (int c = 0; c < 3; ++c) {
        const double v = kViridis[i][c] * (1 - f) + kViridis[i + 1][c] * f;
        out[c] = static_cast<png_byte>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
    }
}

}  // namespace

HeatmapRange write_heatmap_png(const std::string& path, const ScalarField& field) {
    require_finite(field, "write_heatmap_png");
    HeatmapRange range{field.min_value(), field.max_value()};
    const double span = range.max_value - range.min_value;
    std::vector<png_byte> rgb(3 * field.size());
    for (std::size_t i = 0; i < field.size(); ++i) {
        const double t = span > 0.0 ? (field.values[i] - range.min_value) / span : 0.0;
        viridis(t, &rgb[3 * i]);
    }
    write_png_rgb8(path, field.width, field.height, rgb);
    return range;
}

void write_label_png(const std::string& path, const RasterizedArch& raster) {
    std::vector<png_byte> rgb(3 * static_cast<std::size_t>(raster.width) * raster.height);
    for (std::size_t i = 0; i < raster.label.size(); ++i) {
        const std::int32_t l = raster.label[i];
        png_byte* p = &rgb[3 * i];
        if (l == RasterizedArch::kFovea) {
            p[0] = 40; p[1] = 90; p[2] = 220;  // fovea reads as blue
        } else if (l == RasterizedArch::kOutside) {
            p[0] = p[1] = p[2] = 0;
        } else {
            // Scramble the id into a stable distinct color.
            const std::uint32_t h = static_cast<std::uint32_t>(l) * 2654435761u;
            p[0] = static_cast<png_byte>(64 + (h & 0x7f));
            p[1] = static_cast<png_byte>(64 + ((h >> 8) & 0x7f));
            p[2] = static_cast<png_byte>(64 + ((h >> 16) & 0x7f));
        }
    }
    write_png_rgb8(path, raster.width, raster.height, rgb);
}

}  // namespace io
}  // namespace fovc
