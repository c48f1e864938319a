#include "support/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "fovc/image_io.hpp"

namespace fovc::testing {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

double lattice_noise(std::uint64_t seed, int xi, int yi) {
    std::uint64_t h = splitmix64(seed ^ (static_cast<std::uint64_t>(static_cast<std::uint32_t>(xi)) |
                                         (static_cast<std::uint64_t>(static_cast<std::uint32_t>(yi))
                                          << 32)));
    return (h >> 11) * 0x1.0p-53;
}

namespace {

inline double smoothstep(double t) { return t * t * (3.0 - 2.0 * t); }

// Soft quantization into flat plateaus with short smooth transitions.
// Natural scenes are piecewise smooth; this gives fixtures the sparse
// band-pass statistics that white noise lacks.
double terrace(double t, int levels, double softness) {
    const double scaled = std::clamp(t, 0.0, 1.0) * levels;
    const double base = std::floor(scaled);
    const double frac = scaled - base;
    const double s = std::clamp((frac - 0.5) / softness + 0.5, 0.0, 1.0);
    return std::clamp((base + smoothstep(s)) / levels, 0.0, 1.0);
}

double value_noise_octave(std::uint64_t seed, double x, double y, double cell) {
    const double fx = x / cell, fy = y / cell;
    const int x0 = static_cast<int>(std::floor(fx)), y0 = static_cast<int>(std::floor(fy));
    const double tx = smoothstep(fx - x0), ty = smoothstep(fy - y0);
    const double v00 = lattice_noise(seed, x0, y0);
    const double v10 = lattice_noise(seed, x0 + 1, y0);
    const double v01 = lattice_noise(seed, x0, y0 + 1);
    const double v11 = lattice_noise(seed, x0 + 1, y0 + 1);
    const double top = v00 * (1 - tx) + v10 * tx;
    const double bot = v01 * (1 - tx) + v11 * tx;
    return top * (1 - ty) + bot * ty;
}

}  // namespace

double value_noise(std::uint64_t seed, double x, double y, int octaves, double base_cell) {
    double acc = 0.0, amp = 1.0, total = 0.0, cell = base_cell;
    for (int o = 0; o < octaves; ++o) {
        acc += amp * value_noise_octave(seed + o * 17u, x, y, cell);
        total += amp;
        amp *= 0.5;
        cell *= 0.5;
    }
    return acc / total;
}

RasterImage make_fixture_image(int index, int width, int height, double deg_per_px) {
    const std::uint64_t seed = splitmix64(0xf0c5u + 977u * static_cast<std::uint64_t>(index));
    RasterImage img(width, height, deg_per_px);

    // Palette endpoints drift with the index so hue content varies.
    const double hue_lo[3] = {0.25 + 0.3 * lattice_noise(seed, 1, 0),
                              0.30 + 0.3 * lattice_noise(seed, 2, 0),
                              0.20 + 0.3 * lattice_noise(seed, 3, 0)};
    const double hue_hi[3] = {0.45 + 0.5 * lattice_noise(seed, 4, 0),
                              0.40 + 0.5 * lattice_noise(seed, 5, 0),
                              0.35 + 0.5 * lattice_noise(seed, 6, 0)};
    const double amplitude = 0.15 + 0.065 * index;  // clutter ramp across fixtures

    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const double n = terrace(value_noise(seed, x, y, 4, 64.0), 5, 0.3);
            const double t = 0.5 + amplitude * (n - 0.5) * 2.0;
            double r = hue_lo[0] * (1 - t) + hue_hi[0] * t;
            double g = hue_lo[1] * (1 - t) + hue_hi[1] * t;
            double b = hue_lo[2] * (1 - t) + hue_hi[2] * t;
            // Fine chroma structure grows with the index as well.
            const double c = terrace(value_noise(seed ^ 0xabcdu, x, y, 3, 12.0), 4, 0.35) - 0.5;
            r += amplitude * 0.6 * c;
            b -= amplitude * 0.5 * c;
            img.set_pixel(x, y, std::clamp(r, 0.0, 1.0), std::clamp(g, 0.0, 1.0),
                          std::clamp(b, 0.0, 1.0));
        }
    }

    // Soft high-contrast patches: more and stronger on higher indices.
    const int patches = 3 + index;
    for (int p = 0; p < patches; ++p) {
        const double cx = width * lattice_noise(seed, 100 + p, 1);
        const double cy = height * lattice_noise(seed, 100 + p, 2);
        const double rad = 8.0 + 40.0 * lattice_noise(seed, 100 + p, 3);
        const double pr = lattice_noise(seed, 100 + p, 4);
        const double pg = lattice_noise(seed, 100 + p, 5);
        const double pb = lattice_noise(seed, 100 + p, 6);
        const int x0 = std::max(0, static_cast<int>(cx - 3 * rad));
        const int x1 = std::min(width, static_cast<int>(cx + 3 * rad) + 1);
        const int y0 = std::max(0, static_cast<int>(cy - 3 * rad));
        const int y1 = std::min(height, static_cast<int>(cy + 3 * rad) + 1);
        for (int y = y0; y < y1; ++y) {
            for (int x = x0; x < x1; ++x) {
                const double d2 = ((x - cx) * (x - cx) + (y - cy) * (y - cy)) / (rad * rad);
                const double w = std::exp(-0.5 * d2) * std::min(1.0, 0.25 + 0.08 * index);
                double* px = img.pixel(x, y);
                px[0] = std::clamp(px[0] * (1 - w) + pr * w, 0.0, 1.0);
                px[1] = std::clamp(px[1] * (1 - w) + pg * w, 0.0, 1.0);
                px[2] = std::clamp(px[2] * (1 - w) + pb * w, 0.0, 1.0);
            }
        }
    }
    return img;
}

std::vector<std::string> write_fixture_set(const std::string& dir, int count) {
    std::filesystem::create_directories(dir);
    std::vector<std::string> ids;
    for (int i = 0; i < count; ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "fixture_%02d", i);
        const std::string path = dir + "/" + name + ".png";
        if (!std::filesystem::exists(path))
            io::write_png(path, make_fixture_image(i));
        ids.emplace_back(name);
    }
    return ids;
}

RasterImage make_constant_image(int width, int height, double deg_per_px, double gray) {
    RasterImage img(width, height, deg_per_px);
    for (double& v : img.rgb) v = gray;
    return img;
}

}  // namespace fovc::testing
