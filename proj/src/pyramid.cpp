#include "fovc/pyramid.hpp"

#include <algorithm>
#include <cmath>

#include "fovc/convolve.hpp"

namespace fovc {

namespace {

const std::vector<double> kBinomial5 = {1.0 / 16, 4.0 / 16, 6.0 / 16, 4.0 / 16, 1.0 / 16};

ScalarField decimate2(const ScalarField& src) {
    // Samples sit on the centered half-pixel grid (0.5 + 2k); bilinear
    // there is the mean of each 2x2 cell. Keeps even-sized pyramids
    // symmetric under 90-degree rotation.
    const int w = std::max(1, src.width / 2);
    const int h = std::max(1, src.height / 2);
    ScalarField out(w, h, src.deg_per_px * 2.0);
    for (int y = 0; y < h; ++y) {
        const int y0 = 2 * y;
        const int y1 = std::min(2 * y + 1, src.height - 1);
        for (int x = 0; x < w; ++x) {
            const int x0 = 2 * x;
            const int x1 = std::min(2 * x + 1, src.width - 1);
            out.at(x, y) =
                0.25 * (src.at(x0, y0) + src.at(x1, y0) + src.at(x0, y1) + src.at(x1, y1));
        }
    }
    return out;
}

}  // namespace

ScalarField pyramid_reduce(const ScalarField& field) {
    if (field.width < 2 || field.height < 2)
        throw ValidationError("pyramid_reduce: field too small to decimate");
    ScalarField blurred = sep_convolve(field, kBinomial5, kBinomial5, Border::Renormalize);
    return decimate2(blurred);
}

std::vector<ScalarField> gaussian_pyramid(const ScalarField& field, int levels) {
    if (levels < 1) throw ValidationError("gaussian_pyramid: levels must be >= 1");
    const int min_dim = 1 << (levels - 1);
    if (field.width < min_dim || field.height < min_dim)
        throw ValidationError("gaussian_pyramid: field smaller than 2^(levels-1) in an axis");
    std::vector<ScalarField> pyr;
    pyr.reserve(levels);
    pyr.push_back(field);
    for (int l = 1; l < levels; ++l) pyr.push_back(pyramid_reduce(pyr.back()));
    return pyr;
}

ScalarField upsample_bilinear(const ScalarField& src, int width, int height, double deg_per_px) {
    if (width <= 0 || height <= 0)
        throw ValidationError("upsample_bilinear: target dimensions must be positive");
    ScalarField out(width, height, deg_per_px);
    const double sx = static_cast<double>(src.width) / width;
    const double sy = static_cast<double>(src.height) / height;
    for (int y = 0; y < height; ++y) {
        double fy = (y + 0.5) * sy - 0.5;
        fy = std::clamp(fy, 0.0, static_cast<double>(src.height - 1));
        const int y0 = static_cast<int>(fy);
        const int y1 = std::min(y0 + 1, src.height - 1);
        const double wy = fy - y0;
        for (int x = 0; x < width; ++x) {
            double fx = (x + 0.5) * sx - 0.5;
            fx = std::clamp(fx, 0.0, static_cast<double>(src.width - 1));
            const int x0 = static_cast<int>(fx);
            const int x1 = std::min(x0 + 1, src.width - 1);
            const double wx = fx - x0;
            const double top = src.at(x0, y0) * (1 - wx) + src.at(x1, y0) * wx;
            const double bot = src.at(x0, y1) * (1 - wx) + src.at(x1, y1) * wx;
            out.at(x, y) = top * (1 - wy) + bot * wy;
        }
    }
    return out;
}

RasterImage half_resolution(const RasterImage& img) {
    img.validate_shape();
    ScalarField plane(img.width, img.height, img.deg_per_px);
    RasterImage out;
    const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
    for (int c = 0; c < 3; ++c) {
        for (std::size_t i = 0; i < n; ++i) plane.values[i] = img.rgb[3 * i + c];
        ScalarField small = pyramid_reduce(plane);
        if (c == 0) out = RasterImage(small.width, small.height, img.deg_per_px * 2.0);
        const std::size_t m = small.size();
        for (std::size_t i = 0; i < m; ++i)
            out.rgb[3 * i + c] = std::clamp(small.values[i], 0.0, 1.0);
    }
    return out;
}

}  // namespace fovc
