#include "fovc/color.hpp"

#include <algorithm>
#include <cmath>

namespace fovc {

namespace {

// IEC 61966-2-1 sRGB primaries, D65 white.
constexpr double kRgbToXyz[3][3] = {
    {0.4124564, 0.3575761, 0.1804375},
    {0.2126729, 0.7151522, 0.0721750},
    {0.0193339, 0.1191920, 0.9503041},
};
constexpr double kXyzToRgb[3][3] = {
    {3.2404542, -1.5371385, -0.4985314},
    {-0.9692660, 1.8760108, 0.0415560},
    {0.0556434, -0.2040259, 1.0572252},
};
constexpr double kXn = 0.95047, kYn = 1.0, kZn = 1.08883;
constexpr double kDelta = 6.0 / 29.0;

inline double srgb_decode(double c) {
    return (c <= 0.04045) ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

inline double srgb_encode(double c) {
    return (c <= 0.0031308) ? 12.92 * c : 1.055 * std::pow(c, 1.0 / 2.4) - 0.055;
}

inline double lab_f(double t) {
    return (t > kDelta * kDelta * kDelta) ? std::cbrt(t)
                                          : t / (3.0 * kDelta * kDelta) + 4.0 / 29.0;
}

inline double lab_f_inv(double t) {
    return (t > kDelta) ? t * t * t : 3.0 * kDelta * kDelta * (t - 4.0 / 29.0);
}

}  // namespace

void srgb_to_lab(double r, double g, double b, double& L, double& a, double& bb) {
    const double rl = srgb_decode(r), gl = srgb_decode(g), bl = srgb_decode(b);
    const double x = kRgbToXyz[0][0] * rl + kRgbToXyz[0][1] * gl + kRgbToXyz[0][2] * bl;
    const double y = kRgbToXyz[1][0] * rl + kRgbToXyz[1][1] * gl + kRgbToXyz[1][2] * bl;
    const double z = kRgbToXyz[2][0] * rl + kRgbToXyz[2][1] * gl + kRgbToXyz[2][2] * bl;
    const double fx = lab_f(x / kXn), fy = lab_f(y / kYn), fz = lab_f(z / kZn);
    L = 116.0 * fy - 16.0;
    a = 500.0 * (fx - fy);
    bb = 200.0 * (fy - fz);
}

void lab_to_srgb(double L, double a, double b, double& r, double& g, double& bl) {
    const double fy = (L + 16.0) / 116.0;
    const double fx = fy + a / 500.0;
    const double fz = fy - b / 200.0;
    const double x = kXn * lab_f_inv(fx);
    const double y = kYn * lab_f_inv(fy);
    const double z = kZn * lab_f_inv(fz);
    const double rl = kXyzToRgb[0][0] * x + kXyzToRgb[0][1] * y + kXyzToRgb[0][2] * z;
    const double gl = kXyzToRgb[1][0] * x + kXyzToRgb[1][1] * y + kXyzToRgb[1][2] * z;
    const double b2 = kXyzToRgb[2][0] * x + kXyzToRgb[2][1] * y + kXyzToRgb[2][2] * z;
    r = std::clamp(srgb_encode(rl), 0.0, 1.0);
    g = std::clamp(srgb_encode(gl), 0.0, 1.0);
    bl = std::clamp(srgb_encode(b2), 0.0, 1.0);
}

LabImage srgb_to_lab(const RasterImage& img) {
    img.validate_shape();
    LabImage out;
    out.L = ScalarField(img.width, img.height, img.deg_per_px);
    out.a = ScalarField(img.width, img.height, img.deg_per_px);
    out.b = ScalarField(img.width, img.height, img.deg_per_px);
    const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
    for (std::size_t i = 0; i < n; ++i) {
        srgb_to_lab(img.rgb[3 * i], img.rgb[3 * i + 1], img.rgb[3 * i + 2], out.L.values[i],
                    out.a.values[i], out.b.values[i]);
    }
    return out;
}

RasterImage lab_to_srgb(const LabImage& lab) {
    lab.validate();
    RasterImage out(lab.L.width, lab.L.height, lab.L.deg_per_px);
    const std::size_t n = lab.L.size();
    for (std::size_t i = 0; i < n; ++i) {
        lab_to_srgb(lab.L.values[i], lab.a.values[i], lab.b.values[i], out.rgb[3 * i],
                    out.rgb[3 * i + 1], out.rgb[3 * i + 2]);
    }
    return out;
}

ScalarField grayscale(const RasterImage& img) {
    img.validate_shape();
    ScalarField out(img.width, img.height, img.deg_per_px);
    const std::size_t n = out.size();
    for (std::size_t i = 0; i < n; ++i) {
        out.values[i] =
            0.299 * img.rgb[3 * i] + 0.587 * img.rgb[3 * i + 1] + 0.114 * img.rgb[3 * i + 2];
    }
    return out;
}

}  // namespace fovc
