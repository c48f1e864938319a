#include "fovc/feature_congestion.hpp"

#include <algorithm>
#include <cmath>

#include "fovc/color.hpp"
#include "fovc/convolve.hpp"
#include "fovc/oriented.hpp"
#include "fovc/pyramid.hpp"

namespace fovc {
namespace fc {

namespace {

ScalarField color_clutter_level(const ScalarField& a, const ScalarField& b, double sigma_px,
                                ColorStat stat) {
    ScalarField va = local_variance(a, sigma_px);
    ScalarField vb = local_variance(b, sigma_px);
    ScalarField out(a.width, a.height, a.deg_per_px);
    if (stat == ColorStat::TraceSqrt) {
        for (std::size_t i = 0; i < out.size(); ++i)
            out.values[i] = std::sqrt(va.values[i] + vb.values[i]);
        return out;
    }
    // Covariance volume needs the cross moment as well.
    ScalarField ab(a.width, a.height, a.deg_per_px);
    for (std::size_t i = 0; i < ab.size(); ++i) ab.values[i] = a.values[i] * b.values[i];
    ScalarField ma = local_mean(a, sigma_px);
    ScalarField mb = local_mean(b, sigma_px);
    ScalarField mab = local_mean(ab, sigma_px);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double cov = mab.values[i] - ma.values[i] * mb.values[i];
        const double det = std::max(0.0, va.values[i] * vb.values[i] - cov * cov);
        out.values[i] = std::pow(det, 0.25);
    }
    return out;
}

ScalarField contrast_clutter_level(const ScalarField& L, double sigma_px, const FcConfig& cfg) {
    const double sc = cfg.dog_center_sigma_px;
    const double ss = sc * cfg.dog_surround_ratio;
    ScalarField center = gaussian_blur(L, sc, Border::Reflect101);
    ScalarField surround = gaussian_blur(L, ss, Border::Reflect101);
    for (std::size_t i = 0; i < center.size(); ++i) center.values[i] -= surround.values[i];
    ScalarField var = local_variance(center, sigma_px);
    for (double& v : var.values) v = std::sqrt(v);
    return var;
}

ScalarField orientation_clutter_level(const ScalarField& L, double sigma_px,
                                      const FcConfig& cfg) {
    std::vector<ScalarField> energies =
        oriented_energy(L, cfg.n_orientations, cfg.orient_sigma_px);
    // Opponent channels pair orthogonal orientations; with four channels
    // these are (E0 - E90, E45 - E135).
    const int half = cfg.n_orientations / 2;
    ScalarField c1(L.width, L.height, L.deg_per_px);
    ScalarField c2(L.width, L.height, L.deg_per_px);
    for (std::size_t i = 0; i < c1.size(); ++i) {
        c1.values[i] = energies[0].values[i] - energies[half].values[i];
        c2.values[i] = energies[half / 2].values[i] - energies[half + half / 2].values[i];
    }
    ScalarField v1 = local_variance(c1, sigma_px);
    ScalarField v2 = local_variance(c2, sigma_px);
    for (std::size_t i = 0; i < v1.size(); ++i)
        v1.values[i] = std::sqrt(v1.values[i] + v2.values[i]);
    return v1;
}

struct LabPyramid {
    std::vector<ScalarField> L, a, b;
};

LabPyramid build_lab_pyramid(const LabImage& lab, int n_scales) {
    LabPyramid p;
    p.L = gaussian_pyramid(lab.L, n_scales);
    p.a = gaussian_pyramid(lab.a, n_scales);
    p.b = gaussian_pyramid(lab.b, n_scales);
    return p;
}

/// Upsample per-scale maps to level-0 geometry and take the pixelwise max.
ScalarField collapse_scales(const std::vector<ScalarField>& per_scale, int width, int height,
                            double deg_per_px) {
    ScalarField out(width, height, deg_per_px, 0.0);
    for (const ScalarField& m : per_scale) {
        if (m.width == width && m.height == height) {
            for (std::size_t i = 0; i < out.size(); ++i)
                out.values[i] = std::max(out.values[i], m.values[i]);
        } else {
            ScalarField up = upsample_bilinear(m, width, height, deg_per_px);
            for (std::size_t i = 0; i < out.size(); ++i)
                out.values[i] = std::max(out.values[i], up.values[i]);
        }
    }
    return out;
}

}  // namespace

ScalarField color_clutter(const LabImage& lab, int scale, const FcConfig& cfg) {
    cfg.validate();
    lab.validate();
    if (scale < 0 || scale >= cfg.n_scales)
        throw ValidationError("color_clutter: scale out of range");
    const double sigma = cfg.pool_sigma_px(lab.L.deg_per_px);
    const auto pa = gaussian_pyramid(lab.a, scale + 1);
    const auto pb = gaussian_pyramid(lab.b, scale + 1);
    return color_clutter_level(pa[scale], pb[scale], sigma, cfg.color_stat);
}

ScalarField contrast_clutter(const LabImage& lab, int scale, const FcConfig& cfg) {
    cfg.validate();
    lab.validate();
    if (scale < 0 || scale >= cfg.n_scales)
        throw ValidationError("contrast_clutter: scale out of range");
    const double sigma = cfg.pool_sigma_px(lab.L.deg_per_px);
    const auto pl = gaussian_pyramid(lab.L, scale + 1);
    return contrast_clutter_level(pl[scale], sigma, cfg);
}

ScalarField orientation_clutter(const LabImage& lab, int scale, const FcConfig& cfg) {
    cfg.validate();
    lab.validate();
    if (scale < 0 || scale >= cfg.n_scales)
        throw ValidationError("orientation_clutter: scale out of range");
    const double sigma = cfg.pool_sigma_px(lab.L.deg_per_px);
    const auto pl = gaussian_pyramid(lab.L, scale + 1);
    return orientation_clutter_level(pl[scale], sigma, cfg);
}

FcResult fc_map(const RasterImage& img, const FcConfig& cfg) {
    cfg.validate();
    img.validate_shape();
    const LabImage lab = srgb_to_lab(img);
    const LabPyramid pyr = build_lab_pyramid(lab, cfg.n_scales);
    const double sigma = cfg.pool_sigma_px(lab.L.deg_per_px);

    std::vector<ScalarField> color_maps, contrast_maps, orient_maps;
    color_maps.reserve(cfg.n_scales);
    contrast_maps.reserve(cfg.n_scales);
    orient_maps.reserve(cfg.n_scales);
    for (int s = 0; s < cfg.n_scales; ++s) {
        color_maps.push_back(color_clutter_level(pyr.a[s], pyr.b[s], sigma, cfg.color_stat));
        contrast_maps.push_back(contrast_clutter_level(pyr.L[s], sigma, cfg));
        orient_maps.push_back(orientation_clutter_level(pyr.L[s], sigma, cfg));
    }

    const int w = img.width, h = img.height;
    const double dpp = img.deg_per_px;
    ScalarField color = collapse_scales(color_maps, w, h, dpp);
    ScalarField contrast = collapse_scales(contrast_maps, w, h, dpp);
    ScalarField orient = collapse_scales(orient_maps, w, h, dpp);

    FcResult res;
    res.map = ScalarField(w, h, dpp);
    const double wc = cfg.w_color / cfg.norm_color;
    const double wk = cfg.w_contrast / cfg.norm_contrast;
    const double wo = cfg.w_orient / cfg.norm_orient;
    for (std::size_t i = 0; i < res.map.size(); ++i)
        res.map.values[i] =
            wc * color.values[i] + wk * contrast.values[i] + wo * orient.values[i];
    res.score = res.map.mean();
    require_finite(res.map, "fc_map");
    return res;
}

double masked_mean(const ScalarField& map, const TargetMask& mask) {
    if (!mask.present) return map.mean();
    double sum = 0.0;
    std::size_t n = 0;
    for (int y = 0; y < map.height; ++y) {
        for (int x = 0; x < map.width; ++x) {
            if (mask.masks(x, y)) continue;
            sum += map.at(x, y);
            ++n;
        }
    }
    if (n == 0) throw ValidationError("masked_mean: every pixel is masked");
    return sum / static_cast<double>(n);
}

double fc_roi_score(const FcResult& result, const RoiSpec& roi, const TargetMask& mask) {
    const PixelRect r = clip_roi(roi, result.map.width, result.map.height, result.map.deg_per_px);
    double sum = 0.0;
    std::size_t n = 0;
    for (int y = r.y0; y < r.y1; ++y) {
        for (int x = r.x0; x < r.x1; ++x) {
            if (mask.masks(x, y)) continue;
            sum += result.map.at(x, y);
            ++n;
        }
    }
    if (n == 0) throw ValidationError("fc_roi_score: ROI fully masked");
    return sum / static_cast<double>(n);
}

}  // namespace fc
}  // namespace fovc
