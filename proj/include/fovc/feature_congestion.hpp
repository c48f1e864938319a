/**
 * @file feature_congestion.hpp
 * @brief Dense Feature Congestion clutter map and global score.
 *
 * Color, contrast and orientation variability are measured per pyramid
 * level, collapsed across scales by a pixelwise max, normalized per
 * feature and combined by a weighted sum. The global score is the mean
 * of the combined map.
 */

#pragma once

#include <vector>

#include "fovc/field.hpp"
#include "fovc/roi.hpp"

namespace fovc {
namespace fc {

/// Statistic used for chromatic variability.
enum class ColorStat {
    TraceSqrt,  // sqrt(var_a + var_b): total chroma spread
    CovVolume,  // det(cov)^(1/4): covariance-volume flavor
};

struct FcConfig {
    int n_scales = 3;
    double w_color = 1.0 / 3.0;
    double w_contrast = 1.0 / 3.0;
    double w_orient = 1.0 / 3.0;
    // Per-feature normalizers: standard deviation of each collapsed feature
    // over the bundled fixture set at the half-resolution operating point.
    double norm_color = 7.97;
    double norm_contrast = 0.35;
    double norm_orient = 2459.7;
    double pool_sigma_deg = 2.0;  // pooling sigma at level 0, in degrees
    double dog_center_sigma_px = 1.0;
    double dog_surround_ratio = 2.0;
    double orient_sigma_px = 2.0;
    int n_orientations = 4;
    ColorStat color_stat = ColorStat::TraceSqrt;

    void validate() const {
        if (n_scales < 1) throw ValidationError("FcConfig: n_scales must be >= 1");
        if (w_color < 0 || w_contrast < 0 || w_orient < 0)
            throw ValidationError("FcConfig: negative feature weight");
        if (w_color + w_contrast + w_orient <= 0.0)
            throw ValidationError("FcConfig: weights must not all be zero");
        if (!(norm_color > 0 && norm_contrast > 0 && norm_orient > 0))
            throw ValidationError("FcConfig: normalizers must be positive");
        if (!(pool_sigma_deg > 0)) throw ValidationError("FcConfig: pooling sigma must be positive");
    }

    /// Pooling sigma in pixels of the level-0 grid; constant across levels,
    /// so the pooled area in degrees doubles per level.
    double pool_sigma_px(double deg_per_px_level0) const {
        return std::max(0.5, pool_sigma_deg / deg_per_px_level0);
    }
};

struct FcResult {
    ScalarField map;     // dense clutter map at input resolution
    double score = 0.0;  // mean of map
};

/// Chromatic variability at one pyramid level: pooled covariance of (a,b).
ScalarField color_clutter(const LabImage& lab, int scale, const FcConfig& cfg);

/// Local standard deviation of a difference-of-Gaussians response on L.
ScalarField contrast_clutter(const LabImage& lab, int scale, const FcConfig& cfg);

/// Local variability of the opponent orientation-energy channels
/// (E0 - E90, E45 - E135).
ScalarField orientation_clutter(const LabImage& lab, int scale, const FcConfig& cfg);

/// Full pipeline: per-feature scale collapse (bilinear upsample + pixelwise
/// max), per-feature normalization, weighted sum, mean score.
FcResult fc_map(const RasterImage& img, const FcConfig& cfg);

/// Mean of the map over a clipped ROI, optionally excluding a target mask.
double fc_roi_score(const FcResult& result, const RoiSpec& roi,
                    const TargetMask& mask = TargetMask::none());

/// Mean excluding masked pixels (the full-map score used when a target is
/// removed). Falls back to the plain mean without a mask.
double masked_mean(const ScalarField& map, const TargetMask& mask);

}  // namespace fc
}  // namespace fovc
