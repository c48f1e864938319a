/**
 * @file foveation.hpp
 * @brief Peripheral max-pooling of clutter maps, the PIFC coefficient and
 *        the fixation-dependent FFC score.
 *
 * A dense clutter map is pooled through the peripheral architecture
 * (region max, fovea copied). The PIFC coefficient is the mean distance
 * between the pooled and plain maps over a target-centered ROI; the FFC
 * score multiplies the global clutter score by that coefficient.
 */

#pragma once

#include <string>

#include "fovc/feature_congestion.hpp"
#include "fovc/field.hpp"
#include "fovc/peripheral_arch.hpp"
#include "fovc/roi.hpp"

namespace fovc {
namespace fov {

enum class Metric { L1, L2, KL };

Metric metric_from_string(const std::string& s);
const char* metric_name(Metric m);

/// Direction of the KL divergence between the normalized ROI crops.
enum class KlDirection {
    FoveatedFromPlain,  // D_KL(foveated || plain), the default
    PlainFromFoveated,
};

struct PifcResult {
    double coefficient = 0.0;
    Metric metric = Metric::L1;
    PixelRect roi;            // clipped ROI in map coordinates
    ScalarField roi_plain;    // crop of the input map
    ScalarField roi_foveated; // crop of the pooled map
    TargetMask mask;          // mask translated into ROI-local coordinates
};

struct FfcScore {
    double fc = 0.0;    // global clutter score, target excluded
    double pifc = 0.0;  // peripheral-integration coefficient
    double ffc = 0.0;   // fc * pifc, exactly
};

/// Max-pools each pooling region of `map` over its unmasked pixels; FOVEA
/// and OUTSIDE pixels copy the input. Masked pixels contribute to nothing
/// and are zero in the output.
ScalarField foveate_map(const ScalarField& map, const RasterizedArch& raster,
                        const TargetMask& mask = TargetMask::none());

/// Algorithm: rasterize at the fixation, foveate, crop both maps to the
/// clipped ROI and reduce the pointwise differences with the chosen metric.
/// Masked pixels are excluded everywhere.
PifcResult pifc(const ScalarField& map, const PeripheralArchitecture& arch, double fix_x,
                double fix_y, const RoiSpec& roi, const TargetMask& mask, Metric metric,
                double kl_epsilon = 1e-8,
                KlDirection kl_direction = KlDirection::FoveatedFromPlain);

/// The crop-and-reduce tail of pifc() for callers that already hold the
/// pooled map (the sweep reuses one foveation across every ROI and metric).
PifcResult pifc_from_pooled(const ScalarField& map, const ScalarField& pooled,
                            const RoiSpec& roi, const TargetMask& mask, Metric metric,
                            double kl_epsilon = 1e-8,
                            KlDirection kl_direction = KlDirection::FoveatedFromPlain);

/// The pointwise (foveated - plain) difference over the ROI, for heatmaps.
/// Masked pixels export as zero.
ScalarField pifc_map_export(const PifcResult& result);

struct FfcConfig {
    fc::FcConfig fc;
    ArchParams arch;
    double roi_side_deg = 6.0;
    Metric metric = Metric::L1;
    double kl_epsilon = 1e-8;
    KlDirection kl_direction = KlDirection::FoveatedFromPlain;
    // Operating point: inputs are halved once and deg_per_px doubled before
    // any processing. Disable when feeding pre-scaled images.
    bool half_resolution = true;
    // Side of the square target mask in degrees; 0 disables target removal.
    double target_size_deg = 0.0;
};

/// Shared tail of every foveated model: global masked mean of the dense
/// map times the PIFC coefficient around the target.
FfcScore foveated_pipeline(const ScalarField& dense_map, const PeripheralArchitecture& arch,
                           double fix_x, double fix_y, double target_x, double target_y,
                           const FfcConfig& cfg);

/// Feature Congestion end to end: dense FC map, PIFC at the fixation,
/// FFC = FC * PIFC. Coordinates are in input-image pixels and are scaled
/// internally when the half-resolution operating point is active.
FfcScore ffc(const RasterImage& img, double fix_x, double fix_y, double target_x,
             double target_y, const FfcConfig& cfg);

/// The map actually scored by ffc() for the same inputs (after the optional
/// half-resolution step), plus its geometry. Exposed for artifact export.
struct FfcArtifacts {
    FfcScore score;
    ScalarField dense_map;
    ScalarField foveated;
    PifcResult pifc;
};

FfcArtifacts ffc_artifacts(const RasterImage& img, double fix_x, double fix_y, double target_x,
                           double target_y, const FfcConfig& cfg);

}  // namespace fov
}  // namespace fovc
