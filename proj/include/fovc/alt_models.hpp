/**
 * @file alt_models.hpp
 * @brief Edge Density and Subband Entropy/Energy clutter models, dense and
 *        foveated through the same peripheral pipeline as Feature Congestion.
 */

#pragma once

#include <string>

#include "fovc/field.hpp"
#include "fovc/foveation.hpp"

namespace fovc {
namespace models {

enum class ModelKind { FeatureCongestion, EdgeDensity, SubbandEnergy };

ModelKind model_from_string(const std::string& s);
const char* model_name(ModelKind m);

struct EdgeThresholds {
    // Hysteresis levels relative to the maximum gradient magnitude.
    double high_frac = 0.3;
    double low_frac = 0.1;
};

struct SubbandConfig {
    int n_scales = 3;
    int n_orientations = 4;
    double chroma_weight = 0.08;  // weight of the a/b channels vs L
    double sigma_px = 2.0;
    int histogram_bins = 256;
};

struct ModelConfig {
    fc::FcConfig fc;
    EdgeThresholds edge;
    SubbandConfig subband;
};

/// Classic Edge Density ratio: hysteresis-thresholded gradient edges over
/// total pixels. In [0,1].
double edge_density_score(const RasterImage& img, const EdgeThresholds& thresholds = {});

/// Dense Edge Density surrogate: gradient magnitude of the grayscale image
/// (central differences inside, one-sided at borders).
ScalarField edge_density_dense(const RasterImage& img);

/// Subband Entropy score: mean Shannon entropy of binned band-pass
/// coefficients per (channel, scale, orientation), chrominance downweighted.
double subband_entropy_score(const RasterImage& img, const SubbandConfig& cfg = {});

/// Dense Subband Energy: weighted sum of squared quadrature subband
/// responses, upsampled to full resolution.
ScalarField subband_energy_dense(const RasterImage& img, const SubbandConfig& cfg = {});

/// Dense map + its global score (the map mean) for any model, computed on
/// the image as given (no resolution change).
struct DenseResult {
    ScalarField map;
    double score = 0.0;
};

DenseResult dense_map(ModelKind kind, const RasterImage& img, const ModelConfig& cfg);

/// Foveated score with the model's dense map substituted for the Feature
/// Congestion map; with ModelKind::FeatureCongestion this is exactly ffc().
fov::FfcScore foveated_score(ModelKind kind, const RasterImage& img, double fix_x, double fix_y,
                             double target_x, double target_y, const fov::FfcConfig& pipeline,
                             const ModelConfig& cfg);

}  // namespace models
}  // namespace fovc
