/**
 * @file pyramid.hpp
 * @brief Gaussian pyramid (5-tap binomial) and resampling helpers.
 */

#pragma once

#include <vector>

#include "fovc/field.hpp"

namespace fovc {

/// Level 0 is the input; each further level is binomial-blur + 2x decimate.
/// deg_per_px doubles per level. Throws ValidationError when the field is
/// smaller than 2^(levels-1) in either axis.
std::vector<ScalarField> gaussian_pyramid(const ScalarField& field, int levels);

/// One blur + decimate step (kernel [1,4,6,4,1]/16, renormalized borders).
ScalarField pyramid_reduce(const ScalarField& field);

/// Bilinear resample to (width, height); deg_per_px set by the caller's
/// target geometry.
ScalarField upsample_bilinear(const ScalarField& src, int width, int height, double deg_per_px);

/// Half-resolution operating point for a color image: per-channel binomial
/// blur + decimate, deg_per_px doubled.
RasterImage half_resolution(const RasterImage& img);

}  // namespace fovc
