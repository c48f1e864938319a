/**
 * @file color.hpp
 * @brief sRGB <-> CIELab conversion (D65) and grayscale reduction.
 */

#pragma once

#include "fovc/field.hpp"

namespace fovc {

/// sRGB (piecewise gamma) to CIELab under the D65 reference white.
/// Total on valid input; L lands in [0,100] for in-gamut pixels.
LabImage srgb_to_lab(const RasterImage& img);

/// Inverse of srgb_to_lab on the sRGB gamut; out-of-gamut values clamp.
RasterImage lab_to_srgb(const LabImage& lab);

/// Single Lab triplet conversions, shared with tests and tools.
void srgb_to_lab(double r, double g, double b, double& L, double& a, double& bb);
void lab_to_srgb(double L, double a, double b, double& r, double& g, double& bl);

/// Rec.601 luma on the gamma-encoded channels (classic rgb2gray weighting).
ScalarField grayscale(const RasterImage& img);

}  // namespace fovc
