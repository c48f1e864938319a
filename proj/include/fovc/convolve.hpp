/**
 * @file convolve.hpp
 * @brief Separable convolutions and Gaussian local statistics.
 */

#pragma once

#include <vector>

#include "fovc/field.hpp"

namespace fovc {

/// Border policy for separable convolution.
///  - Renormalize: zero padding with the kernel mass renormalized over
///    in-bounds taps; preserves constants. Requires kernels normalized to
///    unit mass per axis.
///  - Reflect101: mirror without repeating the edge sample; preserves
///    constants for any kernel and keeps zero-mean kernels zero-mean.
enum class Border { Renormalize, Reflect101 };

/// Normalized 1D Gaussian, radius ceil(3 sigma), sum 1.
std::vector<double> gaussian_kernel(double sigma);

/// Horizontal-then-vertical pass with independent 1D kernels (odd lengths).
ScalarField sep_convolve(const ScalarField& src, const std::vector<double>& kx,
                         const std::vector<double>& ky, Border border);

ScalarField gaussian_blur(const ScalarField& src, double sigma, Border border);

/// Gaussian-weighted local mean with renormalized borders.
ScalarField local_mean(const ScalarField& src, double sigma);

/// Gaussian-weighted local variance E[x^2] - E[x]^2, clamped at zero.
ScalarField local_variance(const ScalarField& src, double sigma);

}  // namespace fovc
