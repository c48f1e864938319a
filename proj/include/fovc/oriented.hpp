/**
 * @file oriented.hpp
 * @brief Steerable second-derivative-of-Gaussian quadrature filter bank.
 *
 * Orientation k of n covers angle k*pi/n measured from the x axis with y
 * pointing down, i.e. channel 0 responds to gratings that vary along x
 * (vertical stripes). Energy is the squared quadrature-pair response, so
 * it is locally phase invariant and rejects DC exactly.
 */

#pragma once

#include <vector>

#include "fovc/field.hpp"

namespace fovc {

/// Separable 1D factors of the G2/H2 basis, sampled for one sigma.
/// H2 amplitude is matched to G2 at the band-center frequency sqrt(2)/sigma
/// so a grating at that frequency produces ripple-free energy.
struct QuadratureBank {
    double sigma = 0.0;
    int radius = 0;
    std::vector<double> g;    // Gaussian window
    std::vector<double> d1;   // odd first-derivative factor
    std::vector<double> g2e;  // even second-derivative factor, zero mean
    std::vector<double> h2a;  // odd cubic Hilbert factor
    std::vector<double> h2b;  // even quadratic Hilbert factor
};

QuadratureBank make_quadrature_bank(double sigma_px);

/// Basis responses of one field; reused when several orientations are steered.
struct SteerableResponses {
    ScalarField g2a, g2b, g2c;
    ScalarField h2a, h2b, h2c, h2d;
};

SteerableResponses steerable_responses(const ScalarField& field, const QuadratureBank& bank);

/// Quadrature energy steered to `theta` radians (image coordinates, y down).
ScalarField steer_energy(const SteerableResponses& r, double theta);

/// One non-negative energy plane per orientation k*pi/n, k = 0..n-1.
std::vector<ScalarField> oriented_energy(const ScalarField& luminance, int n_orientations,
                                         double sigma_px = 2.0);

}  // namespace fovc
