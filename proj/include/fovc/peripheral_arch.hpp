/**
 * @file peripheral_arch.hpp
 * @brief Log-polar peripheral pooling architecture (Freeman-Simoncelli V1).
 *
 * The visual field outside a uniform fovea is tiled by pooling regions,
 * separable in polar angle and log eccentricity. Windows are cos^2
 * crossfades that sum to one across neighbors, so pooling neither loses
 * nor double-counts feature mass.
 */

#pragma once

#include <cstdint>
#include <vector>

#include "fovc/field.hpp"

namespace fovc {

struct ArchParams {
    double scale = 0.25;    // region size in the log-polar plane
    double e_r = 24.0;      // visual radius, degrees
    double fovea = 2.0;     // foveal radius, degrees; no pooling inside
    double e_0 = 0.25;      // innermost eccentricity, degrees
    double t_0 = 0.5;       // crossfade transition width
    int n_theta_override = 0;   // 0 derives round(2*pi/scale)
    int n_e_override = 0;       // 0 derives round(ln(e_r/e_0)/scale)
    double theta_offset = 0.0;  // optional rotation of the angular tiling

    void validate() const;
    int n_theta() const;
    int n_e() const;
    double w_theta() const;
    double w_e() const;
};

/// Piecewise cos^2 window: unit plateau with cosine-squared rising and
/// falling edges, zero outside (-(1+t0)/2, (1+t0)/2], continuous everywhere.
/// Unit-spaced copies sum to one.
double window_f(double x, double t0);

/// Angular window n evaluated at theta (radians); offsets wrap mod 2*pi.
double h_window(double theta, int n, const ArchParams& params);

/// Log-eccentricity window n evaluated at e (degrees, e > 0).
double g_window(double e, int n, const ArchParams& params);

struct PoolingRegion {
    int n_theta = 0;  // angular index
    int n_e = 0;      // eccentricity band index
    double theta_center = 0.0;  // radians
    double theta_width = 0.0;
    double log_e_center = 0.0;  // log degrees
    double log_e_width = 0.0;
};

/// Immutable once built; shareable across threads.
class PeripheralArchitecture {
public:
    PeripheralArchitecture(ArchParams params, std::vector<PoolingRegion> regions,
                           std::vector<int> kept_bands)
        : params_(params), regions_(std::move(regions)), kept_bands_(std::move(kept_bands)) {}

    const ArchParams& params() const { return params_; }
    const std::vector<PoolingRegion>& regions() const { return regions_; }
    const std::vector<int>& kept_bands() const { return kept_bands_; }

private:
    ArchParams params_;
    std::vector<PoolingRegion> regions_;
    std::vector<int> kept_bands_;
};

/// Enumerates every (n_theta, n_e) pooling region except those whose entire
/// radial support lies inside the fovea.
PeripheralArchitecture build_architecture(const ArchParams& params);

/// Hard per-pixel assignment of an architecture placed at a fixation.
struct RasterizedArch {
    static constexpr std::int32_t kFovea = -1;
    static constexpr std::int32_t kOutside = -2;

    int width = 0;
    int height = 0;
    double fix_x = 0.0, fix_y = 0.0;  // pixels
    double deg_per_px = 0.0;
    std::vector<std::int32_t> label;  // region index, kFovea, or kOutside

    std::int32_t at(int x, int y) const {
        return label[static_cast<std::size_t>(y) * width + x];
    }
};

/// Assigns each pixel to FOVEA (eccentricity <= fovea), the region with the
/// maximal window weight, or OUTSIDE where every window is zero. Ties break
/// toward the lower (n_e, n_theta). Throws when the fixation is out of bounds.
RasterizedArch rasterize(const PeripheralArchitecture& arch, int width, int height, double fix_x,
                         double fix_y, double deg_per_px);

}  // namespace fovc
