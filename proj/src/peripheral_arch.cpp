#include "fovc/peripheral_arch.hpp"

#include <algorithm>
#include <cmath>

namespace fovc {

namespace {

constexpr double kPi = 3.14159265358979323846;

inline double wrap_pi(double d) {
    // Reduce to (-pi, pi].
    d = std::fmod(d, 2.0 * kPi);
    if (d <= -kPi) d += 2.0 * kPi;
    if (d > kPi) d -= 2.0 * kPi;
    return d;
}

}  // namespace

void ArchParams::validate() const {
    if (!(scale > 0.0)) throw ValidationError("ArchParams: scale must be positive");
    if (!(e_0 > 0.0 && e_0 < fovea && fovea < e_r))
        throw ValidationError("ArchParams: requires 0 < e_0 < fovea < e_r");
    if (!(t_0 > 0.0 && t_0 <= 1.0)) throw ValidationError("ArchParams: t_0 must be in (0,1]");
    if (n_theta_override < 0 || n_e_override < 0)
        throw ValidationError("ArchParams: negative window-count override");
}

int ArchParams::n_theta() const {
    if (n_theta_override > 0) return n_theta_override;
    return std::max(1, static_cast<int>(std::lround(2.0 * kPi / scale)));
}

int ArchParams::n_e() const {
    if (n_e_override > 0) return n_e_override;
    return std::max(1, static_cast<int>(std::lround((std::log(e_r) - std::log(e_0)) / scale)));
}

double ArchParams::w_theta() const { return 2.0 * kPi / n_theta(); }

double ArchParams::w_e() const { return (std::log(e_r) - std::log(e_0)) / n_e(); }

double window_f(double x, double t0) {
    // The printed first-branch lower bound is degenerate; mirroring the
    // falling edge restores continuity and the partition of unity.
    const double lo = -(1.0 + t0) / 2.0;
    const double plateau_lo = (t0 - 1.0) / 2.0;
    const double plateau_hi = (1.0 - t0) / 2.0;
    const double hi = (1.0 + t0) / 2.0;
    if (x > lo && x <= plateau_lo) {
        const double c = std::cos(kPi / 2.0 * ((x - plateau_lo) / t0));
        return c * c;
    }
    if (x > plateau_lo && x <= plateau_hi) return 1.0;
    if (x > plateau_hi && x <= hi) {
        const double c = std::cos(kPi / 2.0 * ((x - hi) / t0));
        return 1.0 - c * c;
    }
    return 0.0;
}

double h_window(double theta, int n, const ArchParams& params) {
    const double wt = params.w_theta();
    const double center = wt * n + wt / 2.0 + params.theta_offset;
    return window_f(wrap_pi(theta - center) / wt, params.t_0);
}

double g_window(double e, int n, const ArchParams& params) {
    if (!(e > 0.0)) throw ValidationError("g_window: eccentricity must be positive");
    const double we = params.w_e();
    const double center = std::log(params.e_0) + we * (n + 1);
    return window_f((std::log(e) - center) / we, params.t_0);
}

PeripheralArchitecture build_architecture(const ArchParams& params) {
    params.validate();
    const int nt = params.n_theta();
    const int ne = params.n_e();
    const double wt = params.w_theta();
    const double we = params.w_e();
    const double support_half = (1.0 + params.t_0) / 2.0;

    std::vector<int> kept_bands;
    for (int b = 0; b < ne; ++b) {
        // Outer edge of the band's radial support; bands fully inside the
        // fovea pool nothing and are dropped.
        const double log_outer = std::log(params.e_0) + we * (b + 1) + support_half * we;
        if (std::exp(log_outer) > params.fovea) kept_bands.push_back(b);
    }

    std::vector<PoolingRegion> regions;
    regions.reserve(kept_bands.size() * static_cast<std::size_t>(nt));
    for (int b : kept_bands) {
        for (int t = 0; t < nt; ++t) {
            PoolingRegion r;
            r.n_theta = t;
            r.n_e = b;
            r.theta_center = wt * t + wt / 2.0 + params.theta_offset;
            r.theta_width = wt;
            r.log_e_center = std::log(params.e_0) + we * (b + 1);
            r.log_e_width = we;
            regions.push_back(r);
        }
    }
    return PeripheralArchitecture(params, std::move(regions), std::move(kept_bands));
}

RasterizedArch rasterize(const PeripheralArchitecture& arch, int width, int height, double fix_x,
                         double fix_y, double deg_per_px) {
    if (width <= 0 || height <= 0 || !(deg_per_px > 0.0))
        throw ValidationError("rasterize: invalid raster geometry");
    if (fix_x < 0.0 || fix_x > width - 1 || fix_y < 0.0 || fix_y > height - 1)
        throw ValidationError("rasterize: fixation out of image bounds");

    const ArchParams& p = arch.params();
    const int nt = p.n_theta();
    const std::vector<int>& bands = arch.kept_bands();

    // regions() enumerates bands in kept order, nt angular cells per band.
    std::vector<int> band_slot(static_cast<std::size_t>(p.n_e()), -1);
    for (std::size_t i = 0; i < bands.size(); ++i) band_slot[bands[i]] = static_cast<int>(i);

    RasterizedArch out;
    out.width = width;
    out.height = height;
    out.fix_x = fix_x;
    out.fix_y = fix_y;
    out.deg_per_px = deg_per_px;
    out.label.assign(static_cast<std::size_t>(width) * height, RasterizedArch::kOutside);

    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const double dx = x - fix_x;
            const double dy = y - fix_y;
            const double e = std::hypot(dx, dy) * deg_per_px;
            std::int32_t& lab = out.label[static_cast<std::size_t>(y) * width + x];
            if (e <= p.fovea) {
                lab = RasterizedArch::kFovea;
                continue;
            }
            double best_g = 0.0;
            int best_band = -1;
            for (int b : bands) {
                const double gv = g_window(e, b, p);
                if (gv > best_g) {  // strict: ties keep the lower band
                    best_g = gv;
                    best_band = b;
                }
            }
            if (best_band < 0) continue;  // beyond every window: OUTSIDE
            const double theta = std::atan2(dy, dx);
            double best_h = 0.0;
            int best_t = -1;
            for (int t = 0; t < nt; ++t) {
                const double hv = h_window(theta, t, p);
                if (hv > best_h) {
                    best_h = hv;
                    best_t = t;
                }
            }
            if (best_t < 0) continue;
            lab = static_cast<std::int32_t>(band_slot[best_band]) * nt + best_t;
        }
    }
    return out;
}

}  // namespace fovc
