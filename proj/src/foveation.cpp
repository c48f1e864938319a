#include "fovc/foveation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fovc/pyramid.hpp"

namespace fovc {
namespace fov {

Metric metric_from_string(const std::string& s) {
    if (s == "l1" || s == "L1") return Metric::L1;
    if (s == "l2" || s == "L2") return Metric::L2;
    if (s == "kl" || s == "KL") return Metric::KL;
    throw ValidationError("unknown metric '" + s + "' (expected l1, l2 or kl)");
}

const char* metric_name(Metric m) {
    switch (m) {
        case Metric::L1: return "l1";
        case Metric::L2: return "l2";
        case Metric::KL: return "kl";
    }
    return "?";
}

ScalarField foveate_map(const ScalarField& map, const RasterizedArch& raster,
                        const TargetMask& mask) {
    if (map.width != raster.width || map.height != raster.height)
        throw ValidationError("foveate_map: map and rasterized architecture differ in shape");

    // Pass 1: per-region max over unmasked pixels.
    std::int32_t max_label = -1;
    for (std::int32_t l : raster.label) max_label = std::max(max_label, l);
    std::vector<double> region_max(static_cast<std::size_t>(max_label + 1),
                                   -std::numeric_limits<double>::infinity());
    for (int y = 0; y < map.height; ++y) {
        for (int x = 0; x < map.width; ++x) {
            const std::int32_t l = raster.at(x, y);
            if (l < 0 || mask.masks(x, y)) continue;
            region_max[l] = std::max(region_max[l], map.at(x, y));
        }
    }

    // Pass 2: write the pooled map.
    ScalarField out(map.width, map.height, map.deg_per_px);
    for (int y = 0; y < map.height; ++y) {
        for (int x = 0; x < map.width; ++x) {
            double v;
            if (mask.masks(x, y)) {
                v = 0.0;
            } else {
                const std::int32_t l = raster.at(x, y);
                if (l < 0) {
                    v = map.at(x, y);  // fovea and outside copy the input
                } else {
                    const double m = region_max[l];
                    v = std::isfinite(m) ? m : 0.0;  // fully masked region
                }
            }
            out.at(x, y) = v;
        }
    }
    require_finite(out, "foveate_map");
    return out;
}

namespace {

ScalarField crop(const ScalarField& src, const PixelRect& r) {
    ScalarField out(r.width(), r.height(), src.deg_per_px);
    for (int y = r.y0; y < r.y1; ++y)
        for (int x = r.x0; x < r.x1; ++x) out.at(x - r.x0, y - r.y0) = src.at(x, y);
    return out;
}

TargetMask to_local(const TargetMask& mask, const PixelRect& r) {
    if (!mask.present) return TargetMask::none();
    TargetMask local;
    local.box.x0 = std::max(mask.box.x0 - r.x0, 0);
    local.box.y0 = std::max(mask.box.y0 - r.y0, 0);
    local.box.x1 = std::min(mask.box.x1 - r.x0, r.width());
    local.box.y1 = std::min(mask.box.y1 - r.y0, r.height());
    local.present = !local.box.empty();
    return local;
}

double metric_reduce(const ScalarField& plain, const ScalarField& fov, const TargetMask& local,
                     Metric metric, double eps, KlDirection dir) {
    std::vector<std::size_t> idx;
    idx.reserve(plain.size());
    for (int y = 0; y < plain.height; ++y)
        for (int x = 0; x < plain.width; ++x)
            if (!local.masks(x, y)) idx.push_back(static_cast<std::size_t>(y) * plain.width + x);
    if (idx.empty()) throw ValidationError("pifc: every ROI pixel is masked");
    const double n = static_cast<double>(idx.size());

    switch (metric) {
        case Metric::L1: {
            double s = 0.0;
            for (std::size_t i : idx) s += std::fabs(fov.values[i] - plain.values[i]);
            return s / n;
        }
        case Metric::L2: {
            double s = 0.0;
            for (std::size_t i : idx) {
                const double d = fov.values[i] - plain.values[i];
                s += d * d;
            }
            return std::sqrt(s / n);
        }
        case Metric::KL: {
            double zp = 0.0, zr = 0.0;
            for (std::size_t i : idx) {
                zp += fov.values[i] + eps;
                zr += plain.values[i] + eps;
            }
            double s = 0.0;
            for (std::size_t i : idx) {
                const double p = (fov.values[i] + eps) / zp;
                const double r = (plain.values[i] + eps) / zr;
                if (dir == KlDirection::FoveatedFromPlain)
                    s += p * std::log(p / r);
                else
                    s += r * std::log(r / p);
            }
            return s / n;
        }
    }
    throw InternalError("pifc: unreachable metric");
}

}  // namespace

PifcResult pifc_from_pooled(const ScalarField& map, const ScalarField& pooled,
                            const RoiSpec& roi, const TargetMask& mask, Metric metric,
                            double kl_epsilon, KlDirection kl_direction) {
    if (!map.same_shape(pooled))
        throw ValidationError("pifc_from_pooled: map and pooled map differ in shape");
    const PixelRect r = clip_roi(roi, map.width, map.height, map.deg_per_px);

    PifcResult res;
    res.metric = metric;
    res.roi = r;
    res.roi_plain = crop(map, r);
    res.roi_foveated = crop(pooled, r);
    res.mask = to_local(mask, r);
    res.coefficient = metric_reduce(res.roi_plain, res.roi_foveated, res.mask, metric,
                                    kl_epsilon, kl_direction);
    if (!std::isfinite(res.coefficient))
        throw InternalError("pifc: non-finite coefficient (map must be non-negative)");
    return res;
}

PifcResult pifc(const ScalarField& map, const PeripheralArchitecture& arch, double fix_x,
                double fix_y, const RoiSpec& roi, const TargetMask& mask, Metric metric,
                double kl_epsilon, KlDirection kl_direction) {
    const RasterizedArch raster =
        rasterize(arch, map.width, map.height, fix_x, fix_y, map.deg_per_px);
    const ScalarField pooled = foveate_map(map, raster, mask);
    return pifc_from_pooled(map, pooled, roi, mask, metric, kl_epsilon, kl_direction);
}

ScalarField pifc_map_export(const PifcResult& result) {
    ScalarField out(result.roi_plain.width, result.roi_plain.height, result.roi_plain.deg_per_px);
    for (int y = 0; y < out.height; ++y) {
        for (int x = 0; x < out.width; ++x) {
            out.at(x, y) = result.mask.masks(x, y)
                               ? 0.0
                               : result.roi_foveated.at(x, y) - result.roi_plain.at(x, y);
        }
    }
    require_finite(out, "pifc_map_export");
    return out;
}

FfcScore foveated_pipeline(const ScalarField& dense_map, const PeripheralArchitecture& arch,
                           double fix_x, double fix_y, double target_x, double target_y,
                           const FfcConfig& cfg) {
    TargetMask mask = TargetMask::none();
    if (cfg.target_size_deg > 0.0)
        mask = TargetMask::centered(target_x, target_y, cfg.target_size_deg,
                                    dense_map.deg_per_px, dense_map.width, dense_map.height);
    RoiSpec roi;
    roi.center_x = target_x;
    roi.center_y = target_y;
    roi.side_deg = cfg.roi_side_deg;

    FfcScore score;
    score.fc = fc::masked_mean(dense_map, mask);
    score.pifc = pifc(dense_map, arch, fix_x, fix_y, roi, mask, cfg.metric, cfg.kl_epsilon,
                      cfg.kl_direction)
                     .coefficient;
    score.ffc = score.fc * score.pifc;
    return score;
}

namespace {

struct OperatingPoint {
    RasterImage image;
    double sx = 1.0, sy = 1.0;  // input -> operating coordinate scale
};

OperatingPoint to_operating_point(const RasterImage& img, const FfcConfig& cfg) {
    OperatingPoint op;
    if (cfg.half_resolution) {
        op.image = half_resolution(img);
        op.sx = static_cast<double>(op.image.width) / img.width;
        op.sy = static_cast<double>(op.image.height) / img.height;
    } else {
        op.image = img;
    }
    return op;
}

}  // namespace

FfcScore ffc(const RasterImage& img, double fix_x, double fix_y, double target_x,
             double target_y, const FfcConfig& cfg) {
    const OperatingPoint op = to_operating_point(img, cfg);
    const fc::FcResult dense = fc::fc_map(op.image, cfg.fc);
    const PeripheralArchitecture arch = build_architecture(cfg.arch);
    return foveated_pipeline(dense.map, arch, fix_x * op.sx, fix_y * op.sy, target_x * op.sx,
                             target_y * op.sy, cfg);
}

FfcArtifacts ffc_artifacts(const RasterImage& img, double fix_x, double fix_y, double target_x,
                           double target_y, const FfcConfig& cfg) {
    const OperatingPoint op = to_operating_point(img, cfg);
    const fc::FcResult dense = fc::fc_map(op.image, cfg.fc);
    const PeripheralArchitecture arch = build_architecture(cfg.arch);

    const double fx = fix_x * op.sx, fy = fix_y * op.sy;
    const double tx = target_x * op.sx, ty = target_y * op.sy;

    TargetMask mask = TargetMask::none();
    if (cfg.target_size_deg > 0.0)
        mask = TargetMask::centered(tx, ty, cfg.target_size_deg, dense.map.deg_per_px,
                                    dense.map.width, dense.map.height);
    RoiSpec roi{tx, ty, cfg.roi_side_deg};

    FfcArtifacts art;
    art.dense_map = dense.map;
    const RasterizedArch raster =
        rasterize(arch, dense.map.width, dense.map.height, fx, fy, dense.map.deg_per_px);
    art.foveated = foveate_map(dense.map, raster, mask);
    art.pifc = pifc(dense.map, arch, fx, fy, roi, mask, cfg.metric, cfg.kl_epsilon,
                    cfg.kl_direction);
    art.score.fc = fc::masked_mean(dense.map, mask);
    art.score.pifc = art.pifc.coefficient;
    art.score.ffc = art.score.fc * art.score.pifc;
    return art;
}

}  // namespace fov
}  // namespace fovc
