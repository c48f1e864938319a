#include "fovc/alt_models.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "fovc/color.hpp"
#include "fovc/oriented.hpp"
#include "fovc/pyramid.hpp"

namespace fovc {
namespace models {

ModelKind model_from_string(const std::string& s) {
    if (s == "fc") return ModelKind::FeatureCongestion;
    if (s == "ed") return ModelKind::EdgeDensity;
    if (s == "se") return ModelKind::SubbandEnergy;
    throw ValidationError("unknown model '" + s + "' (expected fc, ed or se)");
}

const char* model_name(ModelKind m) {
    switch (m) {
        case ModelKind::FeatureCongestion: return "fc";
        case ModelKind::EdgeDensity: return "ed";
        case ModelKind::SubbandEnergy: return "se";
    }
    return "?";
}

ScalarField edge_density_dense(const RasterImage& img) {
    const ScalarField gray = grayscale(img);
    ScalarField out(gray.width, gray.height, gray.deg_per_px);
    const int w = gray.width, h = gray.height;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double gx, gy;
            if (x == 0)
                gx = gray.at(1 < w ? 1 : 0, y) - gray.at(0, y);
            else if (x == w - 1)
                gx = gray.at(w - 1, y) - gray.at(w - 2, y);
            else
                gx = 0.5 * (gray.at(x + 1, y) - gray.at(x - 1, y));
            if (y == 0)
                gy = gray.at(x, 1 < h ? 1 : 0) - gray.at(x, 0);
            else if (y == h - 1)
                gy = gray.at(x, h - 1) - gray.at(x, h - 2);
            else
                gy = 0.5 * (gray.at(x, y + 1) - gray.at(x, y - 1));
            out.at(x, y) = std::hypot(gx, gy);
        }
    }
    require_finite(out, "edge_density_dense");
    return out;
}

namespace {

// Forward-difference gradient for the binary detector. Central differences
// are blind to single-pixel (Nyquist) structure, which the edge ratio must
// see; the dense map keeps central differences for exact ramps.
ScalarField detector_gradient(const ScalarField& gray) {
    ScalarField out(gray.width, gray.height, gray.deg_per_px);
    const int w = gray.width, h = gray.height;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double gx = (x + 1 < w) ? gray.at(x + 1, y) - gray.at(x, y) : 0.0;
            const double gy = (y + 1 < h) ? gray.at(x, y + 1) - gray.at(x, y) : 0.0;
            out.at(x, y) = std::hypot(gx, gy);
        }
    }
    return out;
}

}  // namespace

double edge_density_score(const RasterImage& img, const EdgeThresholds& thresholds) {
    if (!(thresholds.high_frac >= thresholds.low_frac && thresholds.low_frac >= 0.0))
        throw ValidationError("edge_density_score: thresholds must satisfy 0 <= low <= high");
    const ScalarField mag = detector_gradient(grayscale(img));
    const double peak = mag.max_value();
    if (peak <= 0.0) return 0.0;
    const double hi = thresholds.high_frac * peak;
    const double lo = thresholds.low_frac * peak;

    const int w = mag.width, h = mag.height;
    std::vector<std::uint8_t> state(mag.size(), 0);  // 1 = edge
    std::deque<std::pair<int, int>> queue;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (mag.at(x, y) >= hi && !state[static_cast<std::size_t>(y) * w + x]) {
                state[static_cast<std::size_t>(y) * w + x] = 1;
                queue.emplace_back(x, y);
            }
        }
    }
    // Hysteresis: grow strong edges through weak (>= lo) 8-neighbors.
    while (!queue.empty()) {
        auto [cx, cy] = queue.front();
        queue.pop_front();
        for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
                const int nx = cx + dx, ny = cy + dy;
                if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
                std::uint8_t& s = state[static_cast<std::size_t>(ny) * w + nx];
                if (!s && mag.at(nx, ny) >= lo) {
                    s = 1;
                    queue.emplace_back(nx, ny);
                }
            }
        }
    }
    std::size_t edges = 0;
    for (std::uint8_t s : state) edges += s;
    return static_cast<double>(edges) / static_cast<double>(mag.size());
}

namespace {

double histogram_entropy_bits(const ScalarField& band, int bins) {
    // Bins span mean +- 4 sigma with outliers clamped into the end bins.
    // Binning over the observed min/max lets a single extreme coefficient
    // compress the histogram of dense noise below that of sparse natural
    // structure, inverting the intended ranking.
    double mean = 0.0;
    for (double v : band.values) mean += v;
    mean /= static_cast<double>(band.size());
    double var = 0.0;
    for (double v : band.values) var += (v - mean) * (v - mean);
    var /= static_cast<double>(band.size());
    const double sigma = std::sqrt(var);
    const double magnitude = std::max({1.0, std::fabs(mean)});
    if (!(sigma > 1e-10 * magnitude)) return 0.0;  // flat subband

    const double lo = mean - 4.0 * sigma;
    const double scale = bins / (8.0 * sigma);
    std::vector<std::size_t> counts(static_cast<std::size_t>(bins), 0);
    for (double v : band.values) {
        int b = static_cast<int>((v - lo) * scale);
        b = std::clamp(b, 0, bins - 1);
        ++counts[b];
    }
    const double n = static_cast<double>(band.size());
    double ent = 0.0;
    for (std::size_t c : counts) {
        if (c == 0) continue;
        const double p = c / n;
        ent -= p * std::log2(p);
    }
    return ent;
}

}  // namespace

double subband_entropy_score(const RasterImage& img, const SubbandConfig& cfg) {
    if (cfg.n_scales < 1 || cfg.n_orientations < 2)
        throw ValidationError("subband_entropy_score: invalid decomposition shape");
    const LabImage lab = srgb_to_lab(img);
    const QuadratureBank bank = make_quadrature_bank(cfg.sigma_px);
    const double pi = std::acos(-1.0);

    double weighted_sum = 0.0, weight_total = 0.0;
    const ScalarField* channels[3] = {&lab.L, &lab.a, &lab.b};
    for (int c = 0; c < 3; ++c) {
        const double w = (c == 0) ? 1.0 : cfg.chroma_weight;
        const auto pyr = gaussian_pyramid(*channels[c], cfg.n_scales);
        for (int s = 0; s < cfg.n_scales; ++s) {
            const SteerableResponses resp = steerable_responses(pyr[s], bank);
            for (int k = 0; k < cfg.n_orientations; ++k) {
                const double theta = k * pi / cfg.n_orientations;
                // Band-pass coefficients: the even (G2) response.
                const double cth = std::cos(-theta), sth = std::sin(-theta);
                const double ka = cth * cth, kb = -2.0 * cth * sth, kc = sth * sth;
                ScalarField band(pyr[s].width, pyr[s].height, pyr[s].deg_per_px);
                for (std::size_t i = 0; i < band.size(); ++i)
                    band.values[i] = ka * resp.g2a.values[i] + kb * resp.g2b.values[i] +
                                     kc * resp.g2c.values[i];
                weighted_sum += w * histogram_entropy_bits(band, cfg.histogram_bins);
                weight_total += w;
            }
        }
    }
    return weighted_sum / weight_total;
}

ScalarField subband_energy_dense(const RasterImage& img, const SubbandConfig& cfg) {
    if (cfg.n_scales < 1 || cfg.n_orientations < 2)
        throw ValidationError("subband_energy_dense: invalid decomposition shape");
    const LabImage lab = srgb_to_lab(img);
    const QuadratureBank bank = make_quadrature_bank(cfg.sigma_px);
    const double pi = std::acos(-1.0);

    ScalarField out(img.width, img.height, img.deg_per_px, 0.0);
    const ScalarField* channels[3] = {&lab.L, &lab.a, &lab.b};
    for (int c = 0; c < 3; ++c) {
        const double w = (c == 0) ? 1.0 : cfg.chroma_weight;
        const auto pyr = gaussian_pyramid(*channels[c], cfg.n_scales);
        for (int s = 0; s < cfg.n_scales; ++s) {
            const SteerableResponses resp = steerable_responses(pyr[s], bank);
            ScalarField level_energy(pyr[s].width, pyr[s].height, pyr[s].deg_per_px, 0.0);
            for (int k = 0; k < cfg.n_orientations; ++k) {
                const ScalarField e = steer_energy(resp, k * pi / cfg.n_orientations);
                for (std::size_t i = 0; i < level_energy.size(); ++i)
                    level_energy.values[i] += e.values[i];
            }
            if (s == 0) {
                for (std::size_t i = 0; i < out.size(); ++i)
                    out.values[i] += w * level_energy.values[i];
            } else {
                const ScalarField up =
                    upsample_bilinear(level_energy, img.width, img.height, img.deg_per_px);
                for (std::size_t i = 0; i < out.size(); ++i) out.values[i] += w * up.values[i];
            }
        }
    }
    require_finite(out, "subband_energy_dense");
    return out;
}

DenseResult dense_map(ModelKind kind, const RasterImage& img, const ModelConfig& cfg) {
    DenseResult res;
    switch (kind) {
        case ModelKind::FeatureCongestion: {
            const fc::FcResult r = fc::fc_map(img, cfg.fc);
            res.map = r.map;
            res.score = r.score;
            return res;
        }
        case ModelKind::EdgeDensity:
            res.map = edge_density_dense(img);
            break;
        case ModelKind::SubbandEnergy:
            res.map = subband_energy_dense(img, cfg.subband);
            break;
    }
    res.score = res.map.mean();
    return res;
}

fov::FfcScore foveated_score(ModelKind kind, const RasterImage& img, double fix_x, double fix_y,
                             double target_x, double target_y, const fov::FfcConfig& pipeline,
                             const ModelConfig& cfg) {
    RasterImage operating = pipeline.half_resolution ? half_resolution(img) : img;
    const double sx = static_cast<double>(operating.width) / img.width;
    const double sy = static_cast<double>(operating.height) / img.height;
    const DenseResult dense = dense_map(kind, operating, cfg);
    const PeripheralArchitecture arch = build_architecture(pipeline.arch);
    return fov::foveated_pipeline(dense.map, arch, fix_x * sx, fix_y * sy, target_x * sx,
                                  target_y * sy, pipeline);
}

}  // namespace models
}  // namespace fovc
