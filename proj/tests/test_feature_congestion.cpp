#include <doctest.h>

#include <cmath>

#include "fovc/color.hpp"
#include "fovc/feature_congestion.hpp"
#include "fovc/pyramid.hpp"
#include "support/fixtures.hpp"

using namespace fovc;
using fc::FcConfig;

namespace {

LabImage flat_lab(int w, int h, double dpp, double L, double a, double b) {
    LabImage lab;
    lab.L = ScalarField(w, h, dpp, L);
    lab.a = ScalarField(w, h, dpp, a);
    lab.b = ScalarField(w, h, dpp, b);
    return lab;
}

FcConfig unit_px_config(double pool_sigma_px) {
    FcConfig cfg;
    cfg.pool_sigma_deg = pool_sigma_px;  // tests run at 1 degree per pixel
    return cfg;
}

RasterImage rotate90(const RasterImage& img) {
    RasterImage out(img.height, img.width, img.deg_per_px);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            const double* p = img.pixel(x, y);
            out.set_pixel(img.height - 1 - y, x, p[0], p[1], p[2]);
        }
    return out;
}

}  // namespace

TEST_CASE("color_clutter zero on uniform chroma, localized at boundaries") {
    const FcConfig cfg = unit_px_config(3.0);
    LabImage lab = flat_lab(48, 40, 1.0, 60, 12, -9);
    const ScalarField uniform = fc::color_clutter(lab, 0, cfg);
    for (double v : uniform.values) CHECK(v < 1e-9);

    // Two-tone chroma: variability concentrates at the vertical boundary.
    for (int y = 0; y < 40; ++y)
        for (int x = 24; x < 48; ++x) lab.a.at(x, y) = 30.0;
    const ScalarField twotone = fc::color_clutter(lab, 0, cfg);
    double boundary = 0.0, interior = 0.0;
    for (int y = 10; y < 30; ++y) {
        boundary = std::max(boundary, twotone.at(24, y));
        interior = std::max(interior, twotone.at(6, y));
    }
    CHECK(boundary > 10.0 * interior);
    CHECK(boundary > 0.1);
}

TEST_CASE("color_clutter matches the pooled noise statistic") {
    // a,b ~ U[-c, c]: sqrt(var_a + var_b) -> c * sqrt(2/3).
    const double c = 20.0;
    LabImage lab = flat_lab(96, 96, 1.0, 50, 0, 0);
    for (int y = 0; y < 96; ++y)
        for (int x = 0; x < 96; ++x) {
            lab.a.at(x, y) = c * (2.0 * testing::lattice_noise(11, x, y) - 1.0);
            lab.b.at(x, y) = c * (2.0 * testing::lattice_noise(12, x, y) - 1.0);
        }
    const FcConfig cfg = unit_px_config(6.0);
    const ScalarField map = fc::color_clutter(lab, 0, cfg);
    double sum = 0.0;
    int n = 0;
    for (int y = 20; y < 76; ++y)
        for (int x = 20; x < 76; ++x) {
            sum += map.at(x, y);
            ++n;
        }
    const double expected = c * std::sqrt(2.0 / 3.0);
    CHECK(std::fabs(sum / n - expected) / expected < 0.10);
}

TEST_CASE("contrast_clutter zero on constants, homogeneous in amplitude") {
    const FcConfig cfg = unit_px_config(4.0);
    const LabImage flat = flat_lab(48, 48, 1.0, 70, 0, 0);
    for (double v : fc::contrast_clutter(flat, 0, cfg).values) CHECK(v < 1e-9);

    auto checker = [&](double amp) {
        LabImage lab = flat_lab(48, 48, 1.0, 50, 0, 0);
        for (int y = 0; y < 48; ++y)
            for (int x = 0; x < 48; ++x)
                lab.L.at(x, y) = 50 + (((x / 4 + y / 4) % 2) ? amp : -amp);
        return fc::contrast_clutter(lab, 0, cfg).mean();
    };
    const double full = checker(20.0);
    const double half = checker(10.0);
    CHECK(full / half == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("contrast_clutter peaks near a step edge") {
    const double pool = 4.0;
    const FcConfig cfg = unit_px_config(pool);
    LabImage lab = flat_lab(64, 32, 1.0, 30, 0, 0);
    for (int y = 0; y < 32; ++y)
        for (int x = 32; x < 64; ++x) lab.L.at(x, y) = 80.0;
    const ScalarField map = fc::contrast_clutter(lab, 0, cfg);
    int max_x = 0;
    double best = -1.0;
    for (int x = 0; x < 64; ++x)
        if (map.at(x, 16) > best) {
            best = map.at(x, 16);
            max_x = x;
        }
    CHECK(std::fabs(max_x - 31.5) <= pool);
}

TEST_CASE("orientation_clutter: gratings are quiet, plaids are loud") {
    const FcConfig cfg = unit_px_config(3.0);
    const double omega = std::sqrt(2.0) / cfg.orient_sigma_px;

    const LabImage flat = flat_lab(64, 64, 1.0, 50, 0, 0);
    for (double v : fc::orientation_clutter(flat, 0, cfg).values) CHECK(v < 1e-9);

    LabImage grating = flat_lab(64, 64, 1.0, 50, 0, 0);
    LabImage plaid = flat_lab(64, 64, 1.0, 50, 0, 0);
    for (int y = 0; y < 64; ++y)
        for (int x = 0; x < 64; ++x) {
            grating.L.at(x, y) = 50 + 20 * std::cos(omega * x);
            plaid.L.at(x, y) = 50 + 10 * std::cos(omega * x) + 10 * std::cos(omega * y);
        }
    const ScalarField g = fc::orientation_clutter(grating, 0, cfg);
    const ScalarField p = fc::orientation_clutter(plaid, 0, cfg);
    double g_interior = 0.0, p_interior = 0.0;
    int n = 0;
    for (int y = 16; y < 48; ++y)
        for (int x = 16; x < 48; ++x) {
            g_interior += g.at(x, y);
            p_interior += p.at(x, y);
            ++n;
        }
    g_interior /= n;
    p_interior /= n;
    CHECK(g_interior < 0.05 * p_interior);
}

TEST_CASE("orientation_clutter separates plaid from blank") {
    const FcConfig cfg = unit_px_config(3.0);
    const double omega = std::sqrt(2.0) / cfg.orient_sigma_px;
    LabImage lab = flat_lab(64, 64, 1.0, 50, 0, 0);
    for (int y = 0; y < 64; ++y)
        for (int x = 0; x < 32; ++x)
            lab.L.at(x, y) = 50 + 10 * std::cos(omega * x) + 10 * std::cos(omega * y);
    const ScalarField map = fc::orientation_clutter(lab, 0, cfg);
    double plaid_mean = 0.0, blank_mean = 0.0;
    for (int y = 0; y < 64; ++y)
        for (int x = 0; x < 32; ++x) {
            plaid_mean += map.at(x, y);
            blank_mean += map.at(x + 32, y);
        }
    CHECK(plaid_mean > blank_mean);
}

TEST_CASE("fc_map zero law and score definition") {
    const RasterImage gray = testing::make_constant_image(64, 48, 0.25, 0.5);
    FcConfig cfg;
    cfg.pool_sigma_deg = 1.0;
    const fc::FcResult res = fc::fc_map(gray, cfg);
    CHECK(res.score < 1e-6);
    for (double v : res.map.values) CHECK(v >= 0.0);

    const RasterImage tex = testing::make_fixture_image(5, 64, 48, 0.25);
    const fc::FcResult r2 = fc::fc_map(tex, cfg);
    CHECK(r2.score == doctest::Approx(r2.map.mean()).epsilon(1e-12));
    for (double v : r2.map.values) CHECK(v >= 0.0);
}

TEST_CASE("fc_map propagates pyramid dimension errors") {
    FcConfig cfg;
    cfg.n_scales = 5;  // needs at least 16 px per axis
    const RasterImage tiny = testing::make_constant_image(8, 8, 0.25, 0.5);
    CHECK_THROWS_AS(fc::fc_map(tiny, cfg), ValidationError);
}

TEST_CASE("fc_map rises when chroma texture is added") {
    FcConfig cfg;
    cfg.pool_sigma_deg = 1.0;
    RasterImage base = testing::make_constant_image(64, 64, 0.25, 0.5);
    RasterImage textured = base;
    for (int y = 0; y < 64; ++y)
        for (int x = 0; x < 32; ++x) {
            const double n = testing::lattice_noise(21, x, y);
            double* p = textured.pixel(x, y);
            p[0] = std::min(1.0, 0.35 + 0.3 * n);
            p[2] = std::max(0.0, 0.65 - 0.3 * n);
        }
    CHECK(fc::fc_map(textured, cfg).score > fc::fc_map(base, cfg).score);
}

TEST_CASE("fc_map is 90-degree rotation invariant within 1%") {
    FcConfig cfg;
    cfg.pool_sigma_deg = 0.75;
    const RasterImage img = testing::make_fixture_image(7, 192, 192, 0.25);
    const double s0 = fc::fc_map(img, cfg).score;
    const double s1 = fc::fc_map(rotate90(img), cfg).score;
    CHECK(std::fabs(s1 - s0) / s0 < 0.01);
}

TEST_CASE("fc_map is exactly linear in the feature weights") {
    FcConfig cfg;
    cfg.pool_sigma_deg = 1.0;
    const RasterImage img = testing::make_fixture_image(4, 48, 48, 0.25);
    const double s1 = fc::fc_map(img, cfg).score;
    FcConfig doubled = cfg;
    doubled.w_color *= 2;
    doubled.w_contrast *= 2;
    doubled.w_orient *= 2;
    const double s2 = fc::fc_map(img, doubled).score;
    CHECK(s2 == 2.0 * s1);
}

TEST_CASE("scale collapse dominates every per-scale plane") {
    FcConfig cfg;
    cfg.pool_sigma_deg = 1.0;
    cfg.w_contrast = 0.0;
    cfg.w_orient = 0.0;
    cfg.w_color = 1.0;
    cfg.norm_color = 1.0;
    const RasterImage img = testing::make_fixture_image(6, 64, 64, 0.25);
    const LabImage lab = srgb_to_lab(img);
    const fc::FcResult res = fc::fc_map(img, cfg);
    // With only the color feature active, map * norm is the collapsed color
    // plane; it must dominate each upsampled per-scale map.
    for (int s = 0; s < cfg.n_scales; ++s) {
        const ScalarField level = fc::color_clutter(lab, s, cfg);
        const ScalarField up = upsample_bilinear(level, 64, 64, img.deg_per_px);
        for (std::size_t i = 0; i < res.map.size(); ++i)
            CHECK(res.map.values[i] >= up.values[i] - 1e-12);
    }
}

TEST_CASE("covariance-volume color statistic stays below the trace statistic") {
    FcConfig trace_cfg = unit_px_config(4.0);
    FcConfig vol_cfg = trace_cfg;
    vol_cfg.color_stat = fc::ColorStat::CovVolume;

    LabImage lab = flat_lab(64, 48, 1.0, 55, 0, 0);
    for (int y = 0; y < 48; ++y)
        for (int x = 0; x < 64; ++x) {
            lab.a.at(x, y) = 25 * (2 * testing::lattice_noise(91, x, y) - 1);
            lab.b.at(x, y) = 25 * (2 * testing::lattice_noise(92, x, y) - 1);
        }
    const ScalarField vol = fc::color_clutter(lab, 0, vol_cfg);
    const ScalarField tr = fc::color_clutter(lab, 0, trace_cfg);
    for (std::size_t i = 0; i < vol.size(); ++i) {
        CHECK(vol.values[i] >= 0.0);
        // det^(1/4) <= sqrt(trace) for 2x2 PSD matrices.
        CHECK(vol.values[i] <= tr.values[i] + 1e-12);
    }
    // Uniform chroma still reads zero.
    const LabImage flat = flat_lab(32, 32, 1.0, 55, 8, -3);
    for (double v : fc::color_clutter(flat, 0, vol_cfg).values) CHECK(v < 1e-9);
}

TEST_CASE("fc_roi_score clips, masks and errors") {
    fc::FcResult res;
    res.map = ScalarField(60, 40, 1.0, 0.0);
    // Left half zero, right half 4.0: block means are hand computable.
    for (int y = 0; y < 40; ++y)
        for (int x = 30; x < 60; ++x) res.map.at(x, y) = 4.0;
    res.score = res.map.mean();

    RoiSpec full{30.0, 20.0, 60.0};
    CHECK(fc::fc_roi_score(res, full) == doctest::Approx(res.score));

    RoiSpec zero_side{8.0, 20.0, 6.0};
    CHECK(fc::fc_roi_score(res, zero_side) == 0.0);

    // 6x6 ROI straddling the boundary: half zeros, half fours.
    RoiSpec straddle{30.0, 20.0, 6.0};
    CHECK(fc::fc_roi_score(res, straddle) == doctest::Approx(2.0));

    RoiSpec outside{500.0, 500.0, 6.0};
    CHECK_THROWS_AS(fc::fc_roi_score(res, outside), ValidationError);

    TargetMask mask;
    mask.present = true;
    mask.box = PixelRect{27, 17, 33, 23};  // exactly the straddle ROI
    CHECK_THROWS_AS(fc::fc_roi_score(res, straddle, mask), ValidationError);
}
