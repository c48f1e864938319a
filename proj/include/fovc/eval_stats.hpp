/**
 * @file eval_stats.hpp
 * @brief Behavioral trial ingestion, bootstrap correlation analysis and the
 *        ROI x metric parameter sweep.
 */

#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "fovc/alt_models.hpp"
#include "fovc/field.hpp"
#include "fovc/foveation.hpp"

namespace fovc {
namespace stats {

/// One behavioral data point from the forced-fixation task.
struct TrialRecord {
    std::string image_id;
    double fix_x = 0.0, fix_y = 0.0;  // pixels
    double tgt_x = 0.0, tgt_y = 0.0;  // pixels
    double ecc_deg = 0.0;
    double hit_rate = 0.0;
};

struct LoadDiagnostics {
    std::vector<std::string> rejected;  // row-numbered, invariant violations
    std::vector<std::string> warnings;  // row-numbered, ecc/geometry mismatch
};

/// Parses the trial CSV (header image_id,fix_x,fix_y,tgt_x,tgt_y,ecc_deg,
/// hit_rate). Rows violating value invariants are rejected with diagnostics;
/// rows whose stated eccentricity disagrees with the fixation-target
/// geometry by more than 0.5 degrees load with a warning. Structural
/// problems (missing header, non-numeric fields) throw IoError with the
/// line number.
std::vector<TrialRecord> load_trials(const std::string& path, double deg_per_px,
                                     LoadDiagnostics* diagnostics = nullptr);

/// Sample Pearson correlation; throws on constant input or n < 3.
double pearson_r(std::span<const double> x, std::span<const double> y);

struct CorrelationReport {
    double r_point = 0.0;  // correlation of the data as given
    double r_mean = 0.0;   // mean over bootstrap resamples
    double r_std = 0.0;    // standard deviation over resamples (reported as +-)
    double p_value = 1.0;  // one-sided permutation p for negative correlation
    int n = 0;
    int df = 0;  // n - 2
    int bootstrap_B = 0;
};

/// Deterministic bounded sampling on top of the standard mt19937_64 engine
/// (distribution classes are implementation-defined; this is not).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    std::uint64_t next() { return engine_(); }
    std::size_t index(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }
    double uniform01() { return (engine_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
};

/// B resamples with replacement for (r_mean, r_std); p-value from B
/// permutations of y. Bit-identical for identical (data, B, seed).
CorrelationReport bootstrap_correlation(std::span<const double> x, std::span<const double> y,
                                        int B = 10000, std::uint64_t seed = 0);

struct SweepOptions {
    std::vector<double> roi_sides_deg = {4, 6, 8, 10, 12};
    std::vector<fov::Metric> metrics = {fov::Metric::L1, fov::Metric::L2, fov::Metric::KL};
    models::ModelKind model = models::ModelKind::FeatureCongestion;
    models::ModelConfig model_cfg;
    fov::FfcConfig pipeline;  // roi_side_deg / metric are overridden per cell
    std::string image_dir;    // <image_dir>/<image_id>.png
    int bootstrap_B = 10000;
    std::uint64_t seed = 0;
    int jobs = 1;
};

struct SweepCell {
    double roi_deg = 0.0;
    fov::Metric metric = fov::Metric::L1;
    CorrelationReport report;
};

struct SweepTable {
    std::vector<SweepCell> cells;   // row-major: metric x roi
    CorrelationReport baseline;     // plain (non-foveated) score correlation
    std::vector<double> roi_sides_deg;
    std::vector<fov::Metric> metrics;
    models::ModelKind model = models::ModelKind::FeatureCongestion;
};

/// Image loader used by the sweep; injected so tests and tools control IO.
using ImageLoader = std::function<RasterImage(const std::string& image_id)>;

/// One correlation report per (roi, metric) cell plus the non-foveated
/// baseline. Dense maps and rasterizations are computed once per image /
/// (image, fixation) and shared across cells.
SweepTable sweep(const std::vector<TrialRecord>& trials, const SweepOptions& options,
                 const ImageLoader& loader);

/// Aligned text rendering of the table (rows: metrics; columns: ROI sizes).
std::string format_sweep_text(const SweepTable& table);

/// CSV rendering: roi_deg,metric,r_mean,r_std,p_value,n,df,B.
std::string format_sweep_csv(const SweepTable& table);

}  // namespace stats
}  // namespace fovc
