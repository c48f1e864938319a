/**
 * @file run_config.hpp
 * @brief Resolved run parameters: defaults <- config file <- CLI flags,
 *        plus the content hash stamped into every JSON output.
 */

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fovc/alt_models.hpp"
#include "fovc/foveation.hpp"

namespace fovc {
namespace cfg {

struct RunConfig {
    double deg_per_px = 0.044;
    fov::FfcConfig pipeline;
    models::ModelConfig model_cfg;
    models::ModelKind model = models::ModelKind::FeatureCongestion;
    std::vector<double> sweep_roi_deg = {4, 6, 8, 10, 12};
    std::uint64_t seed = 0;
    int bootstrap_B = 10000;
    int jobs = 1;

    /// Canonical JSON of every parameter (keys sorted by the JSON library).
    std::string to_json_string() const;

    /// FNV-1a 64 over the canonical JSON, as 16 hex digits.
    std::string hash() const;

    /// Overlays values from a JSON config file; unknown keys are rejected.
    void apply_file(const std::string& path);
};

std::uint64_t fnv1a64(const std::string& data);

}  // namespace cfg
}  // namespace fovc
