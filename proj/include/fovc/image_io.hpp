/**
 * @file image_io.hpp
 * @brief PNG raster IO, the CMAP binary map format and heatmap rendering.
 *
 * CMAP layout (little endian):
 *   0   4  magic "CMAP"
 *   4   2  format version (currently 1)
 *   6   2  reserved, zero
 *   8   4  width  (u32)
 *   12  4  height (u32)
 *   16  ... row-major IEEE f32 values
 *   end  8  deg_per_px (f64)
 */

#pragma once

#include <cstdint>
#include <string>

#include "fovc/field.hpp"
#include "fovc/peripheral_arch.hpp"

namespace fovc {
namespace io {

/// Reads an 8- or 16-bit PNG into [0,1] sRGB triplets. Gray and palette
/// images expand to RGB; alpha is dropped. deg_per_px is supplied by the
/// caller, never inferred.
RasterImage read_png(const std::string& path, double deg_per_px);

/// Writes an 8-bit RGB PNG from [0,1] triplets.
void write_png(const std::string& path, const RasterImage& img);

constexpr std::uint16_t kCmapVersion = 1;

void write_cmap(const std::string& path, const ScalarField& field);
ScalarField read_cmap(const std::string& path);

/// Min/max normalization used when a heatmap was rendered; stored in the
/// sidecar JSON so files stay comparable.
struct HeatmapRange {
    double min_value = 0.0;
    double max_value = 0.0;
};

/// Renders the field through a fixed perceptually-uniform ramp (viridis),
/// normalized per file; returns the normalization actually applied.
HeatmapRange write_heatmap_png(const std::string& path, const ScalarField& field);

/// Region labels to distinct colors (fovea blue, outside black), for visual
/// inspection of rasterized architectures.
void write_label_png(const std::string& path, const RasterizedArch& raster);

}  // namespace io
}  // namespace fovc
