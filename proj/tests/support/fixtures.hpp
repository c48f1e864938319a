/**
 * @file fixtures.hpp
 * @brief Deterministic pseudo-natural fixture images and trial geometry for
 *        tests. Everything derives from integer hashes, so repeated runs
 *        produce identical pixels on any platform.
 */

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fovc/field.hpp"

namespace fovc::testing {

std::uint64_t splitmix64(std::uint64_t x);

/// Uniform [0,1) from a (seed, x, y) lattice coordinate.
double lattice_noise(std::uint64_t seed, int xi, int yi);

/// Multi-octave value noise in [0,1].
double value_noise(std::uint64_t seed, double x, double y, int octaves, double base_cell);

/// Fixture image `index` (0-based). Clutter rises with the index: texture
/// amplitude, patch count and palette contrast all scale. 512x380 at
/// 0.044 deg/px unless overridden.
RasterImage make_fixture_image(int index, int width = 512, int height = 380,
                               double deg_per_px = 0.044);

/// Writes fixture_00.png .. fixture_<n-1>.png under dir; returns image ids.
std::vector<std::string> write_fixture_set(const std::string& dir, int count);

/// Uniform mid-gray image.
RasterImage make_constant_image(int width, int height, double deg_per_px, double gray = 0.5);

}  // namespace fovc::testing
