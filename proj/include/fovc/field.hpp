/**
 * @file field.hpp
 * @brief Core raster containers shared by every clutter model.
 */

#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace fovc {

/// Input or parameter violates a documented precondition.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File could not be read, parsed or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An internal invariant was broken; indicates a bug, not bad input.
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Row-major 2D grid of reals with degrees-of-visual-angle-per-pixel
/// metadata. Immutable by convention once an operation has returned it;
/// safe to share across threads.
struct ScalarField {
    int width = 0;
    int height = 0;
    double deg_per_px = 0.0;
    std::vector<double> values;

    ScalarField() = default;

    ScalarField(int w, int h, double dpp, double fill = 0.0)
        : width(w), height(h), deg_per_px(dpp),
          values(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill) {
        if (w <= 0 || h <= 0 || dpp <= 0.0)
            throw ValidationError("ScalarField: dimensions and deg_per_px must be positive");
    }

    double& at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }
    double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }

    std::size_t size() const { return values.size(); }

    bool same_shape(const ScalarField& o) const {
        return width == o.width && height == o.height;
    }

    double mean() const {
        if (values.empty()) return 0.0;
        double s = 0.0;
        for (double v : values) s += v;
        return s / static_cast<double>(values.size());
    }

    double max_value() const {
        double m = values.empty() ? 0.0 : values[0];
        for (double v : values) m = std::max(m, v);
        return m;
    }

    double min_value() const {
        double m = values.empty() ? 0.0 : values[0];
        for (double v : values) m = std::min(m, v);
        return m;
    }

    bool all_finite() const {
        for (double v : values)
            if (!std::isfinite(v)) return false;
        return true;
    }
};

/// Throws InternalError if the field carries NaN/Inf. Exported operations
/// call this on their results.
inline void require_finite(const ScalarField& f, const char* what) {
    if (!f.all_finite())
        throw InternalError(std::string("non-finite values in ") + what);
}

/// sRGB raster in [0,1], row-major interleaved triplets.
struct RasterImage {
    int width = 0;
    int height = 0;
    double deg_per_px = 0.0;
    std::vector<double> rgb;  // 3 * width * height

    RasterImage() = default;

    RasterImage(int w, int h, double dpp)
        : width(w), height(h), deg_per_px(dpp),
          rgb(3 * static_cast<std::size_t>(w) * static_cast<std::size_t>(h), 0.0) {
        validate_shape();
    }

    void validate_shape() const {
        if (width <= 0 || height <= 0 || deg_per_px <= 0.0)
            throw ValidationError("RasterImage: width, height and deg_per_px must be positive");
        if (rgb.size() != 3 * static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
            throw ValidationError("RasterImage: pixel buffer does not match dimensions");
    }

    void validate() const {
        validate_shape();
        for (double v : rgb)
            if (!(v >= 0.0 && v <= 1.0))
                throw ValidationError("RasterImage: channel values must lie in [0,1]");
    }

    double* pixel(int x, int y) { return &rgb[3 * (static_cast<std::size_t>(y) * width + x)]; }
    const double* pixel(int x, int y) const {
        return &rgb[3 * (static_cast<std::size_t>(y) * width + x)];
    }

    void set_pixel(int x, int y, double r, double g, double b) {
        double* p = pixel(x, y);
        p[0] = r;
        p[1] = g;
        p[2] = b;
    }
};

/// CIELab planes of equal shape. L in [0,100] on the sRGB gamut.
struct LabImage {
    ScalarField L, a, b;

    void validate() const {
        if (!L.same_shape(a) || !L.same_shape(b) || L.deg_per_px != a.deg_per_px ||
            L.deg_per_px != b.deg_per_px)
            throw ValidationError("LabImage: planes must share dimensions and deg_per_px");
    }
};

}  // namespace fovc
