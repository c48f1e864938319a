/**
 * @file roi.hpp
 * @brief Target-centered regions of interest and target masks.
 */

#pragma once

#include <algorithm>
#include <cmath>

#include "fovc/field.hpp"

namespace fovc {

/// Axis-aligned square ROI centered on a target location, sized in degrees.
struct RoiSpec {
    double center_x = 0.0;  // pixels
    double center_y = 0.0;
    double side_deg = 6.0;

    void validate() const {
        if (!(side_deg > 0.0)) throw ValidationError("RoiSpec: side must be positive");
    }
};

/// Pixel rectangle [x0,x1) x [y0,y1).
struct PixelRect {
    int x0 = 0, y0 = 0, x1 = 0, y1 = 0;

    int width() const { return x1 - x0; }
    int height() const { return y1 - y0; }
    bool empty() const { return x1 <= x0 || y1 <= y0; }
    bool contains(int x, int y) const { return x >= x0 && x < x1 && y >= y0 && y < y1; }
};

/// ROI in pixel coordinates, clipped to the field. Throws on empty
/// intersection.
inline PixelRect clip_roi(const RoiSpec& roi, int width, int height, double deg_per_px) {
    roi.validate();
    const int side = std::max(1, static_cast<int>(std::lround(roi.side_deg / deg_per_px)));
    PixelRect r;
    r.x0 = static_cast<int>(std::lround(roi.center_x)) - side / 2;
    r.y0 = static_cast<int>(std::lround(roi.center_y)) - side / 2;
    r.x1 = r.x0 + side;
    r.y1 = r.y0 + side;
    r.x0 = std::max(r.x0, 0);
    r.y0 = std::max(r.y0, 0);
    r.x1 = std::min(r.x1, width);
    r.y1 = std::min(r.y1, height);
    if (r.empty()) throw ValidationError("RoiSpec: ROI does not intersect the image");
    return r;
}

/// Optional bounding box of the target; masked pixels are excluded from
/// pooling maxima and from every mean.
struct TargetMask {
    bool present = false;
    PixelRect box;

    bool masks(int x, int y) const { return present && box.contains(x, y); }

    static TargetMask none() { return TargetMask{}; }

    static TargetMask centered(double cx, double cy, double size_deg, double deg_per_px,
                               int width, int height) {
        if (!(size_deg > 0.0)) return none();
        const int side = std::max(1, static_cast<int>(std::lround(size_deg / deg_per_px)));
        TargetMask m;
        m.present = true;
        m.box.x0 = std::max(0, static_cast<int>(std::lround(cx)) - side / 2);
        m.box.y0 = std::max(0, static_cast<int>(std::lround(cy)) - side / 2);
        m.box.x1 = std::min(width, m.box.x0 + side);
        m.box.y1 = std::min(height, m.box.y0 + side);
        if (m.box.empty()) return none();
        return m;
    }
};

}  // namespace fovc
