#pragma once

#include <cstdint>
#include <vector>

namespace vdesc {

// Decoded video frame, 8-bit RGB, row-major, 3 bytes per pixel.
struct Frame {
    int width = 0;
    int height = 0;
    int index = 0;
    double timestamp_seconds = 0.0;
    std::vector<std::uint8_t> rgb;

    std::size_t pixel_count() const {
        return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    }
};

struct Luv {
    double l = 0.0;
    double u = 0.0;
    double v = 0.0;
};

// Per-pixel CIE 1976 L*u*v* values, 3 doubles per pixel, same layout as Frame.
struct LuvFrame {
    int width = 0;
    int height = 0;
    std::vector<double> data;
};

}  // namespace vdesc
