#pragma once

#include <cstdint>

#include "vdesc/frames.hpp"

namespace vdesc {

// sRGB 8-bit -> CIE 1976 L*u*v* under the D65 white point. The white point
// is the sRGB matrix applied to (1,1,1) so that pure white maps to exactly
// (100, 0, 0) and grayscale pixels have u* = v* = 0.
Luv rgb_to_luv(std::uint8_t r, std::uint8_t g, std::uint8_t b);

LuvFrame frame_to_luv(const Frame& frame);

}  // namespace vdesc
