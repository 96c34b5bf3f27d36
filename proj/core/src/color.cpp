#include "vdesc/color.hpp"

#include <cmath>

namespace vdesc {

namespace {

constexpr double kM[3][3] = {
    {0.4124564, 0.3575761, 0.1804375},
    {0.2126729, 0.7151522, 0.0721750},
    {0.0193339, 0.1191920, 0.9503041},
};

constexpr double kXn = kM[0][0] + kM[0][1] + kM[0][2];
constexpr double kYn = kM[1][0] + kM[1][1] + kM[1][2];
constexpr double kZn = kM[2][0] + kM[2][1] + kM[2][2];
constexpr double kDn = kXn + 15.0 * kYn + 3.0 * kZn;
constexpr double kUpN = 4.0 * kXn / kDn;
constexpr double kVpN = 9.0 * kYn / kDn;

constexpr double kEps = 216.0 / 24389.0;
constexpr double kKappa = 24389.0 / 27.0;

double srgb_to_linear(std::uint8_t v) {
    double c = v / 255.0;
    return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

}  // namespace

Luv rgb_to_luv(std::uint8_t r8, std::uint8_t g8, std::uint8_t b8) {
    double r = srgb_to_linear(r8);
    double g = srgb_to_linear(g8);
    double b = srgb_to_linear(b8);

    double x = kM[0][0] * r + kM[0][1] * g + kM[0][2] * b;
    double y = kM[1][0] * r + kM[1][1] * g + kM[1][2] * b;
    double z = kM[2][0] * r + kM[2][1] * g + kM[2][2] * b;

    double yr = y / kYn;
    double l = yr > kEps ? 116.0 * std::cbrt(yr) - 16.0 : kKappa * yr;

    double d = x + 15.0 * y + 3.0 * z;
    double up = kUpN;
    double vp = kVpN;
    if (d != 0.0) {
        up = 4.0 * x / d;
        vp = 9.0 * y / d;
    }
    return {l, 13.0 * l * (up - kUpN), 13.0 * l * (vp - kVpN)};
}

LuvFrame frame_to_luv(const Frame& frame) {
    LuvFrame out;
    out.width = frame.width;
    out.height = frame.height;
    out.data.resize(frame.rgb.size());
    for (std::size_t i = 0; i + 2 < frame.rgb.size(); i += 3) {
        Luv p = rgb_to_luv(frame.rgb[i], frame.rgb[i + 1], frame.rgb[i + 2]);
        out.data[i] = p.l;
        out.data[i + 1] = p.u;
        out.data[i + 2] = p.v;
    }
    return out;
}

}  // namespace vdesc
