#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vdesc/frames.hpp"

namespace vdesc {

std::vector<std::uint8_t> read_binary_file(const std::string& path);
void write_binary_file(const std::string& path, const std::vector<std::uint8_t>& bytes);

Frame decode_jpeg(const std::vector<std::uint8_t>& bytes);
Frame decode_png(const std::vector<std::uint8_t>& bytes);
// Sniffs the magic bytes and dispatches to the right decoder.
Frame decode_image(const std::vector<std::uint8_t>& bytes);
Frame load_image_file(const std::string& path);

std::vector<std::uint8_t> encode_jpeg(const Frame& frame, int quality);
std::vector<std::uint8_t> encode_png(const Frame& frame);

// Area-average downscale so the longest side is <= max_side. Frames already
// within the bound are returned unchanged; upscaling never happens.
Frame resize_max_side(const Frame& frame, int max_side);

}  // namespace vdesc
