#pragma once

#include <istream>
#include <string>
#include <vector>

#include "vdesc/frames.hpp"

namespace vdesc {

// Packed RGB24 stream (width*height*3 bytes per frame, no header), as
// produced by an external decoder piping raw video. A trailing partial
// frame is an error.
std::vector<Frame> read_raw_rgb24(std::istream& in, int width, int height, double fps);

// path "-" reads stdin.
std::vector<Frame> read_raw_rgb24_file(const std::string& path, int width, int height,
                                       double fps);

// Reads every .png/.jpg/.jpeg in the directory in lexicographic filename
// order; all images must share one dimension.
std::vector<Frame> read_frames_dir(const std::string& dir, double fps);

}  // namespace vdesc
