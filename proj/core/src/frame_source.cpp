#include "vdesc/frame_source.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "vdesc/errors.hpp"
#include "vdesc/image_io.hpp"

namespace vdesc {

std::vector<Frame> read_raw_rgb24(std::istream& in, int width, int height, double fps) {
    if (width < 1 || height < 1) {
        throw InvalidArgument("read_raw_rgb24: width and height must be >= 1");
    }
    if (fps <= 0.0) throw InvalidArgument("read_raw_rgb24: fps must be > 0");

    const std::size_t frame_bytes = static_cast<std::size_t>(width) * height * 3;
    std::vector<Frame> frames;
    int index = 0;
    while (true) {
        Frame f;
        f.width = width;
        f.height = height;
        f.index = index;
        f.timestamp_seconds = index / fps;
        f.rgb.resize(frame_bytes);
        in.read(reinterpret_cast<char*>(f.rgb.data()),
                static_cast<std::streamsize>(frame_bytes));
        std::size_t got = static_cast<std::size_t>(in.gcount());
        if (got == 0) break;
        if (got != frame_bytes) {
            throw IoError("read_raw_rgb24: truncated frame " + std::to_string(index) +
                          " (" + std::to_string(got) + " of " +
                          std::to_string(frame_bytes) + " bytes)");
        }
        frames.push_back(std::move(f));
        ++index;
    }
    return frames;
}

std::vector<Frame> read_raw_rgb24_file(const std::string& path, int width, int height,
                                       double fps) {
    if (path == "-") {
        return read_raw_rgb24(std::cin, width, height, fps);
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open raw stream: " + path);
    return read_raw_rgb24(in, width, height, fps);
}

std::vector<Frame> read_frames_dir(const std::string& dir, double fps) {
    if (fps <= 0.0) throw InvalidArgument("read_frames_dir: fps must be > 0");
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir);

    std::vector<std::string> paths;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        std::string ext = entry.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        if (ext == ".png" || ext == ".jpg" || ext == ".jpeg") {
            paths.push_back(entry.path().string());
        }
    }
    std::sort(paths.begin(), paths.end());
    if (paths.empty()) throw IoError("no .png/.jpg/.jpeg frames in " + dir);

    std::vector<Frame> frames;
    frames.reserve(paths.size());
    for (std::size_t i = 0; i < paths.size(); ++i) {
        Frame f = load_image_file(paths[i]);
        f.index = static_cast<int>(i);
        f.timestamp_seconds = static_cast<double>(i) / fps;
        if (!frames.empty() &&
            (f.width != frames[0].width || f.height != frames[0].height)) {
            throw DimensionMismatch("frame dimensions differ: " + paths[i]);
        }
        frames.push_back(std::move(f));
    }
    return frames;
}

}  // namespace vdesc
