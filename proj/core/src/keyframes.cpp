#include "vdesc/keyframes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "vdesc/color.hpp"
#include "vdesc/errors.hpp"

namespace vdesc {

double frame_difference(const LuvFrame& a, const LuvFrame& b) {
    if (a.width != b.width || a.height != b.height) {
        throw DimensionMismatch("frame_difference: mismatched dimensions " +
                                std::to_string(a.width) + "x" + std::to_string(a.height) +
                                " vs " + std::to_string(b.width) + "x" +
                                std::to_string(b.height));
    }
    if (a.data.size() != b.data.size()) {
        throw DimensionMismatch("frame_difference: mismatched buffer sizes");
    }
    if (a.data.empty()) {
        throw InvalidArgument("frame_difference: empty frames");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        sum += std::abs(a.data[i] - b.data[i]);
    }
    return sum / static_cast<double>(a.data.size());
}

std::vector<double> smooth_series(const std::vector<double>& series, int window) {
    if (window < 1 || window % 2 == 0) {
        throw InvalidArgument("smooth_series: window must be odd and >= 1, got " +
                              std::to_string(window));
    }
    std::vector<double> out(series.size());
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(series.size());
    const std::ptrdiff_t half = window / 2;
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, i - half);
        std::ptrdiff_t hi = std::min<std::ptrdiff_t>(n - 1, i + half);
        double sum = 0.0;
        for (std::ptrdiff_t j = lo; j <= hi; ++j) sum += series[j];
        out[i] = sum / static_cast<double>(hi - lo + 1);
    }
    return out;
}

std::vector<std::size_t> local_maxima(const std::vector<double>& series) {
    std::vector<std::size_t> out;
    for (std::size_t i = 1; i + 1 < series.size(); ++i) {
        if (series[i] > series[i - 1] && series[i] > series[i + 1]) {
            out.push_back(i);
        }
    }
    return out;
}

KeyframeSet extract_keyframes(const std::vector<Frame>& frames,
                              const ExtractionConfig& config,
                              const std::string& video_id) {
    if (frames.empty()) {
        throw InvalidArgument("extract_keyframes: no frames");
    }
    if (config.max_keyframes < 1) {
        throw InvalidArgument("extract_keyframes: max_keyframes must be >= 1");
    }

    KeyframeSet set;
    set.video_id = video_id;
    set.config = config;

    std::vector<double> diffs;
    if (frames.size() > 1) {
        diffs.reserve(frames.size() - 1);
        LuvFrame prev = frame_to_luv(frames[0]);
        for (std::size_t i = 1; i < frames.size(); ++i) {
            LuvFrame cur = frame_to_luv(frames[i]);
            diffs.push_back(frame_difference(prev, cur));
            prev = std::move(cur);
        }
    }

    std::vector<double> smoothed = smooth_series(diffs, config.window);
    std::vector<std::size_t> peaks = local_maxima(smoothed);

    if (peaks.empty()) {
        const Frame& mid = frames[frames.size() / 2];
        set.keyframes.push_back({mid.index, mid.timestamp_seconds, 0.0});
        set.used_fallback = true;
        return set;
    }

    if (peaks.size() > static_cast<std::size_t>(config.max_keyframes)) {
        std::stable_sort(peaks.begin(), peaks.end(), [&](std::size_t a, std::size_t b) {
            return smoothed[a] > smoothed[b];
        });
        peaks.resize(static_cast<std::size_t>(config.max_keyframes));
        std::sort(peaks.begin(), peaks.end());
    }

    for (std::size_t p : peaks) {
        const Frame& f = frames[p + 1];
        set.keyframes.push_back({f.index, f.timestamp_seconds, smoothed[p]});
    }
    return set;
}

}  // namespace vdesc
