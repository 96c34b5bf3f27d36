#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "vdesc/frames.hpp"

namespace vdesc {

enum class FallbackPolicy {
    kMiddleFrame,
};

struct ExtractionConfig {
    int window = 15;
    int max_keyframes = 16;
    FallbackPolicy fallback = FallbackPolicy::kMiddleFrame;
};

struct Keyframe {
    int frame_index = 0;
    double timestamp_seconds = 0.0;
    double peak_value = 0.0;
};

struct KeyframeSet {
    std::string video_id;
    std::vector<Keyframe> keyframes;
    ExtractionConfig config;
    bool used_fallback = false;
};

// Mean absolute per-channel L*u*v* difference between two frames of equal
// dimensions (averaged over pixel count * 3 channels).
double frame_difference(const LuvFrame& a, const LuvFrame& b);

// Centered moving average; the window is truncated at the series edges.
// The window must be odd and >= 1.
std::vector<double> smooth_series(const std::vector<double>& series, int window);

// Indices i with series[i-1] < series[i] > series[i+1]; endpoints and
// plateaus are excluded by the strict comparisons.
std::vector<std::size_t> local_maxima(const std::vector<double>& series);

// Inter-frame difference series -> smoothing -> strict peaks. A peak at
// difference index i selects frame i+1. With no peaks, falls back to the
// middle frame. When more than max_keyframes peaks exist, the largest
// smoothed peaks are kept and re-sorted temporally.
KeyframeSet extract_keyframes(const std::vector<Frame>& frames,
                              const ExtractionConfig& config,
                              const std::string& video_id = "");

}  // namespace vdesc
