#pragma once

// Detection-quality scalars: intersection-over-union, average precision and
// average recall. Boxes are closed axis-aligned rectangles in continuous
// pixel coordinates.

#include <algorithm>
#include <cstdint>

#include "edgeperf/error.hpp"

namespace edgeperf {

struct BoundingBox {
    double x_min = 0.0;
    double y_min = 0.0;
    double x_max = 0.0;
    double y_max = 0.0;

    bool valid() const noexcept { return x_min <= x_max && y_min <= y_max; }
    double width() const noexcept { return x_max - x_min; }
    double height() const noexcept { return y_max - y_min; }
    double area() const noexcept { return width() * height(); }
};

struct DetectionCounts {
    std::uint64_t true_positives = 0;
    std::uint64_t false_positives = 0;
    std::uint64_t false_negatives = 0;
};

inline constexpr double kMinIouThreshold = 0.5;
inline constexpr double kMaxIouThreshold = 0.95;

/// |a ∩ b| / |a ∪ b|, or 0 when the union has zero area.
inline double iou(const BoundingBox& a, const BoundingBox& b) {
    if (!a.valid() || !b.valid()) throw DomainViolation("iou: box corners out of order");
    double ix = std::max(0.0, std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min));
    double iy = std::max(0.0, std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min));
    double inter = ix * iy;
    double uni = a.area() + b.area() - inter;
    if (uni <= 0.0) return 0.0;
    return std::clamp(inter / uni, 0.0, 1.0);
}

/// T_p / (T_p + F_p); 0 when nothing was detected.
inline double average_precision(const DetectionCounts& c) noexcept {
    auto denom = c.true_positives + c.false_positives;
    if (denom == 0) return 0.0;
    return static_cast<double>(c.true_positives) / static_cast<double>(denom);
}

/// T_p / (T_p + F_n); 0 when there was nothing to find.
inline double average_recall(const DetectionCounts& c) noexcept {
    auto denom = c.true_positives + c.false_negatives;
    if (denom == 0) return 0.0;
    return static_cast<double>(c.true_positives) / static_cast<double>(denom);
}

// A detection counts when its IoU with the ground truth strictly exceeds the
// threshold. Thresholds outside [0.5, 0.95] are rejected.
inline bool detection_success(const BoundingBox& detected, const BoundingBox& truth,
                              double iou_threshold) {
    if (!(iou_threshold >= kMinIouThreshold && iou_threshold <= kMaxIouThreshold))
        throw DomainViolation("detection_success: IoU threshold outside [0.5, 0.95]");
    return iou(detected, truth) > iou_threshold;
}

}  // namespace edgeperf
