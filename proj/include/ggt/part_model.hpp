#ifndef GGT_PART_MODEL_HPP
#define GGT_PART_MODEL_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "ggt/geometry.hpp"

namespace ggt {

using PartId = std::int64_t;

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A superpixel-like region: center, pixel area, optional foreground
/// probability and an L1-normalized appearance histogram.
struct Part {
    PartId id = 0;
    Vec2 center;
    double area = 1.0;
    std::optional<double> fg_prob;
    std::vector<double> feature;

    /// Side of the square this part is rasterized as.
    double diameter() const { return std::sqrt(area); }
    /// Absent probability counts as foreground.
    double foreground() const { return fg_prob.value_or(1.0); }

    friend bool operator==(const Part&, const Part&) = default;
};

struct Frame {
    std::int64_t index = 0;
    std::vector<Part> parts;
    std::optional<Box> gt_box;

    friend bool operator==(const Frame&, const Frame&) = default;
};

struct Canvas {
    double width = 0.0;
    double height = 0.0;
    friend constexpr bool operator==(const Canvas&, const Canvas&) = default;
};

struct Sequence {
    int feature_dim = 0;
    Canvas canvas;
    Box init_box;
    std::optional<std::pair<int, int>> superpixel_range;
    std::vector<Frame> frames;

    friend bool operator==(const Sequence&, const Sequence&) = default;
};

/// Element of the target part set. `part.center` always equals `last_center`.
struct TargetPart {
    Part part;
    std::int64_t last_seen_frame = 0;
    Vec2 last_center;
    int miss_count = 0;
};

struct SearchArea {
    Vec2 origin;
    double width = 0.0;
    double height = 0.0;

    bool contains(Vec2 p) const {
        return p.x >= origin.x && p.x <= origin.x + width && p.y >= origin.y &&
               p.y <= origin.y + height;
    }
    double area() const { return width * height; }
};

/// 3w x 3h window around the previous box center, intersected with the canvas.
inline SearchArea search_area_of(const Box& prev, Canvas canvas, double factor = 3.0) {
    // Centers that drifted off the canvas are pulled back onto it first.
    const double cx = std::clamp(prev.cx, 0.0, canvas.width);
    const double cy = std::clamp(prev.cy, 0.0, canvas.height);
    const double half_w = 0.5 * factor * prev.w;
    const double half_h = 0.5 * factor * prev.h;
    const double x0 = std::max(0.0, cx - half_w);
    const double y0 = std::max(0.0, cy - half_h);
    const double x1 = std::min(canvas.width, cx + half_w);
    const double y1 = std::min(canvas.height, cy + half_h);
    SearchArea area;
    area.origin = {x0, y0};
    area.width = std::max(x1 - x0, 1.0);
    area.height = std::max(y1 - y0, 1.0);
    return area;
}

inline double feature_sum(std::span<const double> feature) {
    double s = 0.0;
    for (double v : feature) s += v;
    return s;
}

inline void validate_part(const Part& part, int feature_dim) {
    const auto tag = "part " + std::to_string(part.id) + ": ";
    if (!std::isfinite(part.center.x) || !std::isfinite(part.center.y))
        throw ValidationError(tag + "center is not finite");
    if (!(part.area > 0.0) || !std::isfinite(part.area))
        throw ValidationError(tag + "area must be positive");
    if (part.fg_prob && !(*part.fg_prob >= 0.0 && *part.fg_prob <= 1.0))
        throw ValidationError(tag + "fg probability outside [0,1]");
    if (feature_dim > 0 && static_cast<int>(part.feature.size()) != feature_dim)
        throw ValidationError(tag + "feature has " + std::to_string(part.feature.size()) +
                              " bins, expected " + std::to_string(feature_dim));
    for (double v : part.feature)
        if (!(v >= 0.0) || !std::isfinite(v))
            throw ValidationError(tag + "feature has a negative or non-finite bin");
    if (std::abs(feature_sum(part.feature) - 1.0) > 1e-6)
        throw ValidationError(tag + "feature is not L1-normalized");
}

inline void validate_frame(const Frame& frame, int feature_dim) {
    std::unordered_set<PartId> seen;
    for (const auto& part : frame.parts) {
        if (!seen.insert(part.id).second)
            throw ValidationError("frame " + std::to_string(frame.index) + ": duplicate part id " +
                                  std::to_string(part.id));
        validate_part(part, feature_dim);
    }
    if (frame.gt_box && !(frame.gt_box->w > 0.0 && frame.gt_box->h > 0.0))
        throw ValidationError("frame " + std::to_string(frame.index) + ": gt box must have positive size");
}

inline void validate_sequence(const Sequence& seq) {
    if (seq.feature_dim <= 0) throw ValidationError("feature_dim must be positive");
    if (!(seq.canvas.width > 0.0 && seq.canvas.height > 0.0))
        throw ValidationError("canvas must have positive size");
    if (!(seq.init_box.w > 0.0 && seq.init_box.h > 0.0))
        throw ValidationError("init box must have positive size");
    for (std::size_t i = 0; i < seq.frames.size(); ++i) {
        if (seq.frames[i].index < 0) throw ValidationError("negative frame index");
        if (i > 0 && seq.frames[i].index <= seq.frames[i - 1].index)
            throw ValidationError("frame indices must be strictly increasing");
        validate_frame(seq.frames[i], seq.feature_dim);
    }
}

}  // namespace ggt

#endif  // GGT_PART_MODEL_HPP
