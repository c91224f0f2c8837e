#ifndef GGT_GEOMETRY_HPP
#define GGT_GEOMETRY_HPP

#include <algorithm>
#include <cmath>

namespace ggt {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
    friend constexpr bool operator==(Vec2, Vec2) = default;
};

inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(b - a); }

// Axis-aligned box in center + size convention.
struct Box {
    double cx = 0.0;
    double cy = 0.0;
    double w = 0.0;
    double h = 0.0;

    constexpr Vec2 center() const { return {cx, cy}; }
    constexpr double left() const { return cx - 0.5 * w; }
    constexpr double right() const { return cx + 0.5 * w; }
    constexpr double top() const { return cy - 0.5 * h; }
    constexpr double bottom() const { return cy + 0.5 * h; }
    constexpr double area() const { return w * h; }

    bool contains(Vec2 p) const {
        return p.x >= left() && p.x <= right() && p.y >= top() && p.y <= bottom();
    }

    friend constexpr bool operator==(const Box&, const Box&) = default;
};

inline double intersection_area(const Box& a, const Box& b) {
    const double ix = std::min(a.right(), b.right()) - std::max(a.left(), b.left());
    const double iy = std::min(a.bottom(), b.bottom()) - std::max(a.top(), b.top());
    if (ix <= 0.0 || iy <= 0.0) return 0.0;
    return ix * iy;
}

inline double iou(const Box& a, const Box& b) {
    const double inter = intersection_area(a, b);
    const double uni = a.area() + b.area() - inter;
    return uni > 0.0 ? inter / uni : 0.0;
}

inline double center_error(const Box& a, const Box& b) { return distance(a.center(), b.center()); }

}  // namespace ggt

#endif  // GGT_GEOMETRY_HPP
