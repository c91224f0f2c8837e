#ifndef GGT_STATE_ESTIMATION_HPP
#define GGT_STATE_ESTIMATION_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <stdexcept>
#include <span>
#include <utility>
#include <vector>

#include "ggt/mode_parsing.hpp"
#include "ggt/part_model.hpp"

namespace ggt {

/// Square footprint of a part (side sqrt(area)).
struct Region {
    Vec2 center;
    double area = 0.0;
};

struct TargetState {
    Box box;
    double score = 0.0;
};

/// Per-pixel confidence over the searching area; cell (i,j) covers the pixel
/// [origin.x+i, origin.x+i+1) x [origin.y+j, origin.y+j+1).
class ConfidenceMap {
public:
    ConfidenceMap(const SearchArea& area, double fill)
        : origin_(area.origin),
          cols_(std::max<long>(1, std::lround(area.width))),
          rows_(std::max<long>(1, std::lround(area.height))),
          grid_(static_cast<std::size_t>(cols_ * rows_), fill) {}

    long cols() const { return cols_; }
    long rows() const { return rows_; }
    Vec2 origin() const { return origin_; }
    double at(long col, long row) const { return grid_[static_cast<std::size_t>(row * cols_ + col)]; }

    /// Half-open cell range [first, last) whose pixel centers fall in [lo, hi).
    std::pair<long, long> col_range(double lo, double hi) const { return cell_range(lo - origin_.x, hi - origin_.x, cols_); }
    std::pair<long, long> row_range(double lo, double hi) const { return cell_range(lo - origin_.y, hi - origin_.y, rows_); }

    void fill_box(const Box& b, double value) {
        const auto [c0, c1] = col_range(b.left(), b.right());
        const auto [r0, r1] = row_range(b.top(), b.bottom());
        for (long r = r0; r < r1; ++r)
            for (long c = c0; c < c1; ++c) grid_[static_cast<std::size_t>(r * cols_ + c)] = value;
        integral_.clear();
    }

    void build_integral() {
        integral_.assign(static_cast<std::size_t>((cols_ + 1) * (rows_ + 1)), 0.0);
        for (long r = 0; r < rows_; ++r) {
            double row_sum = 0.0;
            for (long c = 0; c < cols_; ++c) {
                row_sum += at(c, r);
                integral_[ii(c + 1, r + 1)] = integral_[ii(c + 1, r)] + row_sum;
            }
        }
    }

    /// Sum over cells [c0,c1) x [r0,r1) via four integral-image taps.
    double sum(long c0, long c1, long r0, long r1) const {
        if (c1 <= c0 || r1 <= r0) return 0.0;
        if (integral_.empty()) throw std::logic_error("ConfidenceMap: build_integral() not called");
        return integral_[ii(c1, r1)] - integral_[ii(c0, r1)] - integral_[ii(c1, r0)] + integral_[ii(c0, r0)];
    }

private:
    static std::pair<long, long> cell_range(double lo, double hi, long n) {
        const long first = static_cast<long>(std::ceil(lo - 0.5));
        const long last = static_cast<long>(std::ceil(hi - 0.5));
        return {std::clamp(first, 0L, n), std::clamp(last, 0L, n)};
    }
    std::size_t ii(long c, long r) const { return static_cast<std::size_t>(r * (cols_ + 1) + c); }

    Vec2 origin_;
    long cols_;
    long rows_;
    std::vector<double> grid_;
    std::vector<double> integral_;
};

inline Box region_box(const Region& r) {
    const double side = std::sqrt(r.area);
    return {r.center.x, r.center.y, side, side};
}

/// lambda[0] on reliable regions, lambda[1] on other candidate regions,
/// lambda[2] elsewhere.
inline ConfidenceMap build_confidence_map(const SearchArea& search, std::span<const Region> reliable,
                                          std::span<const Region> candidates, const std::array<double, 3>& lambda) {
    ConfidenceMap map(search, lambda[2]);
    for (const auto& r : candidates) map.fill_box(region_box(r), lambda[1]);
    for (const auto& r : reliable) map.fill_box(region_box(r), lambda[0]);
    map.build_integral();
    return map;
}

/// Sum of the map over the box, clipped to the map.
inline double box_score(const ConfidenceMap& map, const Box& box) {
    const auto [c0, c1] = map.col_range(box.left(), box.right());
    const auto [r0, r1] = map.row_range(box.top(), box.bottom());
    return map.sum(c0, c1, r0, r1);
}

/// Weighted vote of the reliable parts' displacements applied to the previous
/// center. Falls back to the previous center when nothing is reliable.
inline Vec2 rough_center(std::span<const ReliablePart> reliable, Vec2 prev_center) {
    double total = 0.0;
    Vec2 acc;
    for (const auto& r : reliable) {
        acc = acc + r.weight * (prev_center + (r.candidate_center - r.target_center));
        total += r.weight;
    }
    if (reliable.empty() || !(total > 0.0)) return prev_center;
    return (1.0 / total) * acc;
}

/// Best of the unperturbed state and `samples` random perturbations of center
/// and size, each coordinate uniform in [-delta_max, delta_max].
template <class Rng>
TargetState refine_state(const ConfidenceMap& map, Vec2 rough, double prev_w, double prev_h, double delta_max,
                         int samples, Rng& rng) {
    TargetState best{{rough.x, rough.y, prev_w, prev_h}, 0.0};
    best.score = box_score(map, best.box);
    double best_norm = 0.0;
    if (samples <= 0 || !(delta_max > 0.0)) return best;
    std::uniform_real_distribution<double> delta(-delta_max, delta_max);
    for (int s = 0; s < samples; ++s) {
        const double dx = delta(rng);
        const double dy = delta(rng);
        const double dw = delta(rng);
        const double dh = delta(rng);
        const Box cand{rough.x + dx, rough.y + dy, std::max(1.0, prev_w + dw), std::max(1.0, prev_h + dh)};
        const double score = box_score(map, cand);
        const double pnorm = std::sqrt(dx * dx + dy * dy + dw * dw + dh * dh);
        if (score > best.score || (score == best.score && pnorm < best_norm)) {
            best = {cand, score};
            best_norm = pnorm;
        }
    }
    return best;
}

}  // namespace ggt

#endif  // GGT_STATE_ESTIMATION_HPP
