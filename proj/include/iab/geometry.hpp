#pragma once

#include "iab/random.hpp"
#include "iab/types.hpp"

#include <algorithm>
#include <cstddef>
#include <limits>
#include <span>
#include <utility>
#include <vector>

namespace iab {

/** Closed disk; used for the network area and for forbidden placement zones. */
struct DiskRegion {
    Point2D center = Point2D::Zero();
    scalar_t radius = 1.0;

    DiskRegion() = default;
    DiskRegion(const Point2D& c, scalar_t r);

    /// Area in square meters.
    scalar_t area() const { return kPi * radius * radius; }

    bool contains(const Point2D& p) const { return (p - center).squaredNorm() <= radius * radius; }
    /// Strict interior; boundary points are outside.
    bool contains_strictly(const Point2D& p) const { return (p - center).squaredNorm() < radius * radius; }
};

/** Straight blocking wall described by its midpoint, length and orientation. */
struct WallSegment {
    Point2D midpoint = Point2D::Zero();
    scalar_t length = 1.0;
    scalar_t orientation = 0.0;  ///< radians in [0, 2*pi)

    std::pair<Point2D, Point2D> endpoints() const;
};

/// Set of walls with a uniform-grid index so line-of-sight queries only test
/// walls near the link.
class BlockageField {
public:
    BlockageField() = default;
    BlockageField(std::vector<WallSegment> walls, scalar_t density);

    const std::vector<WallSegment>& walls() const { return walls_; }
    /// Generating intensity in walls per km^2.
    scalar_t density() const { return density_; }
    bool empty() const { return walls_.empty(); }

    /// True iff the open segment tx-rx crosses no wall.
    bool line_of_sight(const Point2D& tx, const Point2D& rx) const;

private:
    bool blocked_by(std::size_t wall, const Point2D& tx, const Point2D& rx) const;
    bool inside_grid(const Point2D& p) const;

    std::vector<WallSegment> walls_;
    std::vector<std::pair<Point2D, Point2D>> ends_;
    scalar_t density_ = 0.0;

    // grid index
    Point2D origin_ = Point2D::Zero();
    scalar_t cell_ = 1.0;
    int nx_ = 0;
    int ny_ = 0;
    std::vector<std::vector<std::size_t>> cells_;
};

// --- segment predicates -----------------------------------------------------

template <typename Scalar>
Scalar cross2(const Point2<Scalar>& a, const Point2<Scalar>& b) {
    return a.x() * b.y() - a.y() * b.x();
}

/// Sign of the turn a -> b -> c.
template <typename Scalar>
int orientation(const Point2<Scalar>& a, const Point2<Scalar>& b, const Point2<Scalar>& c) {
    const Scalar v = cross2<Scalar>(b - a, c - a);
    return (v > Scalar(0)) - (v < Scalar(0));
}

/// p assumed collinear with a-b; true iff p lies within the closed bounding box.
template <typename Scalar>
bool on_segment(const Point2<Scalar>& a, const Point2<Scalar>& b, const Point2<Scalar>& p) {
    return std::min(a.x(), b.x()) <= p.x() && p.x() <= std::max(a.x(), b.x()) &&
           std::min(a.y(), b.y()) <= p.y() && p.y() <= std::max(a.y(), b.y());
}

/// True iff closed segments a0-a1 and b0-b1 share at least one point.
/// Collinear overlap counts as an intersection.
template <typename Scalar>
bool segments_intersect(const Point2<Scalar>& a0, const Point2<Scalar>& a1,
                        const Point2<Scalar>& b0, const Point2<Scalar>& b1) {
    const int o1 = orientation(a0, a1, b0);
    const int o2 = orientation(a0, a1, b1);
    const int o3 = orientation(b0, b1, a0);
    const int o4 = orientation(b0, b1, a1);

    if (o1 != o2 && o3 != o4) {
        return true;
    }
    if (o1 == 0 && on_segment(a0, a1, b0)) return true;
    if (o2 == 0 && on_segment(a0, a1, b1)) return true;
    if (o3 == 0 && on_segment(b0, b1, a0)) return true;
    if (o4 == 0 && on_segment(b0, b1, a1)) return true;
    return false;
}

/// Minimum Euclidean distance over all unordered pairs. Throws for fewer than two points.
template <typename Scalar>
Scalar min_pairwise_distance(std::span<const Point2<Scalar>> points) {
    if (points.size() < 2) {
        throw Error("min_pairwise_distance: at least two points required");
    }
    Scalar best = std::numeric_limits<Scalar>::infinity();
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            best = std::min(best, (points[i] - points[j]).squaredNorm());
        }
    }
    return std::sqrt(best);
}

inline scalar_t min_pairwise_distance(const PointList& points) {
    return min_pairwise_distance<scalar_t>(std::span<const Point2D>(points));
}

// --- sampling and layouts ---------------------------------------------------

/// One point uniformly distributed on the disk.
Point2D sample_uniform_in_disk(const DiskRegion& region, Rng& rng);

/// Finite homogeneous Poisson point process on a disk. Density in points per km^2.
PointList sample_fhppp(const DiskRegion& region, scalar_t density, Rng& rng);

/// Germ-grain wall field: FHPPP midpoints with i.i.d. uniform orientations.
BlockageField generate_blockages(const DiskRegion& region, scalar_t density, scalar_t wall_length, Rng& rng);

/// Line-of-sight test between two distinct points.
bool is_los(const Point2D& tx, const Point2D& rx, const BlockageField& field);

/// Largest ring the hexagonal layout will build.
constexpr int kMaxHexRings = 64;

/// Number of lattice points in rings 0..rings.
constexpr std::size_t hex_capacity(int rings) {
    return 1 + 3 * static_cast<std::size_t>(rings) * static_cast<std::size_t>(rings + 1);
}

/// Triangular-lattice layout filled ring by ring from the region center.
/// The pitch is chosen so the corners of the outermost used ring sit on the
/// region boundary. A partially used outer ring takes evenly spread sites.
PointList hexagonal_layout(std::size_t count, const DiskRegion& region);

}  // namespace iab
