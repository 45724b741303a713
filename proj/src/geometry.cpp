#include "iab/geometry.hpp"

#include <cmath>
#include <string>

namespace iab {

DiskRegion::DiskRegion(const Point2D& c, scalar_t r) : center(c), radius(r) {
    if (!(r > 0) || !std::isfinite(r)) {
        throw Error("DiskRegion: radius must be positive and finite");
    }
    if (!c.allFinite()) {
        throw Error("DiskRegion: center must be finite");
    }
}

std::pair<Point2D, Point2D> WallSegment::endpoints() const {
    const Point2D half = 0.5 * length * Point2D(std::cos(orientation), std::sin(orientation));
    return {midpoint - half, midpoint + half};
}

BlockageField::BlockageField(std::vector<WallSegment> walls, scalar_t density)
    : walls_(std::move(walls)), density_(density) {
    if (walls_.empty()) {
        return;
    }
    ends_.reserve(walls_.size());
    scalar_t longest = 0;
    Point2D lo = Point2D::Constant(std::numeric_limits<scalar_t>::infinity());
    Point2D hi = -lo;
    for (const auto& w : walls_) {
        if (!(w.length > 0)) {
            throw Error("BlockageField: wall length must be positive");
        }
        ends_.push_back(w.endpoints());
        lo = lo.cwiseMin(ends_.back().first).cwiseMin(ends_.back().second);
        hi = hi.cwiseMax(ends_.back().first).cwiseMax(ends_.back().second);
        longest = std::max(longest, w.length);
    }

    // Cells a few walls long keep per-cell lists short without making long
    // links walk too many cells.
    const Point2D extent = hi - lo;
    cell_ = std::max({4 * longest, extent.maxCoeff() / 256, scalar_t(1e-6)});
    origin_ = lo - Point2D::Constant(cell_);
    nx_ = static_cast<int>(std::ceil(extent.x() / cell_)) + 2;
    ny_ = static_cast<int>(std::ceil(extent.y() / cell_)) + 2;
    cells_.assign(static_cast<std::size_t>(nx_) * ny_, {});

    const scalar_t pad = 1e-9 * cell_;
    for (std::size_t k = 0; k < walls_.size(); ++k) {
        const auto& [a, b] = ends_[k];
        const Point2D wlo = a.cwiseMin(b) - Point2D::Constant(pad) - origin_;
        const Point2D whi = a.cwiseMax(b) + Point2D::Constant(pad) - origin_;
        const int i0 = std::clamp(static_cast<int>(std::floor(wlo.x() / cell_)), 0, nx_ - 1);
        const int i1 = std::clamp(static_cast<int>(std::floor(whi.x() / cell_)), 0, nx_ - 1);
        const int j0 = std::clamp(static_cast<int>(std::floor(wlo.y() / cell_)), 0, ny_ - 1);
        const int j1 = std::clamp(static_cast<int>(std::floor(whi.y() / cell_)), 0, ny_ - 1);
        for (int j = j0; j <= j1; ++j) {
            for (int i = i0; i <= i1; ++i) {
                cells_[static_cast<std::size_t>(j) * nx_ + i].push_back(k);
            }
        }
    }
}

bool BlockageField::inside_grid(const Point2D& p) const {
    const Point2D q = p - origin_;
    return q.x() >= 0 && q.y() >= 0 && q.x() < nx_ * cell_ && q.y() < ny_ * cell_;
}

// The link is the open segment tx-rx: touching it only at tx or rx does not block.
bool BlockageField::blocked_by(std::size_t wall, const Point2D& tx, const Point2D& rx) const {
    const auto& [w0, w1] = ends_[wall];
    const int o1 = orientation(tx, rx, w0);
    const int o2 = orientation(tx, rx, w1);
    const int o3 = orientation(w0, w1, tx);
    const int o4 = orientation(w0, w1, rx);

    if (o1 * o2 < 0 && o3 * o4 < 0) {
        return true;
    }
    const auto strictly_inside = [&](const Point2D& p) {
        return on_segment(tx, rx, p) && p != tx && p != rx;
    };
    if (o1 == 0 && o2 == 0) {
        // collinear: overlap with the open link interval
        const Point2D d = rx - tx;
        const scalar_t len2 = d.squaredNorm();
        const scalar_t t0 = (w0 - tx).dot(d) / len2;
        const scalar_t t1 = (w1 - tx).dot(d) / len2;
        return std::max(t0, t1) > 0 && std::min(t0, t1) < 1;
    }
    if (o1 == 0 && strictly_inside(w0)) return true;
    if (o2 == 0 && strictly_inside(w1)) return true;
    return false;
}

bool BlockageField::line_of_sight(const Point2D& tx, const Point2D& rx) const {
    if (walls_.empty()) {
        return true;
    }
    if (!inside_grid(tx) || !inside_grid(rx)) {
        for (std::size_t k = 0; k < walls_.size(); ++k) {
            if (blocked_by(k, tx, rx)) return false;
        }
        return true;
    }

    // Amanatides-Woo traversal of the cells crossed by the link.
    const Point2D a = (tx - origin_) / cell_;
    const Point2D b = (rx - origin_) / cell_;
    int i = static_cast<int>(std::floor(a.x()));
    int j = static_cast<int>(std::floor(a.y()));
    const int iend = static_cast<int>(std::floor(b.x()));
    const int jend = static_cast<int>(std::floor(b.y()));
    const Point2D d = b - a;
    const int si = d.x() > 0 ? 1 : (d.x() < 0 ? -1 : 0);
    const int sj = d.y() > 0 ? 1 : (d.y() < 0 ? -1 : 0);
    constexpr scalar_t inf = std::numeric_limits<scalar_t>::infinity();
    const scalar_t dtx = si != 0 ? std::abs(1.0 / d.x()) : inf;
    const scalar_t dty = sj != 0 ? std::abs(1.0 / d.y()) : inf;
    scalar_t tmx = si > 0 ? (std::floor(a.x()) + 1 - a.x()) * dtx : (si < 0 ? (a.x() - std::floor(a.x())) * dtx : inf);
    scalar_t tmy = sj > 0 ? (std::floor(a.y()) + 1 - a.y()) * dty : (sj < 0 ? (a.y() - std::floor(a.y())) * dty : inf);

    const auto test_cell = [&](int ci, int cj) {
        if (ci < 0 || cj < 0 || ci >= nx_ || cj >= ny_) return false;
        for (std::size_t k : cells_[static_cast<std::size_t>(cj) * nx_ + ci]) {
            if (blocked_by(k, tx, rx)) return true;
        }
        return false;
    };

    const int max_steps = nx_ + ny_ + 4;
    for (int step = 0; step < max_steps; ++step) {
        if (test_cell(i, j)) return false;
        if (i == iend && j == jend) break;
        if (tmx < tmy) {
            tmx += dtx;
            i += si;
        } else if (tmy < tmx) {
            tmy += dty;
            j += sj;
        } else {
            // exact corner crossing: cover both neighbours
            if (test_cell(i + si, j) || test_cell(i, j + sj)) return false;
            tmx += dtx;
            tmy += dty;
            i += si;
            j += sj;
        }
        if (tmx > 1 + 1e-12 && tmy > 1 + 1e-12 && !(i == iend && j == jend)) {
            // rounding overshoot; finish on the end cell
            return !test_cell(iend, jend);
        }
    }
    return true;
}

Point2D sample_uniform_in_disk(const DiskRegion& region, Rng& rng) {
    std::uniform_real_distribution<scalar_t> unit(0.0, 1.0);
    const scalar_t r = region.radius * std::sqrt(unit(rng));
    const scalar_t theta = kTwoPi * unit(rng);
    return region.center + r * Point2D(std::cos(theta), std::sin(theta));
}

PointList sample_fhppp(const DiskRegion& region, scalar_t density, Rng& rng) {
    if (!(density >= 0) || !std::isfinite(density)) {
        throw Error("sample_fhppp: density must be finite and non-negative");
    }
    const scalar_t mean = density * region.area() / kSquareMetersPerKm2;
    if (mean == 0) {
        return {};
    }
    std::poisson_distribution<std::size_t> count_dist(mean);
    const std::size_t n = count_dist(rng);
    PointList points;
    points.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        points.push_back(sample_uniform_in_disk(region, rng));
    }
    return points;
}

BlockageField generate_blockages(const DiskRegion& region, scalar_t density, scalar_t wall_length, Rng& rng) {
    if (!(wall_length > 0)) {
        throw Error("generate_blockages: wall length must be positive");
    }
    const PointList midpoints = sample_fhppp(region, density, rng);
    std::uniform_real_distribution<scalar_t> angle(0.0, kTwoPi);
    std::vector<WallSegment> walls;
    walls.reserve(midpoints.size());
    for (const auto& m : midpoints) {
        walls.push_back({m, wall_length, angle(rng)});
    }
    return BlockageField(std::move(walls), density);
}

bool is_los(const Point2D& tx, const Point2D& rx, const BlockageField& field) {
    if (tx == rx) {
        throw Error("is_los: transmitter and receiver coincide");
    }
    return field.line_of_sight(tx, rx);
}

PointList hexagonal_layout(std::size_t count, const DiskRegion& region) {
    if (count == 0) {
        throw Error("hexagonal_layout: count must be at least 1");
    }
    if (count > hex_capacity(kMaxHexRings)) {
        throw Error("hexagonal_layout: count " + std::to_string(count) + " exceeds the capacity of " +
                    std::to_string(kMaxHexRings) + " rings");
    }
    int rings = 0;
    while (hex_capacity(rings) < count) {
        ++rings;
    }

    PointList points{region.center};
    if (rings == 0) {
        return points;
    }
    const scalar_t pitch = region.radius / rings;

    for (int k = 1; k <= rings; ++k) {
        PointList ring;
        ring.reserve(6 * static_cast<std::size_t>(k));
        for (int m = 0; m < 6; ++m) {
            const scalar_t a0 = m * kPi / 3;
            const scalar_t a1 = (m + 1) * kPi / 3;
            const Point2D c0 = k * pitch * Point2D(std::cos(a0), std::sin(a0));
            const Point2D c1 = k * pitch * Point2D(std::cos(a1), std::sin(a1));
            for (int s = 0; s < k; ++s) {
                ring.push_back(region.center + c0 + (c1 - c0) * (static_cast<scalar_t>(s) / k));
            }
        }
        const std::size_t wanted = std::min(ring.size(), count - points.size());
        if (wanted == ring.size()) {
            points.insert(points.end(), ring.begin(), ring.end());
        } else {
            for (std::size_t q = 0; q < wanted; ++q) {
                points.push_back(ring[(q * ring.size()) / wanted]);
            }
        }
    }
    return points;
}

}  // namespace iab
