#include "doctest.h"

#include "iab/geometry.hpp"

#include <cmath>
#include <algorithm>

using namespace iab;

namespace {

bool brute_los(const Point2D& tx, const Point2D& rx, const BlockageField& field) {
    for (const WallSegment& w : field.walls()) {
        const auto [a, b] = w.endpoints();
        if (segments_intersect(tx, rx, a, b)) return false;
    }
    return true;
}

scalar_t brute_min_distance(const PointList& pts) {
    scalar_t best = INFINITY;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = 0; j < pts.size(); ++j)
            if (i != j) best = std::min(best, std::hypot(pts[i].x() - pts[j].x(), pts[i].y() - pts[j].y()));
    return best;
}

}  // namespace

TEST_CASE("segments_intersect basic cases") {
    CHECK(segments_intersect(Point2D(0, 0), Point2D(1, 1), Point2D(0, 1), Point2D(1, 0)));
    CHECK_FALSE(segments_intersect(Point2D(0, 0), Point2D(1, 0), Point2D(0, 1), Point2D(1, 1)));
    CHECK(segments_intersect(Point2D(0, 0), Point2D(2, 0), Point2D(1, 0), Point2D(3, 0)));
    // collinear but disjoint
    CHECK_FALSE(segments_intersect(Point2D(0, 0), Point2D(1, 0), Point2D(2, 0), Point2D(3, 0)));
    // touching at an endpoint
    CHECK(segments_intersect(Point2D(0, 0), Point2D(1, 0), Point2D(1, 0), Point2D(1, 5)));
}

TEST_CASE("segments_intersect is symmetric") {
    Rng rng(7);
    std::uniform_real_distribution<double> u(-5, 5);
    for (int i = 0; i < 2000; ++i) {
        Point2D a(u(rng), u(rng)), b(u(rng), u(rng)), c(u(rng), u(rng)), d(u(rng), u(rng));
        const bool r = segments_intersect(a, b, c, d);
        CHECK(r == segments_intersect(c, d, a, b));
        CHECK(r == segments_intersect(b, a, d, c));
    }
}

TEST_CASE("min_pairwise_distance") {
    CHECK(min_pairwise_distance(PointList{Point2D(0, 0), Point2D(3, 4)}) == doctest::Approx(5.0));
    CHECK(min_pairwise_distance(PointList{Point2D(0, 0), Point2D(1, 0), Point2D(10, 0)}) == doctest::Approx(1.0));
    CHECK_THROWS_AS(min_pairwise_distance(PointList{Point2D(0, 0)}), Error);
    CHECK_THROWS_AS(min_pairwise_distance(PointList{}), Error);

    Rng rng(11);
    const DiskRegion area(Point2D::Zero(), 100.0);
    for (int rep = 0; rep < 20; ++rep) {
        PointList pts;
        for (int i = 0; i < 100; ++i) pts.push_back(sample_uniform_in_disk(area, rng));
        CHECK(min_pairwise_distance(pts) == doctest::Approx(brute_min_distance(pts)).epsilon(1e-12));
    }
}

TEST_CASE("min_pairwise_distance works on float points") {
    const std::vector<Point2<float>> pts{Point2<float>(0, 0), Point2<float>(0, 2), Point2<float>(5, 5)};
    CHECK(min_pairwise_distance<float>(std::span<const Point2<float>>(pts)) == doctest::Approx(2.0f));
}

TEST_CASE("DiskRegion") {
    CHECK_THROWS_AS(DiskRegion(Point2D::Zero(), 0.0), Error);
    CHECK_THROWS_AS(DiskRegion(Point2D::Zero(), -1.0), Error);
    const DiskRegion d(Point2D(1, 1), 2.0);
    CHECK(d.contains(Point2D(3, 1)));
    CHECK_FALSE(d.contains_strictly(Point2D(3, 1)));
    CHECK(d.contains_strictly(Point2D(2, 1)));
    CHECK(DiskRegion(Point2D::Zero(), 707.1).area() / kSquareMetersPerKm2 == doctest::Approx(1.5708).epsilon(1e-4));
}

TEST_CASE("sample_fhppp") {
    const DiskRegion area(Point2D::Zero(), 707.1);
    Rng rng(3);
    CHECK(sample_fhppp(area, 0.0, rng).empty());
    CHECK_THROWS_AS(sample_fhppp(area, -1.0, rng), Error);

    const int draws = 1000;
    const double mean = 500.0 * area.area() / kSquareMetersPerKm2;
    double total = 0;
    bool inside = true;
    for (int i = 0; i < draws; ++i) {
        const PointList pts = sample_fhppp(area, 500.0, rng);
        total += static_cast<double>(pts.size());
        for (const auto& p : pts) inside = inside && p.norm() <= 707.1;
    }
    CHECK(inside);
    CHECK(std::abs(total / draws - mean) < 3.0 * std::sqrt(mean / draws));
}

TEST_CASE("sample_fhppp is deterministic per stream") {
    const DiskRegion area(Point2D::Zero(), 300.0);
    Rng a(99), b(99);
    const PointList pa = sample_fhppp(area, 200.0, a);
    const PointList pb = sample_fhppp(area, 200.0, b);
    REQUIRE(pa.size() == pb.size());
    for (std::size_t i = 0; i < pa.size(); ++i) CHECK(pa[i] == pb[i]);
}

TEST_CASE("generate_blockages") {
    const DiskRegion area(Point2D::Zero(), 707.1);
    Rng rng(5);
    CHECK(generate_blockages(area, 0.0, 10.0, rng).empty());
    CHECK_THROWS_AS(generate_blockages(area, 500.0, 0.0, rng), Error);

    const BlockageField f = generate_blockages(area, 500.0, 10.0, rng);
    CHECK(f.density() == 500.0);
    CHECK(f.walls().size() > 600);
    for (const auto& w : f.walls()) {
        const auto [a, b] = w.endpoints();
        CHECK((a - b).norm() == doctest::Approx(10.0));
        CHECK(w.orientation >= 0.0);
        CHECK(w.orientation < kTwoPi);
        CHECK(area.contains(w.midpoint));
    }
}

TEST_CASE("is_los") {
    const BlockageField empty;
    CHECK(is_los(Point2D(0, 0), Point2D(100, 0), empty));
    CHECK_THROWS_AS(is_los(Point2D(1, 1), Point2D(1, 1), empty), Error);

    const BlockageField wall({WallSegment{Point2D(50, 0), 10.0, kPi / 2}}, 1.0);
    CHECK_FALSE(is_los(Point2D(0, 0), Point2D(100, 0), wall));
    CHECK(is_los(Point2D(0, 20), Point2D(100, 20), wall));
    // endpoint touching the wall does not block the open segment
    CHECK(is_los(Point2D(50, 5), Point2D(50, 100), wall) == is_los(Point2D(50, 100), Point2D(50, 5), wall));
}

TEST_CASE("is_los matches brute force and is symmetric") {
    const DiskRegion area(Point2D::Zero(), 707.1);
    Rng rng(21);
    for (int field_rep = 0; field_rep < 10; ++field_rep) {
        const BlockageField f = generate_blockages(area, 500.0, 10.0, rng);
        for (int i = 0; i < 100; ++i) {
            const Point2D tx = sample_uniform_in_disk(area, rng);
            const Point2D rx = sample_uniform_in_disk(area, rng);
            const bool los = is_los(tx, rx, f);
            CHECK(los == brute_los(tx, rx, f));
            CHECK(los == is_los(rx, tx, f));
        }
    }
}

TEST_CASE("is_los with an endpoint outside the wall field") {
    const DiskRegion area(Point2D::Zero(), 100.0);
    Rng rng(4);
    const BlockageField f = generate_blockages(area, 5000.0, 10.0, rng);
    for (int i = 0; i < 200; ++i) {
        const Point2D tx = sample_uniform_in_disk(area, rng);
        const Point2D rx(400.0, -300.0 + i);
        CHECK(is_los(tx, rx, f) == brute_los(tx, rx, f));
    }
}

TEST_CASE("hexagonal_layout") {
    const DiskRegion area(Point2D(10, -5), 500.0);
    CHECK_THROWS_AS(hexagonal_layout(0, area), Error);
    CHECK_THROWS_AS(hexagonal_layout(hex_capacity(kMaxHexRings) + 1, area), Error);

    const PointList one = hexagonal_layout(1, area);
    REQUIRE(one.size() == 1);
    CHECK(one[0] == area.center);

    const PointList seven = hexagonal_layout(7, area);
    REQUIRE(seven.size() == 7);
    CHECK(seven[0] == area.center);
    std::vector<double> angles;
    for (std::size_t i = 1; i < 7; ++i) {
        const Point2D d = seven[i] - area.center;
        CHECK(d.norm() == doctest::Approx(500.0));
        angles.push_back(std::atan2(d.y(), d.x()));
    }
    std::sort(angles.begin(), angles.end());
    for (std::size_t i = 0; i < 6; ++i) {
        const double gap = i + 1 < 6 ? angles[i + 1] - angles[i] : angles[0] + kTwoPi - angles[5];
        CHECK(gap == doctest::Approx(kPi / 3));
    }

    for (std::size_t n : {2u, 5u, 7u, 19u, 31u, 40u, 80u}) {
        const PointList pts = hexagonal_layout(n, area);
        CHECK(pts.size() == n);
        int rings = 0;
        while (hex_capacity(rings) < n) ++rings;
        const double pitch = area.radius / rings;
        CHECK(min_pairwise_distance(pts) == doctest::Approx(pitch).epsilon(1e-9));
        for (const auto& p : pts) CHECK((p - area.center).norm() <= area.radius * (1 + 1e-12));
    }
}
