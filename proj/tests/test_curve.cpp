#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nsac/curve.hpp"

using namespace nsac;

TEST_CASE("circle geometry: curvature, orthogonality, unit frames") {
    Curve c = make_circle({0.0, 0.0}, 0.25, 256);
    for (int i = 0; i < c.n; ++i) {
        CHECK(c.curvature[i] == doctest::Approx(4.0).epsilon(1e-6));
        CHECK(std::abs(c.tangent[i].dot(c.normal[i])) <= 1e-12);
        CHECK(c.tangent[i].norm() == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(c.normal[i].norm() == doctest::Approx(1.0).epsilon(1e-10));
        // interior normal points to the center
        Vec2 to_center = Vec2{0, 0} - c.x[i];
        CHECK(c.normal[i].dot(to_center) > 0.0);
    }
    CHECK(c.reach_estimate() == doctest::Approx(0.25).epsilon(1e-6));
}

TEST_CASE("ellipse curvature extrema") {
    const double a = 0.3, b = 0.2;
    std::vector<Vec2> pts(256);
    for (int i = 0; i < 256; ++i) {
        double s = 2.0 * M_PI * i / 256;
        pts[i] = {a * std::cos(s), b * std::sin(s)};
    }
    Curve c = build_curve(pts);
    double kmax = 0.0, kmin = 1e30;
    for (double k : c.curvature) { kmax = std::max(kmax, k); kmin = std::min(kmin, k); }
    CHECK(kmax == doctest::Approx(a / (b * b)).epsilon(1e-3));  // = 7.5
    CHECK(kmin == doctest::Approx(b / (a * a)).epsilon(1e-3));
}

TEST_CASE("self-intersecting input is rejected") {
    // figure-eight-ish polygon
    std::vector<Vec2> pts(64);
    for (int i = 0; i < 64; ++i) {
        double s = 2.0 * M_PI * i / 64;
        pts[i] = {0.3 * std::sin(2 * s), 0.2 * std::sin(s)};
    }
    CHECK_THROWS_AS(build_curve(pts), ValidationError);
}

TEST_CASE("signed distance on a circle") {
    Curve c = make_circle({0.0, 0.0}, 0.25, 256);

    auto cp = signed_distance(c, {0.3, 0.0});
    CHECK(cp.d == doctest::Approx(-0.05).epsilon(1e-8));  // outside is the minus phase
    CHECK(std::abs(cp.s) <= 1e-8);

    auto on = signed_distance(c, c.x[37]);
    CHECK(std::abs(on.d) <= 1e-10);

    auto in = signed_distance(c, {0.2 * std::cos(1.0), 0.2 * std::sin(1.0)});
    CHECK(in.d == doctest::Approx(0.05).epsilon(1e-6));
    CHECK(in.s == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("medial axis guard") {
    Curve c = make_circle({0.0, 0.0}, 0.25, 256);
    CHECK_THROWS(signed_distance(c, {0.0, 0.0}));  // center: beyond the reliable tube
}

TEST_CASE("eikonal property |grad d0| = 1 by finite differences") {
    Curve c = make_circle({0.1, -0.2}, 0.3, 256);
    const double fd = 1e-6;
    for (double r : {-0.1, -0.05, 0.05, 0.1}) {
        for (double s : {0.3, 1.7, 4.0}) {
            Vec2 p = c.eval(s) + r * c.unit_normal(s);
            double dx = (signed_distance(c, {p.x + fd, p.y}).d - signed_distance(c, {p.x - fd, p.y}).d) / (2 * fd);
            double dy = (signed_distance(c, {p.x, p.y + fd}).d - signed_distance(c, {p.x, p.y - fd}).d) / (2 * fd);
            CHECK(std::hypot(dx, dy) == doctest::Approx(1.0).epsilon(1e-5));
            // grad d0 . grad S0 = 0: gradient of d is the normal; S varies tangentially
            double sx = (signed_distance(c, {p.x + fd, p.y}).s - signed_distance(c, {p.x - fd, p.y}).s) / (2 * fd);
            double sy = (signed_distance(c, {p.x, p.y + fd}).s - signed_distance(c, {p.x, p.y - fd}).s) / (2 * fd);
            CHECK(std::abs(dx * sx + dy * sy) <= 1e-4 * std::hypot(sx, sy));
        }
    }
}
